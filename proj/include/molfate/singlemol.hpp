#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "molfate/fluid.hpp"
#include "molfate/network.hpp"
#include "molfate/ssa.hpp"

namespace molfate {

/// One limit rate tau -> tau' under a base reaction:
/// multiplier * lambda(z) / z_sigma(tau) with multiplier = y_sigma(tau) * p.
struct LimitRateEntry {
    StatusId from = 0;
    StatusId to = kCemetery;
    std::size_t reaction = 0;
    double multiplier = 0.0;
    /// y - e_sigma(tau); for mass-action the rate is multiplier * kappa * z^reduced.
    Complex reduced;
};

/// Limit single-molecule rates of the augmented network. Entry k corresponds
/// to aug.tracked()[k].
class LimitRateTable {
public:
    explicit LimitRateTable(const AugmentedNetwork& aug);

    const std::vector<LimitRateEntry>& entries() const noexcept { return entries_; }
    std::size_t statuses() const noexcept { return by_status_.size(); }
    /// Entry indices leaving `tau` (empty for the cemetery).
    std::span<const std::size_t> from_status(StatusId tau) const;
    const ReactionNetwork& network() const noexcept { return net_; }
    const StatusSchema& schema() const noexcept { return schema_; }
    /// Whether rates use the symbolic cancellation (mass-action networks).
    bool simplified() const noexcept { return net_.is_mass_action(); }

    /// Rate of entry k at concentration z. Generic kinetics use the ratio form
    /// and throw SimulationError when z_sigma(tau) <= floor.
    double rate(std::size_t k, std::span<const double> z, double floor = 1e-8) const;
    /// multiplier * lambda(z) / z_sigma(tau) evaluated literally.
    double ratio_rate(std::size_t k, std::span<const double> z) const;
    /// Sum of the rates of entries from tau to another status.
    double total(StatusId tau, std::span<const double> z, double floor = 1e-8) const;

private:
    ReactionNetwork net_;
    StatusSchema schema_;
    std::vector<LimitRateEntry> entries_;
    std::vector<std::vector<std::size_t>> by_status_;
};

LimitRateTable build_limit_rates(const AugmentedNetwork& aug);

/// Total jump intensity out of tau at time t along the fluid solution.
double hazard(const LimitRateTable& table, const FluidSolution& sol, StatusId tau, double t);

struct SingleMoleculeOptions {
    /// Refuse to run when the fluid solution's minimum component is at or
    /// below this value.
    double floor = 1e-8;
    /// Majorant = slack * max of the hazard over dense samples of each cell.
    double slack = 1.05;
    int samples_per_cell = 8;
};

/// Simulates the limit process Y by thinning against a piecewise-constant
/// majorant built once per (table, fluid solution).
class SingleMoleculeSimulator {
public:
    SingleMoleculeSimulator(LimitRateTable table, FluidSolution sol, const SingleMoleculeOptions& options = {});

    const LimitRateTable& table() const noexcept { return table_; }
    const FluidSolution& fluid() const noexcept { return sol_; }

    /// Path on [0, T] (T <= fluid horizon) using the SingleMolecule stream of
    /// (seed, trajectory).
    StatusPath simulate(StatusId tau0, double horizon, std::uint64_t seed, std::uint64_t trajectory = 0) const;

    /// n paths; path i has trajectory id first_id + i and initial status drawn
    /// from `tau0_weights` with the InitialStatus stream.
    std::vector<StatusPath> simulate_batch(const std::vector<double>& tau0_weights, double horizon,
                                           std::uint64_t seed, std::size_t n, unsigned threads,
                                           std::uint64_t first_id = 0) const;

    /// Majorant value of status tau on grid cell i.
    double majorant(StatusId tau, std::size_t cell) const { return majorant_.at(static_cast<std::size_t>(tau)).at(cell); }

private:
    LimitRateTable table_;
    FluidSolution sol_;
    SingleMoleculeOptions options_;
    std::vector<std::vector<double>> majorant_;    // [tau][cell]
    std::vector<std::vector<double>> cumulative_;  // [tau][grid point]
};

/// One-off convenience wrapper around SingleMoleculeSimulator.
StatusPath simulate_y(const LimitRateTable& table, const FluidSolution& sol, StatusId tau0, double horizon,
                      std::uint64_t seed, std::uint64_t trajectory = 0, const SingleMoleculeOptions& options = {});

/// Initial-status weights for a randomly chosen molecule. With an empty
/// `subset` every status gets z_sigma(tau) / alpha(sigma(tau)) (each species'
/// mass split evenly over its statuses); otherwise statuses in `subset` get
/// z_sigma(tau) and the rest 0, e.g. {E~, C~E} for a random enzyme.
std::vector<double> status_weights(const StatusSchema& schema, const Concentration& z,
                                   const std::vector<StatusId>& subset = {});

}  // namespace molfate
