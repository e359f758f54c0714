#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molfate/fluid.hpp"
#include "molfate/network.hpp"
#include "molfate/singlemol.hpp"
#include "molfate/ssa.hpp"

namespace molfate {

struct SubconservationViolation {
    std::size_t reaction;
    StatusId to;
    /// sum_tau y_sigma(tau) p(tau, to) and y'_sigma(to).
    double inflow;
    double required;
};

/// Checks sum_tau y_sigma(tau) p_{y->y'}(tau, tau') = y'_sigma(tau') for every
/// reaction and every non-cemetery tau'. Exact when every probability in the
/// schema is rational, otherwise within 1e-9.
std::vector<SubconservationViolation> check_subconservative(const ReactionNetwork& net, const StatusSchema& schema);

/// alpha(S) = number of statuses mapped to S (0 for untracked species).
std::vector<int> status_multiplicity(const StatusSchema& schema, std::size_t species);

/// Sum_S alpha(S) x_S over species with alpha(S) > 0.
double tracked_mass(const std::vector<int>& alpha, std::span<const Count> x);

enum class InitialAllocation {
    /// floor(V z*_sigma(tau)) paths for every status tau. With the 1 / alpha
    /// path weights this reproduces floor(V z*) / V at time 0.
    PerStatus,
    /// floor(V z*_S) paths for the status of S flagged `initial` (the first
    /// status of S when none is flagged) and none for its other statuses.
    /// Species with alpha > 1 then start at floor(V z*_S) / (alpha V).
    Designated,
};

struct AggregateOptions {
    InitialAllocation allocation = InitialAllocation::PerStatus;
    /// Trajectory ids of the paths are offset + 0, 1, ...
    std::uint64_t stream_offset = 0;
    unsigned threads = 1;
};

struct AggregateEnsemble {
    double volume = 1.0;
    std::vector<Count> counts0;   // per status
    std::vector<int> alpha;       // per species
    std::vector<StatusPath> paths;
    const StatusSchema* schema = nullptr;

    std::size_t size() const noexcept { return paths.size(); }
};

/// Initial path counts per status for z* and V under `allocation`.
std::vector<Count> initial_counts(const StatusSchema& schema, const Concentration& z_star, double volume,
                                  InitialAllocation allocation);

/// Simulates sum(counts0) independent limit paths. The schema referenced by
/// the ensemble is the simulator's, which must outlive it.
AggregateEnsemble build_aggregate(const SingleMoleculeSimulator& sim, const Concentration& z_star, double volume,
                                  double horizon, std::uint64_t seed, const AggregateOptions& options = {});

/// Row g holds X~^V(grid[g]) / V for every species (zero for untracked ones):
/// each live path in status tau adds 1 / alpha(sigma(tau)) to sigma(tau).
std::vector<std::vector<double>> aggregate_trajectory(const AggregateEnsemble& ens, const std::vector<double>& grid);

}  // namespace molfate
