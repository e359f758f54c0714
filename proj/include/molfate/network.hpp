#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molfate/rational.hpp"

namespace molfate {

using SpeciesIndex = std::size_t;
using Count = std::int64_t;
/// Molecule counts, one entry per species.
using State = std::vector<Count>;
/// Concentrations, one entry per species.
using Concentration = std::vector<double>;

/// Non-negative integer combination of species. Zero coefficients are never
/// stored, so the term list is exactly the support.
class Complex {
public:
    struct Term {
        SpeciesIndex species;
        int count;
        bool operator==(const Term&) const = default;
    };

    Complex() = default;
    /// Throws ModelError on negative coefficients; zeros are dropped.
    explicit Complex(const std::map<SpeciesIndex, int>& coefficients);

    int operator[](SpeciesIndex s) const noexcept;
    /// Total number of molecules, |y|_1.
    int order() const noexcept { return order_; }
    bool empty() const noexcept { return terms_.empty(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::vector<SpeciesIndex> support() const;

    bool operator==(const Complex&) const = default;

private:
    std::vector<Term> terms_;  // sorted by species, counts >= 1
    int order_ = 0;
};

struct Reaction {
    std::string label;
    Complex reactant;
    Complex product;
    double rate_constant = 0.0;

    bool operator==(const Reaction&) const = default;
};

/// Rate-table kinetics for networks that are not mass-action. The stochastic
/// callback receives the volume V and must vanish unless x >= reactant.
struct CustomKinetics {
    std::function<double(std::size_t reaction, std::span<const Count> x, double volume)> stochastic;
    std::function<double(std::size_t reaction, std::span<const double> z)> deterministic;
};

/// Immutable reaction network. Rate constants are stored V-independent; the
/// stochastic constant at volume V is kappa * V^(1 - |y|).
class ReactionNetwork {
public:
    ReactionNetwork() = default;
    /// Throws ModelError if a complex refers to a species index out of range.
    ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions);

    std::size_t dimension() const noexcept { return species_.size(); }
    std::size_t size() const noexcept { return reactions_.size(); }
    const std::vector<std::string>& species() const noexcept { return species_; }
    const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
    const Reaction& reaction(std::size_t r) const { return reactions_.at(r); }

    std::optional<SpeciesIndex> species_index(std::string_view name) const;
    std::optional<std::size_t> reaction_index(std::string_view label) const;

    /// Sparse net change y' - y of reaction r.
    const std::vector<std::pair<SpeciesIndex, Count>>& change(std::size_t r) const { return changes_.at(r); }

    bool is_mass_action() const noexcept { return !custom_.has_value(); }
    const CustomKinetics* custom_kinetics() const noexcept { return custom_ ? &*custom_ : nullptr; }
    ReactionNetwork with_custom_kinetics(CustomKinetics kinetics) const;

    bool operator==(const ReactionNetwork& o) const {
        return species_ == o.species_ && reactions_ == o.reactions_;
    }

private:
    std::vector<std::string> species_;
    std::vector<Reaction> reactions_;
    std::vector<std::vector<std::pair<SpeciesIndex, Count>>> changes_;
    std::optional<CustomKinetics> custom_;
};

/// Every violated structural assumption (empty when the network is valid).
std::vector<std::string> validate_network(const ReactionNetwork& net);

/// lambda^V_r(x) = kappa V^(1-|y|) x!/(x-y)! 1{x >= y} for mass-action.
double stochastic_intensity(const ReactionNetwork& net, std::size_t r, std::span<const Count> x,
                            double volume = 1.0);

/// lambda_r(z) = kappa z^y with 0^0 = 1 for mass-action.
double deterministic_rate(const ReactionNetwork& net, std::size_t r, std::span<const double> z);

/// Product of falling factorials x_S (x_S-1) ... (x_S-y_S+1); zero unless x >= y.
double falling_factorial(const Complex& y, std::span<const Count> x);

/// z^y with 0^0 = 1.
double monomial(const Complex& y, std::span<const double> z);

// ---------------------------------------------------------------------------
// Tracking status schema

using StatusId = int;
/// The absorbing cemetery status. Never stored in the status list.
inline constexpr StatusId kCemetery = -1;

struct Status {
    std::string name;
    SpeciesIndex species = 0;
    /// Marks the status used for a species in designated-status aggregate
    /// initialisation.
    bool initial = false;

    bool operator==(const Status&) const = default;
};

struct Transform {
    std::size_t reaction = 0;
    StatusId from = 0;
    StatusId to = kCemetery;
    double probability = 0.0;
    /// Exact value when the probability was given as a rational or decimal.
    std::optional<Rational> exact;

    bool operator==(const Transform&) const = default;
};

class StatusSchema {
public:
    StatusSchema() = default;
    StatusSchema(std::vector<Status> statuses, std::vector<Transform> transforms);

    std::size_t size() const noexcept { return statuses_.size(); }
    const std::vector<Status>& statuses() const noexcept { return statuses_; }
    const std::vector<Transform>& transforms() const noexcept { return transforms_; }

    /// sigma(tau); nullopt for the cemetery.
    std::optional<SpeciesIndex> sigma(StatusId tau) const;
    std::optional<StatusId> status_index(std::string_view name) const;
    std::string status_name(StatusId tau) const;

    /// p_{y->y'}(from, to); zero when absent.
    double probability(std::size_t reaction, StatusId from, StatusId to) const;

    bool operator==(const StatusSchema&) const = default;

private:
    std::vector<Status> statuses_;
    std::vector<Transform> transforms_;
};

/// Absolute tolerance on transform-probability row sums.
inline constexpr double kRowSumTolerance = 1e-9;

/// Every way the schema fails to be a tracking schema for `net`.
std::vector<std::string> validate_schema(const ReactionNetwork& net, const StatusSchema& schema);

/// theta_y(tau, x) = y_S / x_S for S = sigma(tau) when x_S >= y_S >= 1, else 0.
/// `species` is nullopt for the cemetery, which always yields 0.
double theta(const Complex& y, std::optional<SpeciesIndex> species, std::span<const Count> x);

// ---------------------------------------------------------------------------
// Augmented network

/// One element of R~: tau + y -> tau' + y' with its probability.
struct TrackedReaction {
    StatusId from = 0;
    StatusId to = kCemetery;
    std::size_t reaction = 0;
    double probability = 0.0;

    bool operator==(const TrackedReaction&) const = default;
};

/// A network together with a tracking schema, realised as the regular network
/// over statuses and species with reaction set R united with R~.
class AugmentedNetwork {
public:
    /// Throws ModelError listing every network or schema violation.
    AugmentedNetwork(ReactionNetwork net, StatusSchema schema);

    const ReactionNetwork& base() const noexcept { return net_; }
    const StatusSchema& schema() const noexcept { return schema_; }
    const std::vector<TrackedReaction>& tracked() const noexcept { return tracked_; }

    /// Indices into tracked() for firings of `reaction` with the tracked
    /// molecule in status `from`, in schema order.
    std::span<const std::size_t> outcomes(std::size_t reaction, StatusId from) const;

    /// lambda^V_{tau+y->tau'+y'}(current, x) = 1{current=tau} theta p lambda^V(x).
    double tracked_intensity(std::size_t k, StatusId current, std::span<const Count> x, double volume) const;
    /// (1 - theta_y(current, x)) lambda^V_{y->y'}(x).
    double untracked_intensity(std::size_t reaction, StatusId current, std::span<const Count> x,
                               double volume) const;

private:
    ReactionNetwork net_;
    StatusSchema schema_;
    std::vector<TrackedReaction> tracked_;
    std::vector<std::vector<std::size_t>> outcome_index_;  // [reaction * |T| + from]
};

AugmentedNetwork build_augmented(const ReactionNetwork& net, const StatusSchema& schema);

}  // namespace molfate
