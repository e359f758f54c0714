#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "molfate/network.hpp"

namespace molfate {

/// Right-continuous piecewise-constant path on [0, horizon].
template <class S>
struct JumpPath {
    S initial{};
    std::vector<double> times;  // strictly increasing, all <= horizon
    std::vector<S> states;      // state just after each jump
    double horizon = 0.0;

    std::size_t jumps() const noexcept { return times.size(); }
    const S& final_state() const noexcept { return times.empty() ? initial : states.back(); }

    /// State at time t (the post-jump state if t is a jump time).
    const S& at(double t) const noexcept {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return initial;
        return states[static_cast<std::size_t>(it - times.begin()) - 1];
    }

    bool operator==(const JumpPath&) const = default;
};

using SpeciesPath = JumpPath<State>;
using StatusPath = JumpPath<StatusId>;

struct TrackedPath {
    SpeciesPath species;
    StatusPath status;

    bool operator==(const TrackedPath&) const = default;
};

struct SsaOptions {
    /// Store every post-jump state; when false only the final state is kept
    /// (as a single entry at the time of the last jump).
    bool record = true;
    /// With record set, false keeps only the final species state while the
    /// tracked status path is still stored in full.
    bool record_species = true;
    /// Abort with SimulationError after this many events.
    std::uint64_t max_events = 1'000'000'000;
};

/// Gillespie direct method for X^V on [0, T]: two uniforms per event from the
/// Reactions stream of (seed, trajectory).
SpeciesPath simulate_ssa(const ReactionNetwork& net, double volume, const State& x0, double horizon,
                         std::uint64_t seed, std::uint64_t trajectory = 0, const SsaOptions& options = {});

/// Coupled tracking chain (Y^V, X^V). The species path is identical to
/// simulate_ssa under the same seed and trajectory; participation and the
/// destination status use one uniform from the Tracking stream per firing
/// with theta > 0.
TrackedPath simulate_tracked(const AugmentedNetwork& aug, double volume, const State& x0, StatusId tau0,
                             double horizon, std::uint64_t seed, std::uint64_t trajectory = 0,
                             const SsaOptions& options = {});

/// Draws an index from `weights` (not necessarily normalised) with one
/// uniform from the InitialStatus stream of `trajectory`.
std::size_t draw_initial(const std::vector<double>& weights, std::uint64_t seed, std::uint64_t trajectory);

/// n independent replications with trajectory ids first_id, first_id + 1, ...
std::vector<SpeciesPath> simulate_ssa_batch(const ReactionNetwork& net, double volume, const State& x0,
                                            double horizon, std::uint64_t seed, std::size_t n, unsigned threads,
                                            std::uint64_t first_id = 0, const SsaOptions& options = {});

/// Tracked replications with tau0 drawn per replication from `tau0_weights`
/// (indexed by status). Replications whose drawn status has no molecules of
/// its species at x0 throw InvalidArgument.
std::vector<TrackedPath> simulate_tracked_batch(const AugmentedNetwork& aug, double volume, const State& x0,
                                                const std::vector<double>& tau0_weights, double horizon,
                                                std::uint64_t seed, std::size_t n, unsigned threads,
                                                std::uint64_t first_id = 0, const SsaOptions& options = {});

/// x0 = floor(V z*) componentwise, treating values within 1e-9 (relative) of
/// an integer as that integer.
State scaled_initial_state(const Concentration& z, double volume);

/// Rows "t,S1,...,Sd[,status]" at t = 0, every jump, and t = T.
void write_path_csv(std::ostream& out, const ReactionNetwork& net, const SpeciesPath& path);
void write_path_csv(std::ostream& out, const AugmentedNetwork& aug, const TrackedPath& path);

// ---------------------------------------------------------------------------
// Exact transient distributions by uniformization

struct TransientOptions {
    /// States with any species count above this bound are dropped; the
    /// probability flowing into them is reported as truncated_mass.
    Count max_count = 1'000'000;
    std::size_t state_cap = 200'000;
    /// Poisson tail mass left unaccounted.
    double tolerance = 1e-10;
};

/// Distribution over reachable states. For tracked chains each key is
/// (status, x_1, ..., x_d) with the cemetery stored as kCemetery.
struct TransientDistribution {
    std::vector<State> states;
    std::vector<double> probabilities;
    double truncated_mass = 0.0;

    double probability_of(const State& key) const;
};

TransientDistribution exact_transient(const ReactionNetwork& net, double volume, const State& x0, double t,
                                      const TransientOptions& options = {});
TransientDistribution exact_transient(const AugmentedNetwork& aug, double volume, const State& x0, StatusId tau0,
                                      double t, const TransientOptions& options = {});

/// Sums a tracked distribution over the status coordinate.
TransientDistribution species_marginal(const TransientDistribution& tracked);

}  // namespace molfate
