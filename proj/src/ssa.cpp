#include "molfate/ssa.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <ostream>

#include "molfate/error.hpp"
#include "molfate/model_io.hpp"
#include "molfate/parallel.hpp"
#include "molfate/rng.hpp"

namespace molfate {

namespace {

void check_inputs(const ReactionNetwork& net, double volume, const State& x0, double horizon) {
    if (x0.size() != net.dimension()) throw InvalidArgument("initial state has the wrong dimension");
    for (Count c : x0)
        if (c < 0) throw InvalidArgument("initial state must be non-negative");
    if (!(volume > 0.0)) throw InvalidArgument("volume must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be positive");
}

/// Direct-method event loop shared by the plain and tracked simulators.
/// `on_fire(r, t)` is called after the reaction is chosen and before x is
/// updated, so it sees the pre-jump state.
template <class OnFire>
void direct_method(const ReactionNetwork& net, double volume, State& x, double horizon, RandomStream& stream,
                   const SsaOptions& options, OnFire&& on_fire, SpeciesPath& path) {
    const std::size_t n = net.size();
    std::vector<double> a(n);
    double t = 0.0;
    double last_event = 0.0;
    std::uint64_t events = 0;
    const bool keep = options.record && options.record_species;
    for (;;) {
        double a0 = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            a[r] = stochastic_intensity(net, r, x, volume);
            a0 += a[r];
        }
        if (!std::isfinite(a0)) throw SimulationError("non-finite intensity during simulation");
        if (a0 <= 0.0) break;
        t += -std::log(stream.uniform()) / a0;
        if (t > horizon) break;
        const double target = stream.uniform() * a0;
        std::size_t chosen = n;
        double cumulative = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (a[r] <= 0.0) continue;
            chosen = r;
            cumulative += a[r];
            if (target < cumulative) break;
        }
        on_fire(chosen, t);
        last_event = t;
        for (const auto& [s, c] : net.change(chosen)) x[s] += c;
        if (keep) {
            path.times.push_back(t);
            path.states.push_back(x);
        }
        if (++events > options.max_events) throw SimulationError("event limit exceeded");
    }
    if (!keep && events > 0) {
        path.times.push_back(last_event);
        path.states.push_back(x);
    }
}

}  // namespace

SpeciesPath simulate_ssa(const ReactionNetwork& net, double volume, const State& x0, double horizon,
                         std::uint64_t seed, std::uint64_t trajectory, const SsaOptions& options) {
    check_inputs(net, volume, x0, horizon);
    SpeciesPath path;
    path.initial = x0;
    path.horizon = horizon;
    State x = x0;
    RandomStream stream(seed, trajectory, StreamPurpose::Reactions);
    direct_method(net, volume, x, horizon, stream, options, [](std::size_t, double) {}, path);
    return path;
}

TrackedPath simulate_tracked(const AugmentedNetwork& aug, double volume, const State& x0, StatusId tau0,
                             double horizon, std::uint64_t seed, std::uint64_t trajectory,
                             const SsaOptions& options) {
    const ReactionNetwork& net = aug.base();
    check_inputs(net, volume, x0, horizon);
    if (tau0 < 0 || static_cast<std::size_t>(tau0) >= aug.schema().size())
        throw InvalidArgument("initial status must be a (non-cemetery) status");
    if (x0[*aug.schema().sigma(tau0)] <= 0)
        throw InvalidArgument("initial state has no molecule of the tracked species");

    TrackedPath out;
    out.species.initial = x0;
    out.species.horizon = horizon;
    out.status.initial = tau0;
    out.status.horizon = horizon;

    State x = x0;
    StatusId tau = tau0;
    RandomStream reactions(seed, trajectory, StreamPurpose::Reactions);
    RandomStream tracking(seed, trajectory, StreamPurpose::Tracking);
    double last_status = 0.0;

    auto on_fire = [&](std::size_t r, double t) {
        if (tau == kCemetery) return;
        const double th = theta(net.reactions()[r].reactant, aug.schema().sigma(tau), x);
        if (th <= 0.0) return;
        const double u = tracking.uniform();
        if (u >= th) return;
        const double v = u / th;
        const auto outcomes = aug.outcomes(r, tau);
        StatusId next = aug.tracked()[outcomes.back()].to;
        double cumulative = 0.0;
        for (std::size_t k : outcomes) {
            cumulative += aug.tracked()[k].probability;
            if (v < cumulative) {
                next = aug.tracked()[k].to;
                break;
            }
        }
        if (next == tau) return;
        tau = next;
        last_status = t;
        if (options.record) {
            out.status.times.push_back(t);
            out.status.states.push_back(tau);
        }
    };
    direct_method(net, volume, x, horizon, reactions, options, on_fire, out.species);
    if (!options.record && tau != tau0) {
        out.status.times.push_back(last_status);
        out.status.states.push_back(tau);
    }
    return out;
}

std::size_t draw_initial(const std::vector<double>& weights, std::uint64_t seed, std::uint64_t trajectory) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("initial weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("initial weights sum to zero");
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] > 0.0) last_positive = i;
    if (weights.size() == 1) return 0;
    RandomStream stream(seed, trajectory, StreamPurpose::InitialStatus);
    const double target = stream.uniform() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += weights[i];
        if (weights[i] > 0.0 && target < cumulative) return i;
    }
    return last_positive;
}

std::vector<SpeciesPath> simulate_ssa_batch(const ReactionNetwork& net, double volume, const State& x0,
                                            double horizon, std::uint64_t seed, std::size_t n, unsigned threads,
                                            std::uint64_t first_id, const SsaOptions& options) {
    std::vector<SpeciesPath> paths(n);
    parallel_for(n, threads, [&](std::size_t i) {
        paths[i] = simulate_ssa(net, volume, x0, horizon, seed, first_id + i, options);
    }, 4);
    return paths;
}

std::vector<TrackedPath> simulate_tracked_batch(const AugmentedNetwork& aug, double volume, const State& x0,
                                                const std::vector<double>& tau0_weights, double horizon,
                                                std::uint64_t seed, std::size_t n, unsigned threads,
                                                std::uint64_t first_id, const SsaOptions& options) {
    if (tau0_weights.size() != aug.schema().size())
        throw InvalidArgument("initial status weights must have one entry per status");
    std::vector<TrackedPath> paths(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto tau0 = static_cast<StatusId>(draw_initial(tau0_weights, seed, first_id + i));
        paths[i] = simulate_tracked(aug, volume, x0, tau0, horizon, seed, first_id + i, options);
    }, 4);
    return paths;
}

State scaled_initial_state(const Concentration& z, double volume) {
    State x(z.size());
    for (std::size_t s = 0; s < z.size(); ++s) {
        const double v = volume * z[s];
        const double nearest = std::round(v);
        x[s] = static_cast<Count>(std::abs(v - nearest) <= 1e-9 * std::max(1.0, std::abs(v)) ? nearest
                                                                                             : std::floor(v));
    }
    return x;
}

void write_path_csv(std::ostream& out, const ReactionNetwork& net, const SpeciesPath& path) {
    out << "t";
    for (const auto& name : net.species()) out << "," << name;
    out << "\n";
    auto row = [&](double t, const State& x) {
        out << format_double(t);
        for (Count c : x) out << "," << c;
        out << "\n";
    };
    row(0.0, path.initial);
    for (std::size_t i = 0; i < path.jumps(); ++i) row(path.times[i], path.states[i]);
    row(path.horizon, path.final_state());
}

void write_path_csv(std::ostream& out, const AugmentedNetwork& aug, const TrackedPath& path) {
    const ReactionNetwork& net = aug.base();
    out << "t";
    for (const auto& name : net.species()) out << "," << name;
    out << ",status\n";
    auto row = [&](double t, const State& x) {
        out << format_double(t);
        for (Count c : x) out << "," << c;
        out << "," << aug.schema().status_name(path.status.at(t)) << "\n";
    };
    row(0.0, path.species.initial);
    for (std::size_t i = 0; i < path.species.jumps(); ++i) row(path.species.times[i], path.species.states[i]);
    row(path.species.horizon, path.species.final_state());
}

// ---------------------------------------------------------------------------
// Uniformization

double TransientDistribution::probability_of(const State& key) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == key) return probabilities[i];
    return 0.0;
}

namespace {

struct Edge {
    std::size_t to;
    double rate;
};

template <class Successors>
TransientDistribution uniformize(const State& start, double t, const TransientOptions& options,
                                 Successors&& successors) {
    if (!(t >= 0.0)) throw InvalidArgument("time must be non-negative");
    std::map<State, std::size_t> index;
    std::vector<State> states;
    std::vector<std::vector<Edge>> edges;
    std::vector<double> exit;
    std::deque<std::size_t> queue;

    auto intern = [&](const State& s) {
        auto [it, inserted] = index.emplace(s, states.size());
        if (inserted) {
            if (states.size() >= options.state_cap)
                throw InvalidArgument("reachable state space exceeds the cap of " +
                                      std::to_string(options.state_cap) + " states");
            states.push_back(s);
            edges.emplace_back();
            exit.push_back(0.0);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(start);
    std::vector<std::pair<State, double>> buffer;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        buffer.clear();
        successors(State(states[i]), buffer);
        double total = 0.0;
        std::vector<Edge> out;
        for (auto& [next, rate] : buffer) {
            if (rate <= 0.0) continue;
            total += rate;
            bool keep = true;
            for (Count c : next)
                if (c > options.max_count) keep = false;
            if (keep) out.push_back({intern(next), rate});
        }
        edges[i] = std::move(out);
        exit[i] = total;
    }

    const std::size_t n = states.size();
    double lambda = 0.0;
    for (double q : exit) lambda = std::max(lambda, q);
    std::vector<double> v(n, 0.0), next(n), result(n, 0.0);
    v[0] = 1.0;
    if (lambda == 0.0 || t == 0.0) {
        result = v;
    } else {
        const double mean = lambda * t;
        const double log_mean = std::log(mean);
        double cumulative = 0.0;
        const auto k_max = static_cast<std::size_t>(mean + 50.0 * std::sqrt(mean) + 1000.0);
        for (std::size_t k = 0; k <= k_max; ++k) {
            const double w = std::exp(-mean + static_cast<double>(k) * log_mean - std::lgamma(static_cast<double>(k) + 1.0));
            for (std::size_t i = 0; i < n; ++i) result[i] += w * v[i];
            cumulative += w;
            if (1.0 - cumulative < options.tolerance && static_cast<double>(k) > mean) break;
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (v[i] == 0.0) continue;
                next[i] += v[i] * (1.0 - exit[i] / lambda);
                for (const Edge& e : edges[i]) next[e.to] += v[i] * e.rate / lambda;
            }
            v.swap(next);
        }
    }
    TransientDistribution dist;
    dist.states = std::move(states);
    dist.probabilities = std::move(result);
    double total = 0.0;
    for (double p : dist.probabilities) total += p;
    dist.truncated_mass = std::max(0.0, 1.0 - total);
    return dist;
}

}  // namespace

TransientDistribution exact_transient(const ReactionNetwork& net, double volume, const State& x0, double t,
                                      const TransientOptions& options) {
    if (x0.size() != net.dimension()) throw InvalidArgument("initial state has the wrong dimension");
    return uniformize(x0, t, options, [&](State x, std::vector<std::pair<State, double>>& out) {
        for (std::size_t r = 0; r < net.size(); ++r) {
            const double a = stochastic_intensity(net, r, x, volume);
            if (a <= 0.0) continue;
            State y = x;
            for (const auto& [s, c] : net.change(r)) y[s] += c;
            out.emplace_back(std::move(y), a);
        }
    });
}

TransientDistribution exact_transient(const AugmentedNetwork& aug, double volume, const State& x0, StatusId tau0,
                                      double t, const TransientOptions& options) {
    const ReactionNetwork& net = aug.base();
    if (x0.size() != net.dimension()) throw InvalidArgument("initial state has the wrong dimension");
    if (tau0 < 0 || static_cast<std::size_t>(tau0) >= aug.schema().size())
        throw InvalidArgument("initial status must be a (non-cemetery) status");
    State start;
    start.push_back(tau0);
    start.insert(start.end(), x0.begin(), x0.end());
    return uniformize(start, t, options, [&](State key, std::vector<std::pair<State, double>>& out) {
        const auto tau = static_cast<StatusId>(key[0]);
        const std::span<const Count> x(key.data() + 1, key.size() - 1);
        for (std::size_t r = 0; r < net.size(); ++r) {
            const double a = stochastic_intensity(net, r, x, volume);
            if (a <= 0.0) continue;
            State y = key;
            for (const auto& [s, c] : net.change(r)) y[s + 1] += c;
            const double th = theta(net.reactions()[r].reactant, aug.schema().sigma(tau), x);
            if (th < 1.0) out.emplace_back(y, (1.0 - th) * a);
            if (th <= 0.0) continue;
            for (std::size_t k : aug.outcomes(r, tau)) {
                State z = y;
                z[0] = aug.tracked()[k].to;
                out.emplace_back(std::move(z), th * aug.tracked()[k].probability * a);
            }
        }
    });
}

TransientDistribution species_marginal(const TransientDistribution& tracked) {
    std::map<State, double> sums;
    for (std::size_t i = 0; i < tracked.states.size(); ++i) {
        State x(tracked.states[i].begin() + 1, tracked.states[i].end());
        sums[x] += tracked.probabilities[i];
    }
    TransientDistribution out;
    out.truncated_mass = tracked.truncated_mass;
    for (auto& [x, p] : sums) {
        out.states.push_back(x);
        out.probabilities.push_back(p);
    }
    return out;
}

}  // namespace molfate
