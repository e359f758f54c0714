#include "molfate/singlemol.hpp"

#include <algorithm>
#include <cmath>

#include "molfate/error.hpp"
#include "molfate/model_io.hpp"
#include "molfate/parallel.hpp"
#include "molfate/rng.hpp"

namespace molfate {

LimitRateTable::LimitRateTable(const AugmentedNetwork& aug)
    : net_(aug.base()), schema_(aug.schema()), by_status_(aug.schema().size()) {
    for (const TrackedReaction& tr : aug.tracked()) {
        const SpeciesIndex s = *schema_.sigma(tr.from);
        const Complex& y = net_.reactions()[tr.reaction].reactant;
        std::map<SpeciesIndex, int> reduced;
        for (const auto& t : y.terms()) reduced[t.species] = t.count;
        reduced[s] -= 1;
        LimitRateEntry entry;
        entry.from = tr.from;
        entry.to = tr.to;
        entry.reaction = tr.reaction;
        entry.multiplier = static_cast<double>(y[s]) * tr.probability;
        entry.reduced = Complex(reduced);
        by_status_[static_cast<std::size_t>(tr.from)].push_back(entries_.size());
        entries_.push_back(std::move(entry));
    }
}

std::span<const std::size_t> LimitRateTable::from_status(StatusId tau) const {
    if (tau == kCemetery) return {};
    return by_status_.at(static_cast<std::size_t>(tau));
}

double LimitRateTable::ratio_rate(std::size_t k, std::span<const double> z) const {
    const LimitRateEntry& e = entries_.at(k);
    const double zs = z[*schema_.sigma(e.from)];
    return e.multiplier * deterministic_rate(net_, e.reaction, z) / zs;
}

double LimitRateTable::rate(std::size_t k, std::span<const double> z, double floor) const {
    const LimitRateEntry& e = entries_[k];
    if (net_.is_mass_action())
        return e.multiplier * net_.reactions()[e.reaction].rate_constant * monomial(e.reduced, z);
    if (z[*schema_.sigma(e.from)] <= floor)
        throw SimulationError("limit rate evaluated where the tracked species concentration is below the floor");
    return ratio_rate(k, z);
}

double LimitRateTable::total(StatusId tau, std::span<const double> z, double floor) const {
    double sum = 0.0;
    for (std::size_t k : from_status(tau))
        if (entries_[k].to != tau) sum += rate(k, z, floor);
    return sum;
}

LimitRateTable build_limit_rates(const AugmentedNetwork& aug) { return LimitRateTable(aug); }

double hazard(const LimitRateTable& table, const FluidSolution& sol, StatusId tau, double t) {
    if (tau == kCemetery) {
        if (!(t >= 0.0 && t <= sol.horizon())) throw InvalidArgument("time outside [0, T]");
        return 0.0;
    }
    const Concentration z = sol.eval(t);
    return table.total(tau, z);
}

// ---------------------------------------------------------------------------

SingleMoleculeSimulator::SingleMoleculeSimulator(LimitRateTable table, FluidSolution sol,
                                                 const SingleMoleculeOptions& options)
    : table_(std::move(table)), sol_(std::move(sol)), options_(options) {
    if (sol_.dimension() != table_.network().dimension())
        throw InvalidArgument("fluid solution does not match the network");
    if (!(sol_.min_component() > options_.floor))
        throw SimulationError("fluid solution minimum component " + format_double(sol_.min_component()) +
                              " is not above the floor " + format_double(options_.floor));
    if (options_.samples_per_cell < 1 || !(options_.slack >= 1.0))
        throw InvalidArgument("majorant needs at least one sample per cell and slack >= 1");

    const std::size_t n_status = table_.statuses();
    const std::size_t cells = std::max<std::size_t>(1, sol_.cells());
    majorant_.assign(n_status, std::vector<double>(cells, 0.0));
    cumulative_.assign(n_status, std::vector<double>(cells + 1, 0.0));
    if (sol_.cells() == 0) return;

    Concentration z(sol_.dimension());
    for (std::size_t i = 0; i < cells; ++i) {
        const double t0 = sol_.time(i), t1 = sol_.time(i + 1);
        for (int j = 0; j <= options_.samples_per_cell; ++j) {
            const double t = j == options_.samples_per_cell ? t1 : t0 + (t1 - t0) * j / options_.samples_per_cell;
            sol_.eval_into(t, z);
            for (std::size_t tau = 0; tau < n_status; ++tau) {
                const double h = table_.total(static_cast<StatusId>(tau), z, options_.floor);
                if (!std::isfinite(h)) throw SimulationError("non-finite limit rate while building the majorant");
                majorant_[tau][i] = std::max(majorant_[tau][i], h);
            }
        }
    }
    for (std::size_t tau = 0; tau < n_status; ++tau)
        for (std::size_t i = 0; i < cells; ++i) {
            majorant_[tau][i] *= options_.slack;
            cumulative_[tau][i + 1] = cumulative_[tau][i] + majorant_[tau][i] * (sol_.time(i + 1) - sol_.time(i));
        }
}

StatusPath SingleMoleculeSimulator::simulate(StatusId tau0, double horizon, std::uint64_t seed,
                                             std::uint64_t trajectory) const {
    if (tau0 < 0 || static_cast<std::size_t>(tau0) >= table_.statuses())
        throw InvalidArgument("initial status must be a (non-cemetery) status");
    if (!(horizon >= 0.0 && horizon <= sol_.horizon()))
        throw InvalidArgument("horizon exceeds the fluid solution");
    StatusPath path;
    path.initial = tau0;
    path.horizon = horizon;
    if (sol_.cells() == 0) return path;

    RandomStream stream(seed, trajectory, StreamPurpose::SingleMolecule);
    Concentration z(sol_.dimension());
    std::vector<double> rates;
    StatusId tau = tau0;
    double t = 0.0;
    while (tau != kCemetery) {
        const auto& M = majorant_[static_cast<std::size_t>(tau)];
        const auto& C = cumulative_[static_cast<std::size_t>(tau)];
        const std::size_t i = sol_.cell_of(t);
        const double target = C[i] + M[i] * (t - sol_.time(i)) + stream.exponential();
        if (!(target < C.back())) break;
        const auto it = std::upper_bound(C.begin() + static_cast<std::ptrdiff_t>(i), C.end(), target);
        const auto j = static_cast<std::size_t>(it - C.begin()) - 1;
        double candidate = sol_.time(j) + (target - C[j]) / M[j];
        candidate = std::clamp(candidate, std::max(t, sol_.time(j)), sol_.time(j + 1));
        t = candidate;
        if (t > horizon) break;

        sol_.eval_into(t, z);
        const auto entries = table_.from_status(tau);
        rates.clear();
        double total = 0.0;
        for (std::size_t k : entries) {
            rates.push_back(table_.entries()[k].to == tau ? 0.0 : table_.rate(k, z, options_.floor));
            total += rates.back();
        }
        if (total > M[j]) throw SimulationError("thinning majorant violated at t = " + format_double(t));
        const double bound = M[j] * stream.uniform();
        if (!(bound < total)) continue;
        StatusId next = table_.entries()[entries.back()].to;
        double cumulative = 0.0;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            cumulative += rates[e];
            if (bound < cumulative) {
                next = table_.entries()[entries[e]].to;
                break;
            }
        }
        if (next == tau) continue;
        tau = next;
        path.times.push_back(t);
        path.states.push_back(tau);
    }
    return path;
}

std::vector<StatusPath> SingleMoleculeSimulator::simulate_batch(const std::vector<double>& tau0_weights,
                                                                double horizon, std::uint64_t seed, std::size_t n,
                                                                unsigned threads, std::uint64_t first_id) const {
    if (tau0_weights.size() != table_.statuses())
        throw InvalidArgument("initial status weights must have one entry per status");
    std::vector<StatusPath> paths(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto tau0 = static_cast<StatusId>(draw_initial(tau0_weights, seed, first_id + i));
        paths[i] = simulate(tau0, horizon, seed, first_id + i);
    });
    return paths;
}

StatusPath simulate_y(const LimitRateTable& table, const FluidSolution& sol, StatusId tau0, double horizon,
                      std::uint64_t seed, std::uint64_t trajectory, const SingleMoleculeOptions& options) {
    return SingleMoleculeSimulator(table, sol, options).simulate(tau0, horizon, seed, trajectory);
}

std::vector<double> status_weights(const StatusSchema& schema, const Concentration& z,
                                   const std::vector<StatusId>& subset) {
    std::vector<double> w(schema.size(), 0.0);
    if (subset.empty()) {
        std::vector<int> alpha(z.size(), 0);
        for (const auto& st : schema.statuses()) ++alpha.at(st.species);
        for (std::size_t tau = 0; tau < schema.size(); ++tau) {
            const SpeciesIndex s = schema.statuses()[tau].species;
            w[tau] = z.at(s) / alpha[s];
        }
    } else {
        for (StatusId tau : subset) w.at(static_cast<std::size_t>(tau)) = z.at(*schema.sigma(tau));
    }
    return w;
}

}  // namespace molfate
