#include "molfate/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "molfate/error.hpp"
#include "molfate/parallel.hpp"
#include "molfate/rng.hpp"

namespace molfate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

CoupledSimulator::CoupledSimulator(const AugmentedNetwork& aug, const FluidSolution& sol)
    : aug_(aug), table_(aug), sol_(sol) {
    if (!aug_.base().is_mass_action()) throw InvalidArgument("coupled simulation requires mass-action kinetics");
    const std::size_t n = sol_.cells();
    integral_.assign(table_.entries().size(), std::vector<double>(n + 1, 0.0));
    Concentration z(sol_.dimension());
    for (std::size_t k = 0; k < table_.entries().size(); ++k) {
        auto f = [&](double t) {
            sol_.eval_into(t, z);
            return table_.rate(k, z);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sol_.time(i), b = sol_.time(i + 1);
            integral_[k][i + 1] = integral_[k][i] + (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        }
    }
}

double CoupledSimulator::integrated(std::size_t k, double t) const {
    const std::size_t i = sol_.cell_of(t);
    const double a = sol_.time(i);
    if (t <= a) return integral_[k][i];
    Concentration z(sol_.dimension());
    auto f = [&](double s) {
        sol_.eval_into(s, z);
        return table_.rate(k, z);
    };
    return integral_[k][i] + (t - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + t)) + f(t));
}

double CoupledSimulator::invert(std::size_t k, double from, double value) const {
    const auto& I = integral_[k];
    if (!(value < I.back())) return kInf;
    const std::size_t i = sol_.cell_of(from);
    const auto it = std::upper_bound(I.begin() + static_cast<std::ptrdiff_t>(i), I.end(), value);
    const auto j = static_cast<std::size_t>(it - I.begin()) - 1;
    double lo = std::max(from, sol_.time(j));
    double hi = sol_.time(j + 1);
    for (int iter = 0; iter < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (integrated(k, mid) < value)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

CoupledPath CoupledSimulator::simulate(double volume, const State& x0, StatusId tau0, double horizon,
                                       std::uint64_t seed, std::uint64_t trajectory) const {
    const ReactionNetwork& net = aug_.base();
    if (tau0 < 0 || static_cast<std::size_t>(tau0) >= aug_.schema().size())
        throw InvalidArgument("initial status must be a (non-cemetery) status");
    if (x0.size() != net.dimension() || x0[*aug_.schema().sigma(tau0)] <= 0)
        throw InvalidArgument("initial state has no molecule of the tracked species");
    if (!(horizon > 0.0 && horizon <= sol_.horizon())) throw InvalidArgument("horizon exceeds the fluid solution");

    const std::size_t n_base = net.size();
    const std::size_t n_tracked = aug_.tracked().size();
    const std::size_t channels = n_base + n_tracked;
    CoupledPath out;
    out.finite.initial = out.limit.initial = tau0;
    out.finite.horizon = out.limit.horizon = horizon;

    // Y^V: modified next reaction method over R and R~.
    {
        std::vector<RandomStream> clocks;
        clocks.reserve(channels);
        for (std::size_t c = 0; c < channels; ++c)
            clocks.emplace_back(seed, trajectory, clock_purpose(static_cast<std::uint32_t>(c)));
        std::vector<double> internal(channels, 0.0), next_point(channels), a(channels);
        for (std::size_t c = 0; c < channels; ++c) next_point[c] = clocks[c].exponential();
        State x = x0;
        StatusId tau = tau0;
        double t = 0.0;
        for (;;) {
            for (std::size_t r = 0; r < n_base; ++r) a[r] = aug_.untracked_intensity(r, tau, x, volume);
            for (std::size_t k = 0; k < n_tracked; ++k)
                a[n_base + k] = aug_.tracked_intensity(k, tau, x, volume);
            double dt = kInf;
            std::size_t fired = channels;
            for (std::size_t c = 0; c < channels; ++c) {
                if (a[c] <= 0.0) continue;
                const double candidate = (next_point[c] - internal[c]) / a[c];
                if (candidate < dt) {
                    dt = candidate;
                    fired = c;
                }
            }
            if (fired == channels || t + dt > horizon) break;
            t += dt;
            for (std::size_t c = 0; c < channels; ++c) internal[c] += a[c] * dt;
            internal[fired] = next_point[fired];
            next_point[fired] += clocks[fired].exponential();
            const std::size_t r = fired < n_base ? fired : aug_.tracked()[fired - n_base].reaction;
            for (const auto& [s, c] : net.change(r)) x[s] += c;
            if (fired >= n_base) {
                const StatusId next = aug_.tracked()[fired - n_base].to;
                if (next != tau) {
                    tau = next;
                    out.finite.times.push_back(t);
                    out.finite.states.push_back(tau);
                }
            }
        }
    }

    // Y: the same clocks of R~, run through the integrated limit rates.
    {
        std::vector<RandomStream> clocks;
        clocks.reserve(n_tracked);
        for (std::size_t k = 0; k < n_tracked; ++k)
            clocks.emplace_back(seed, trajectory, clock_purpose(static_cast<std::uint32_t>(n_base + k)));
        std::vector<double> internal(n_tracked, 0.0), next_point(n_tracked), base(n_tracked);
        for (std::size_t k = 0; k < n_tracked; ++k) next_point[k] = clocks[k].exponential();
        StatusId w = tau0;
        double t = 0.0;
        while (w != kCemetery) {
            const auto entries = table_.from_status(w);
            double best = kInf;
            std::size_t fired = n_tracked;
            for (std::size_t k : entries) {
                base[k] = integrated(k, t);
                const double candidate = invert(k, t, base[k] + next_point[k] - internal[k]);
                if (candidate < best) {
                    best = candidate;
                    fired = k;
                }
            }
            if (fired == n_tracked || best > horizon) break;
            for (std::size_t k : entries) internal[k] += integrated(k, best) - base[k];
            internal[fired] = next_point[fired];
            next_point[fired] += clocks[fired].exponential();
            t = best;
            const StatusId next = table_.entries()[fired].to;
            if (next != w) {
                w = next;
                out.limit.times.push_back(t);
                out.limit.states.push_back(w);
            }
        }
    }
    return out;
}

std::vector<double> CoupledSimulator::disagreement(double volume, const State& x0, StatusId tau0, double horizon,
                                                   const std::vector<double>& grid, std::uint64_t seed,
                                                   std::size_t n, unsigned threads) const {
    std::vector<std::vector<char>> differs(n, std::vector<char>(grid.size(), 0));
    parallel_for(n, threads, [&](std::size_t i) {
        const CoupledPath p = simulate(volume, x0, tau0, horizon, seed, i);
        for (std::size_t g = 0; g < grid.size(); ++g) differs[i][g] = p.finite.at(grid[g]) != p.limit.at(grid[g]);
    }, 4);
    std::vector<double> fraction(grid.size(), 0.0);
    if (n == 0) return fraction;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) count += static_cast<std::size_t>(differs[i][g]);
        fraction[g] = static_cast<double>(count) / static_cast<double>(n);
    }
    return fraction;
}

}  // namespace molfate
