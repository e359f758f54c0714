#include "molfate/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "molfate/error.hpp"
#include "molfate/model_io.hpp"

namespace molfate {

namespace {

constexpr double kUndershoot = -1e-12;
constexpr int kRefinement = 10;

struct Rk4Result {
    std::vector<Concentration> values;
    std::vector<Concentration> derivatives;
};

Rk4Result integrate(const ReactionNetwork& net, const Concentration& z0, double horizon, std::size_t cells) {
    const std::size_t d = z0.size();
    const double h = horizon / static_cast<double>(cells);
    Rk4Result out;
    out.values.reserve(cells + 1);
    out.derivatives.reserve(cells + 1);

    Concentration z = z0, k1(d), k2(d), k3(d), k4(d), tmp(d);
    fluid_rhs(net, z, k1);
    out.values.push_back(z);
    out.derivatives.push_back(k1);
    for (std::size_t i = 0; i < cells; ++i) {
        for (std::size_t s = 0; s < d; ++s) tmp[s] = z[s] + 0.5 * h * k1[s];
        fluid_rhs(net, tmp, k2);
        for (std::size_t s = 0; s < d; ++s) tmp[s] = z[s] + 0.5 * h * k2[s];
        fluid_rhs(net, tmp, k3);
        for (std::size_t s = 0; s < d; ++s) tmp[s] = z[s] + h * k3[s];
        fluid_rhs(net, tmp, k4);
        for (std::size_t s = 0; s < d; ++s) {
            z[s] += h / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
            if (!std::isfinite(z[s])) throw SimulationError("fluid solution is not finite");
            if (z[s] < kUndershoot)
                throw SimulationError("fluid solution left the orthant at t = " +
                                      format_double(static_cast<double>(i + 1) * h));
            if (z[s] < 0.0) z[s] = 0.0;
        }
        fluid_rhs(net, z, k1);
        out.values.push_back(z);
        out.derivatives.push_back(k1);
    }
    return out;
}

}  // namespace

void fluid_rhs(const ReactionNetwork& net, std::span<const double> z, std::span<double> dz) {
    std::fill(dz.begin(), dz.end(), 0.0);
    for (std::size_t r = 0; r < net.size(); ++r) {
        const double rate = deterministic_rate(net, r, z);
        for (const auto& [s, c] : net.change(r)) dz[s] += static_cast<double>(c) * rate;
    }
}

FluidSolution::FluidSolution(std::vector<std::string> species, double horizon, std::vector<Concentration> values,
                             std::vector<Concentration> derivatives)
    : species_(std::move(species)),
      horizon_(horizon),
      step_(values.size() > 1 ? horizon / static_cast<double>(values.size() - 1) : 0.0),
      values_(std::move(values)),
      derivatives_(std::move(derivatives)) {
    if (values_.empty() || values_.size() != derivatives_.size())
        throw InvalidArgument("fluid solution needs matching values and derivatives");
    const std::size_t d = species_.size();
    species_min_.assign(d, std::numeric_limits<double>::infinity());
    Concentration z(d);
    const std::size_t n = cells();
    for (std::size_t i = 0; i <= n; ++i) {
        const int sub = i < n ? kRefinement : 1;
        for (int j = 0; j < sub; ++j) {
            const double t = i < n ? time(i) + step_ * j / kRefinement : horizon_;
            eval_into(t, z);
            for (std::size_t s = 0; s < d; ++s) species_min_[s] = std::min(species_min_[s], z[s]);
        }
    }
    min_component_ = d == 0 ? 0.0 : *std::min_element(species_min_.begin(), species_min_.end());
}

std::size_t FluidSolution::cell_of(double t) const noexcept {
    const std::size_t n = cells();
    if (n == 0 || t <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(t / step_);
    return std::min(i, n - 1);
}

void FluidSolution::eval_into(double t, std::span<double> out) const {
    if (!(t >= 0.0 && t <= horizon_)) throw InvalidArgument("time " + format_double(t) + " outside [0, T]");
    const std::size_t d = species_.size();
    const std::size_t n = cells();
    if (n == 0) {
        std::copy(values_[0].begin(), values_[0].end(), out.begin());
        return;
    }
    const std::size_t i = cell_of(t);
    const double t0 = time(i);
    if (t == t0) {
        std::copy(values_[i].begin(), values_[i].end(), out.begin());
        return;
    }
    if (t == time(i + 1)) {
        std::copy(values_[i + 1].begin(), values_[i + 1].end(), out.begin());
        return;
    }
    const double h = time(i + 1) - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const auto& y0 = values_[i];
    const auto& y1 = values_[i + 1];
    const auto& d0 = derivatives_[i];
    const auto& d1 = derivatives_[i + 1];
    for (std::size_t k = 0; k < d; ++k) {
        const double v = h00 * y0[k] + h10 * h * d0[k] + h01 * y1[k] + h11 * h * d1[k];
        out[k] = v < 0.0 ? 0.0 : v;
    }
}

Concentration FluidSolution::eval(double t) const {
    Concentration z(species_.size());
    eval_into(t, z);
    return z;
}

double FluidSolution::eval_component(double t, SpeciesIndex s) const {
    Concentration z(species_.size());
    eval_into(t, z);
    return z.at(s);
}

void FluidSolution::write_csv(std::ostream& out, std::size_t stride) const {
    out << "t";
    for (const auto& name : species_) out << "," << name;
    out << "\n";
    stride = std::max<std::size_t>(1, stride);
    for (std::size_t i = 0; i <= cells(); ++i) {
        if (i % stride != 0 && i != cells()) continue;
        out << format_double(time(i));
        for (double v : values_[i]) out << "," << format_double(v);
        out << "\n";
    }
}

FluidSolution solve_fluid(const ReactionNetwork& net, const Concentration& z0, double horizon,
                          const FluidOptions& options) {
    if (z0.size() != net.dimension()) throw InvalidArgument("initial condition has the wrong dimension");
    for (double v : z0)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("initial condition must be non-negative");
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be non-negative");
    if (options.step < 0.0) throw InvalidArgument("step must be positive");

    if (horizon == 0.0) {
        Concentration dz(z0.size());
        fluid_rhs(net, z0, dz);
        return FluidSolution(net.species(), 0.0, {z0}, {dz});
    }
    const double step = options.step > 0.0 ? options.step : horizon / 10000.0;
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(horizon / step - 1e-9)));
    Rk4Result coarse = integrate(net, z0, horizon, cells);

    if (options.halving_tolerance >= 0.0) {
        Rk4Result fine = integrate(net, z0, horizon, 2 * cells);
        double gap = 0.0;
        for (std::size_t i = 0; i <= cells; ++i)
            for (std::size_t s = 0; s < z0.size(); ++s) {
                const double scale = std::max(1.0, std::abs(fine.values[2 * i][s]));
                gap = std::max(gap, std::abs(coarse.values[i][s] - fine.values[2 * i][s]) / scale);
            }
        if (gap > options.halving_tolerance)
            throw SimulationError("step too large: step-halving disagreement " + format_double(gap));
    }
    return FluidSolution(net.species(), horizon, std::move(coarse.values), std::move(coarse.derivatives));
}

}  // namespace molfate
