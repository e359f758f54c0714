#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "molfate/network.hpp"

namespace molfate {

struct FluidOptions {
    /// RK4 step; 0 selects T/10000.
    double step = 0.0;
    /// Compare against a half-step solve and throw "step too large" when the
    /// sup-norm gap exceeds this tolerance. Negative disables the check.
    double halving_tolerance = 1e-6;
};

/// Dense-output solution of dZ/dt = sum_r (y'_r - y_r) lambda_r(Z) on a
/// uniform grid, with cubic Hermite interpolation between knots.
class FluidSolution {
public:
    FluidSolution(std::vector<std::string> species, double horizon, std::vector<Concentration> values,
                  std::vector<Concentration> derivatives);

    double horizon() const noexcept { return horizon_; }
    std::size_t dimension() const noexcept { return species_.size(); }
    const std::vector<std::string>& species() const noexcept { return species_; }
    /// Number of grid cells N; the grid is t_i = i * T / N.
    std::size_t cells() const noexcept { return values_.size() - 1; }
    double step() const noexcept { return step_; }
    double time(std::size_t i) const noexcept { return i == cells() ? horizon_ : static_cast<double>(i) * step_; }
    const std::vector<Concentration>& values() const noexcept { return values_; }
    const std::vector<Concentration>& derivatives() const noexcept { return derivatives_; }

    /// Z(t); throws InvalidArgument outside [0, T].
    Concentration eval(double t) const;
    /// Writes Z(t) into `out` (size d) without allocating.
    void eval_into(double t, std::span<double> out) const;
    double eval_component(double t, SpeciesIndex s) const;
    /// Index of the grid cell containing t (the last cell for t = T).
    std::size_t cell_of(double t) const noexcept;

    /// m = minimum over species of Z_S on a 10x refinement of the grid.
    double min_component() const noexcept { return min_component_; }
    /// Minimum of one species on the same refinement.
    double min_component(SpeciesIndex s) const { return species_min_.at(s); }

    /// Rows "t,S1,...,Sd" at every grid point after a header of species names.
    void write_csv(std::ostream& out, std::size_t stride = 1) const;

private:
    std::vector<std::string> species_;
    double horizon_;
    double step_;
    std::vector<Concentration> values_;
    std::vector<Concentration> derivatives_;
    double min_component_ = 0.0;
    std::vector<double> species_min_;
};

/// Fixed-step RK4 over [0, T]. Throws SimulationError with "left the orthant"
/// if a component drops below -1e-12 (smaller undershoots are clamped to 0) or
/// "step too large" if the step-halving check fails.
FluidSolution solve_fluid(const ReactionNetwork& net, const Concentration& z0, double horizon,
                          const FluidOptions& options = {});

/// Right-hand side sum_r (y'_r - y_r) lambda_r(z).
void fluid_rhs(const ReactionNetwork& net, std::span<const double> z, std::span<double> dz);

}  // namespace molfate
