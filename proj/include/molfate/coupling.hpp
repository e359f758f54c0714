#pragma once

#include <cstdint>
#include <vector>

#include "molfate/fluid.hpp"
#include "molfate/network.hpp"
#include "molfate/singlemol.hpp"
#include "molfate/ssa.hpp"

namespace molfate {

/// A tracked status path of the finite system and of its limit, driven by
/// the same unit Poisson clocks.
struct CoupledPath {
    StatusPath finite;  // Y^V
    StatusPath limit;   // Y
};

/// Simulates Y^V (from the augmented network) and Y (from the limit rates)
/// on one probability space. Every channel of R and R~ has a unit Poisson
/// clock; Y^V runs the modified next reaction method on all of them and Y
/// consumes the clocks of R~ through the integrated limit rates.
class CoupledSimulator {
public:
    CoupledSimulator(const AugmentedNetwork& aug, const FluidSolution& sol);

    CoupledPath simulate(double volume, const State& x0, StatusId tau0, double horizon, std::uint64_t seed,
                         std::uint64_t trajectory = 0) const;

    /// Fraction of n coupled runs with Y^V(t) != Y(t) at each time in `grid`.
    std::vector<double> disagreement(double volume, const State& x0, StatusId tau0, double horizon,
                                     const std::vector<double>& grid, std::uint64_t seed, std::size_t n,
                                     unsigned threads) const;

private:
    /// Integral of the limit rate of entry k over [0, t].
    double integrated(std::size_t k, double t) const;
    /// Smallest t in [from, T] with integrated(k, t) = value, or +inf.
    double invert(std::size_t k, double from, double value) const;

    AugmentedNetwork aug_;
    LimitRateTable table_;
    FluidSolution sol_;
    std::vector<std::vector<double>> integral_;  // [entry][grid point]
};

}  // namespace molfate
