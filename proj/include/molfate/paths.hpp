#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <vector>

#include "molfate/ssa.hpp"

namespace molfate {

/// Number of jumps from `from` directly to `to`.
std::size_t count_transitions(const StatusPath& path, StatusId from, StatusId to);

/// Time spent in `statuses` during [0, T].
double occupation_time(const StatusPath& path, const std::set<StatusId>& statuses, double horizon);

/// Fraction of paths still in `initial` (never having left it) at each grid
/// time. Throws InvalidArgument on an empty ensemble or a path that does not
/// start in `initial`.
std::vector<double> survival_curve(const std::vector<StatusPath>& paths, StatusId initial,
                                   const std::vector<double>& grid);

/// Time of the first jump, or +inf when the path never jumps.
double first_exit_time(const StatusPath& path);

class EmpiricalDistribution {
public:
    enum class Kind { Discrete, Continuous };

    static EmpiricalDistribution discrete(const std::vector<std::int64_t>& values);
    static EmpiricalDistribution continuous(std::vector<double> samples);

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }
    /// value -> count (discrete only).
    const std::map<std::int64_t, std::size_t>& counts() const noexcept { return counts_; }
    /// Sorted samples (continuous only).
    const std::vector<double>& samples() const noexcept { return samples_; }

    void write_csv(std::ostream& out) const;

private:
    Kind kind_ = Kind::Discrete;
    std::size_t n_ = 0;
    std::map<std::int64_t, std::size_t> counts_;
    std::vector<double> samples_;
};

/// Half the l1 distance between the empirical probability vectors.
double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// sup_x |F_a(x) - F_b(x)| over the empirical CDFs.
double kolmogorov_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// TV for discrete pairs, KS for continuous pairs; throws InvalidArgument on a
/// kind mismatch or an empty distribution.
double distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Rows "t,fraction".
void write_survival_csv(std::ostream& out, const std::vector<double>& grid, const std::vector<double>& curve);

/// Uniform grid of n + 1 points on [0, T].
std::vector<double> uniform_grid(double horizon, std::size_t n);

}  // namespace molfate
