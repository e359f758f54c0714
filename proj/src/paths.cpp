#include "molfate/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "molfate/error.hpp"
#include "molfate/model_io.hpp"

namespace molfate {

std::size_t count_transitions(const StatusPath& path, StatusId from, StatusId to) {
    std::size_t count = 0;
    StatusId current = path.initial;
    for (StatusId next : path.states) {
        if (current == from && next == to) ++count;
        current = next;
    }
    return count;
}

double occupation_time(const StatusPath& path, const std::set<StatusId>& statuses, double horizon) {
    if (!(horizon >= 0.0)) throw InvalidArgument("occupation horizon must be non-negative");
    if (horizon > path.horizon * (1.0 + 1e-12)) throw InvalidArgument("occupation horizon exceeds the path horizon");
    double total = 0.0;
    double start = 0.0;
    StatusId current = path.initial;
    for (std::size_t i = 0; i <= path.times.size(); ++i) {
        const double stop = std::min(i < path.times.size() ? path.times[i] : horizon, horizon);
        if (stop > start && statuses.contains(current)) total += stop - start;
        if (i == path.times.size() || path.times[i] >= horizon) break;
        start = path.times[i];
        current = path.states[i];
    }
    return total;
}

double first_exit_time(const StatusPath& path) {
    return path.times.empty() ? std::numeric_limits<double>::infinity() : path.times.front();
}

std::vector<double> survival_curve(const std::vector<StatusPath>& paths, StatusId initial,
                                   const std::vector<double>& grid) {
    if (paths.empty()) throw InvalidArgument("empty ensemble");
    std::vector<double> exits;
    exits.reserve(paths.size());
    for (const StatusPath& p : paths) {
        if (p.initial != initial) throw InvalidArgument("survival curve needs every path to start in the same status");
        exits.push_back(first_exit_time(p));
    }
    std::sort(exits.begin(), exits.end());
    std::vector<double> curve;
    curve.reserve(grid.size());
    const double n = static_cast<double>(exits.size());
    for (double t : grid) {
        const auto left = std::upper_bound(exits.begin(), exits.end(), t) - exits.begin();
        curve.push_back(1.0 - static_cast<double>(left) / n);
    }
    return curve;
}

EmpiricalDistribution EmpiricalDistribution::discrete(const std::vector<std::int64_t>& values) {
    EmpiricalDistribution d;
    d.kind_ = Kind::Discrete;
    d.n_ = values.size();
    for (std::int64_t v : values) ++d.counts_[v];
    return d;
}

EmpiricalDistribution EmpiricalDistribution::continuous(std::vector<double> samples) {
    for (double v : samples)
        if (!std::isfinite(v)) throw InvalidArgument("continuous samples must be finite");
    EmpiricalDistribution d;
    d.kind_ = Kind::Continuous;
    d.n_ = samples.size();
    std::sort(samples.begin(), samples.end());
    d.samples_ = std::move(samples);
    return d;
}

void EmpiricalDistribution::write_csv(std::ostream& out) const {
    if (kind_ == Kind::Discrete) {
        out << "value,count\n";
        for (const auto& [v, c] : counts_) out << v << ',' << c << '\n';
    } else {
        out << "value\n";
        for (double v : samples_) out << format_double(v) << '\n';
    }
}

namespace {

void check_pair(const EmpiricalDistribution& a, const EmpiricalDistribution& b, EmpiricalDistribution::Kind kind) {
    if (a.kind() != b.kind()) throw InvalidArgument("distance between discrete and continuous distributions");
    if (a.kind() != kind) throw InvalidArgument("distance not defined for this kind of distribution");
    if (a.size() == 0 || b.size() == 0) throw InvalidArgument("distance of an empty distribution");
}

}  // namespace

double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    check_pair(a, b, EmpiricalDistribution::Kind::Discrete);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double sum = 0.0;
    auto ia = a.counts().begin(), ib = b.counts().begin();
    while (ia != a.counts().end() || ib != b.counts().end()) {
        if (ib == b.counts().end() || (ia != a.counts().end() && ia->first < ib->first)) {
            sum += ia->second / na;
            ++ia;
        } else if (ia == a.counts().end() || ib->first < ia->first) {
            sum += ib->second / nb;
            ++ib;
        } else {
            sum += std::abs(ia->second / na - ib->second / nb);
            ++ia;
            ++ib;
        }
    }
    return 0.5 * sum;
}

double kolmogorov_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    check_pair(a, b, EmpiricalDistribution::Kind::Continuous);
    const auto& x = a.samples();
    const auto& y = b.samples();
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(i / nx - j / ny));
    }
    return d;
}

double distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.kind() != b.kind()) throw InvalidArgument("distance between discrete and continuous distributions");
    return a.kind() == EmpiricalDistribution::Kind::Discrete ? total_variation(a, b) : kolmogorov_distance(a, b);
}

void write_survival_csv(std::ostream& out, const std::vector<double>& grid, const std::vector<double>& curve) {
    if (grid.size() != curve.size()) throw InvalidArgument("grid and curve differ in length");
    out << "t,fraction\n";
    for (std::size_t i = 0; i < grid.size(); ++i) out << format_double(grid[i]) << ',' << format_double(curve[i]) << '\n';
}

std::vector<double> uniform_grid(double horizon, std::size_t n) {
    if (n == 0) return {0.0};
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = i == n ? horizon : horizon * static_cast<double>(i) / n;
    return grid;
}

}  // namespace molfate
