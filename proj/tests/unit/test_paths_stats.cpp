#include <cmath>
#include <sstream>

#include "doctest.h"
#include "molfate/error.hpp"
#include "molfate/paths.hpp"
#include "molfate/stats.hpp"

using namespace molfate;

namespace {

StatusPath make_path(StatusId initial, std::vector<double> times, std::vector<StatusId> states, double horizon) {
    StatusPath p;
    p.initial = initial;
    p.times = std::move(times);
    p.states = std::move(states);
    p.horizon = horizon;
    return p;
}

}  // namespace

TEST_CASE("path functionals") {
    const auto p = make_path(0, {1.0, 2.5, 4.0}, {1, 0, 1}, 6.0);
    CHECK(count_transitions(p, 0, 1) == 2);
    CHECK(count_transitions(p, 1, 0) == 1);
    CHECK(occupation_time(p, {1}, 6.0) == doctest::Approx(1.5 + 2.0));
    CHECK(occupation_time(p, {0, 1}, 6.0) == doctest::Approx(6.0));
    CHECK(occupation_time(p, {0}, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(occupation_time(p, {0}, 7.0), InvalidArgument);
    CHECK(first_exit_time(p) == 1.0);
    CHECK(std::isinf(first_exit_time(make_path(0, {}, {}, 1.0))));
}

TEST_CASE("survival curves count paths that never left") {
    const std::vector<StatusPath> paths{make_path(0, {1.0}, {1}, 4.0), make_path(0, {3.0, 3.5}, {1, 0}, 4.0),
                                        make_path(0, {}, {}, 4.0), make_path(0, {0.5}, {kCemetery}, 4.0)};
    const auto curve = survival_curve(paths, 0, {0.0, 1.0, 3.2, 4.0});
    CHECK(curve == std::vector<double>{1.0, 0.5, 0.25, 0.25});
    CHECK_THROWS_WITH_AS(survival_curve({}, 0, {0.0}), "empty ensemble", InvalidArgument);
    CHECK_THROWS_AS(survival_curve(paths, 1, {0.0}), InvalidArgument);
}

TEST_CASE("distances between empirical distributions") {
    const auto a = EmpiricalDistribution::discrete({0, 0, 1, 2});
    const auto b = EmpiricalDistribution::discrete({0, 1, 1, 3});
    CHECK(total_variation(a, b) == doctest::Approx(0.5));
    CHECK(total_variation(a, a) == 0.0);
    CHECK(total_variation(a, b) == total_variation(b, a));
    CHECK(distance(a, b) == total_variation(a, b));
    const auto c = EmpiricalDistribution::continuous({0.1, 0.2, 0.3});
    const auto d = EmpiricalDistribution::continuous({0.25, 0.35, 0.45, 0.55});
    CHECK(kolmogorov_distance(c, d) == doctest::Approx(0.75));
    CHECK(kolmogorov_distance(c, c) == 0.0);
    CHECK(distance(c, d) <= 1.0);
    CHECK_THROWS_AS(distance(a, c), InvalidArgument);
    CHECK_THROWS_AS(distance(a, EmpiricalDistribution::discrete({})), InvalidArgument);
    CHECK_THROWS_AS(EmpiricalDistribution::continuous({1.0, NAN}), InvalidArgument);
}

TEST_CASE("output helpers") {
    const auto g = uniform_grid(2.0, 4);
    CHECK(g == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    std::ostringstream out;
    write_survival_csv(out, {0.0, 1.0}, {1.0, 0.5});
    CHECK(out.str().rfind("t,fraction\n", 0) == 0);
}

TEST_CASE("sample moments") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(mean(x) == 2.5);
    CHECK(variance(x) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("Kolmogorov tail and KS tests") {
    CHECK(kolmogorov_tail(1.36) == doctest::Approx(0.0494859).epsilon(1e-4));
    CHECK(kolmogorov_tail(1.63) == doctest::Approx(0.0098464).epsilon(1e-4));
    CHECK(kolmogorov_tail(0.1) == 1.0);
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
    CHECK(ks_test(grid, [](double x) { return x; }).p_value > 0.99);
    CHECK(ks_test(grid, [](double x) { return x * x; }).p_value < 1e-6);
    CHECK(ks_two_sample_p_value(0.0, 100, 100) == 1.0);
    CHECK(ks_two_sample_p_value(0.5, 100, 100) < 1e-6);
}

TEST_CASE("variance ratio and proportion tests") {
    const auto f = variance_ratio_test(1.0, 100, 1.0, 100, 0.01);
    CHECK(f.pass);
    // F(99, 99) upper 1% point.
    CHECK(f.critical == doctest::Approx(1.601498).epsilon(1e-5));
    CHECK_FALSE(variance_ratio_test(2.0, 100, 1.0, 100, 0.01).pass);
    CHECK(binomial_upper_tail(0, 10, 0.3) == 1.0);
    CHECK(binomial_upper_tail(10, 10, 0.5) == doctest::Approx(std::pow(0.5, 10)));
    CHECK(binomial_upper_tail(3, 4, 0.5) == doctest::Approx(5.0 / 16.0));
    CHECK(two_proportion_p_value(50, 100, 50, 100) == doctest::Approx(0.5));
    CHECK(two_proportion_p_value(80, 100, 20, 100) < 1e-6);
}
