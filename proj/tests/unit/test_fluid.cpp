#include <cmath>
#include <sstream>

#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/error.hpp"
#include "molfate/fluid.hpp"

using namespace molfate;

namespace {

// Logistic solution of the SI system with S(0) = s0, I(0) = i0, kappa = 1.
double si_susceptible(double s0, double i0, double t) {
    const double mass = s0 + i0;
    return mass * s0 / (s0 + i0 * std::exp(mass * t));
}

}  // namespace

TEST_CASE("SI fluid limit matches the logistic closed form") {
    const auto model = testing::bundled("si");
    const auto sol = solve_fluid(model.network, model.initial, 10.0);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 10.0 * i / 1000.0;
        const auto z = sol.eval(t);
        const double s = si_susceptible(1.0, 0.01, t);
        worst = std::max({worst, std::abs(z[0] - s), std::abs(z[1] - (1.01 - s))});
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("linear decay is exponential and mass is conserved by SIS") {
    const ReactionNetwork decay({"A"}, {{"d", testing::cx({{0, 1}}), Complex(), 0.7}});
    const auto sol = solve_fluid(decay, {2.0}, 3.0);
    CHECK(sol.eval_component(3.0, 0) == doctest::Approx(2.0 * std::exp(-2.1)).epsilon(1e-9));
    CHECK(sol.min_component() == doctest::Approx(2.0 * std::exp(-2.1)).epsilon(1e-6));

    const auto sis = testing::bundled("sis");
    const auto s = solve_fluid(sis.network, sis.initial, 10.0);
    for (double t : {0.0, 1.3, 7.7, 10.0}) {
        const auto z = s.eval(t);
        CHECK(z[0] + z[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fluid solver failure modes") {
    const auto sis = testing::bundled("sis");
    FluidOptions coarse;
    coarse.step = 2.0;
    CHECK_THROWS_WITH_AS(solve_fluid(sis.network, sis.initial, 10.0, coarse), doctest::Contains("step too large"),
                         SimulationError);
    const ReactionNetwork sink({"A"}, {{"sink", Complex(), testing::cx({{0, 1}}), -1.0}});
    CHECK_THROWS_WITH_AS(solve_fluid(sink, {0.1}, 1.0), doctest::Contains("left the orthant"), SimulationError);
    const auto sol = solve_fluid(sis.network, sis.initial, 10.0);
    CHECK_THROWS_AS(sol.eval(10.5), InvalidArgument);
    CHECK_THROWS_AS(sol.eval(-0.1), InvalidArgument);
}

TEST_CASE("zero horizon gives the initial state") {
    const auto sis = testing::bundled("sis");
    const auto sol = solve_fluid(sis.network, sis.initial, 0.0);
    CHECK(sol.eval(0.0) == sis.initial);
}

TEST_CASE("fluid CSV has a header and one row per grid point") {
    const auto sis = testing::bundled("sis");
    FluidOptions o;
    o.step = 0.5;
    const auto sol = solve_fluid(sis.network, sis.initial, 2.0, o);
    std::ostringstream out;
    sol.write_csv(out);
    const std::string s = out.str();
    CHECK(s.rfind("t,S,I\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 6);
}
