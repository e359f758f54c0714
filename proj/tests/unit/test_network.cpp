#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/error.hpp"
#include "molfate/network.hpp"
#include "molfate/ssa.hpp"

using namespace molfate;

namespace {

ReactionNetwork dimer() {
    return ReactionNetwork({"A", "B"}, {{"dim", testing::cx({{0, 2}}), testing::cx({{1, 1}}), 3.0},
                                        {"split", testing::cx({{1, 1}}), testing::cx({{0, 2}}), 0.5},
                                        {"birth", Complex(), testing::cx({{0, 1}}), 2.0}});
}

}  // namespace

TEST_CASE("complexes drop zero coefficients and reject negatives") {
    const Complex y({{0, 2}, {1, 0}, {3, 1}});
    CHECK(y.order() == 3);
    CHECK(y.terms().size() == 2);
    CHECK(y[1] == 0);
    CHECK(y[3] == 1);
    CHECK_THROWS_AS(testing::cx({{0, -1}}), ModelError);
}

TEST_CASE("falling factorials and mass-action intensities") {
    const auto net = dimer();
    const State x{5, 1};
    CHECK(falling_factorial(testing::cx({{0, 2}}), x) == 20.0);
    CHECK(falling_factorial(testing::cx({{0, 6}}), x) == 0.0);
    CHECK(stochastic_intensity(net, 0, x, 10.0) == doctest::Approx(3.0 * 20.0 / 10.0));
    CHECK(stochastic_intensity(net, 1, x, 10.0) == doctest::Approx(0.5));
    CHECK(stochastic_intensity(net, 2, x, 10.0) == doctest::Approx(20.0));
    CHECK(stochastic_intensity(net, 0, State{1, 0}, 10.0) == 0.0);
}

TEST_CASE("deterministic rates use 0^0 = 1") {
    const auto net = dimer();
    const std::vector<double> zero{0.0, 0.0};
    CHECK(deterministic_rate(net, 2, zero) == 2.0);
    CHECK(deterministic_rate(net, 0, zero) == 0.0);
    CHECK(monomial(testing::cx({{0, 2}, {1, 1}}), std::vector<double>{1.5, 2.0}) == doctest::Approx(4.5));
}

TEST_CASE("network validation reports structural problems") {
    CHECK(validate_network(dimer()).empty());
    const ReactionNetwork loop({"A"}, {{"self", testing::cx({{0, 1}}), testing::cx({{0, 1}}), 1.0}});
    CHECK_FALSE(validate_network(loop).empty());
    const ReactionNetwork negative({"A"}, {{"r", testing::cx({{0, 1}}), Complex(), -1.0}});
    CHECK_FALSE(validate_network(negative).empty());
    CHECK_THROWS_AS(ReactionNetwork({"A"}, {{"r", testing::cx({{2, 1}}), Complex(), 1.0}}), ModelError);
}

TEST_CASE("theta is the participation probability") {
    const Complex y({{0, 2}, {1, 1}});
    const State x{4, 3};
    CHECK(theta(y, SpeciesIndex{0}, x) == doctest::Approx(0.5));
    CHECK(theta(y, SpeciesIndex{1}, x) == doctest::Approx(1.0 / 3.0));
    CHECK(theta(y, std::nullopt, x) == 0.0);
    CHECK(theta(y, SpeciesIndex{0}, State{1, 3}) == 0.0);
    CHECK(theta(Complex(), SpeciesIndex{0}, x) == 0.0);
}

TEST_CASE("tracked and untracked intensities add up to the base intensity") {
    for (const char* name : {"sis", "sis_migration", "autophos", "mm_full", "mm_futile"}) {
        CAPTURE(name);
        const auto model = testing::bundled(name);
        const auto aug = testing::augmented(model);
        const double V = 7.0;
        const State x = scaled_initial_state(model.initial, 20.0);
        for (StatusId tau = 0; tau < static_cast<StatusId>(aug.schema().size()); ++tau) {
            const auto s = *aug.schema().sigma(tau);
            if (x[s] == 0) continue;
            for (std::size_t r = 0; r < aug.base().size(); ++r) {
                double sum = aug.untracked_intensity(r, tau, x, V);
                for (std::size_t k : aug.outcomes(r, tau)) sum += aug.tracked_intensity(k, tau, x, V);
                const double base = stochastic_intensity(aug.base(), r, x, V);
                CHECK(sum == doctest::Approx(base).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("schemas with broken row sums are rejected") {
    const ReactionNetwork net({"S", "I"}, {{"infect", testing::cx({{0, 1}, {1, 1}}), testing::cx({{1, 2}}), 1.0}});
    const StatusSchema bad({{"S~", 0, true}, {"I~", 1, true}},
                           {{0, 0, 1, 0.5, Rational(1, 2)}, {0, 1, 1, 1.0, Rational(1)}});
    CHECK_FALSE(validate_schema(net, bad).empty());
    CHECK_THROWS_AS(AugmentedNetwork(net, bad), ModelError);
}
