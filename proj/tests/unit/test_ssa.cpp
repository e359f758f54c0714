#include <cmath>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/error.hpp"
#include "molfate/ssa.hpp"

using namespace molfate;

namespace {

// 0 -> A at rate kappa_b V, A -> 0 at rate kappa_d x.
ReactionNetwork immigration_death(double kb, double kd) {
    return ReactionNetwork({"A"}, {{"in", Complex(), testing::cx({{0, 1}}), kb}, {"out", testing::cx({{0, 1}}), Complex(), kd}});
}

double poisson_pmf(double mean, long k) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); }

}  // namespace

TEST_CASE("uniformization matches the Poisson law of immigration-death") {
    const auto net = immigration_death(2.0, 1.0);
    const double V = 3.0, t = 0.8;
    TransientOptions o;
    o.max_count = 60;
    const auto dist = exact_transient(net, V, State{0}, t, o);
    const double mean = 2.0 * V * (1.0 - std::exp(-t));
    double total = 0.0;
    for (long k = 0; k < 30; ++k) {
        CAPTURE(k);
        CHECK(dist.probability_of(State{k}) == doctest::Approx(poisson_pmf(mean, k)).epsilon(1e-8));
        total += dist.probability_of(State{k});
    }
    CHECK(total + dist.truncated_mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Gillespie marginal agrees with the exact transient law") {
    const auto net = immigration_death(2.0, 1.0);
    const double V = 3.0, t = 0.8;
    TransientOptions o;
    o.max_count = 60;
    const auto dist = exact_transient(net, V, State{0}, t, o);
    const auto paths = simulate_ssa_batch(net, V, State{0}, t, 11, 20000, 1);
    std::map<Count, double> freq;
    for (const auto& p : paths) freq[p.final_state()[0]] += 1.0 / paths.size();
    double tv = 0.0;
    for (std::size_t i = 0; i < dist.states.size(); ++i) {
        const Count k = dist.states[i][0];
        tv += std::abs(dist.probabilities[i] - (freq.count(k) ? freq[k] : 0.0));
        freq.erase(k);
    }
    for (const auto& [k, f] : freq) tv += f;
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("tracked species path equals the plain Gillespie path") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const State x0 = scaled_initial_state(model.initial, 200.0);
    for (std::uint64_t traj = 0; traj < 20; ++traj) {
        const auto plain = simulate_ssa(aug.base(), 200.0, x0, 5.0, 3, traj);
        const auto tracked = simulate_tracked(aug, 200.0, x0, 1, 5.0, 3, traj);
        CHECK(plain == tracked.species);
        CHECK(tracked.status.initial == 1);
    }
}

TEST_CASE("record=false keeps only the final state") {
    const auto model = testing::bundled("sis");
    const State x0 = scaled_initial_state(model.initial, 100.0);
    SsaOptions o;
    o.record = false;
    const auto full = simulate_ssa(model.network, 100.0, x0, 3.0, 5, 0);
    const auto lean = simulate_ssa(model.network, 100.0, x0, 3.0, 5, 0, o);
    CHECK(lean.final_state() == full.final_state());
    CHECK(lean.jumps() <= 1);
}

TEST_CASE("tracked exact transient marginal equals the plain transient") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const double V = 5.0;
    const State x0{3, 2};
    const auto plain = exact_transient(aug.base(), V, x0, 1.0);
    for (StatusId tau0 : {0, 1}) {
        const auto marginal = species_marginal(exact_transient(aug, V, x0, tau0, 1.0));
        for (std::size_t i = 0; i < plain.states.size(); ++i)
            CHECK(std::abs(marginal.probability_of(plain.states[i]) - plain.probabilities[i]) < 1e-9);
    }
}

TEST_CASE("initial states and status draws") {
    CHECK(scaled_initial_state({0.99, 0.01}, 1000.0) == State{990, 10});
    CHECK(scaled_initial_state({0.3}, 10.0) == State{3});
    const std::vector<double> w{0.0, 1.0, 3.0};
    int ones = 0;
    for (std::uint64_t i = 0; i < 4000; ++i) {
        const auto k = draw_initial(w, 9, i);
        CHECK(k != 0);
        ones += k == 1;
    }
    CHECK(ones / 4000.0 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("batches do not depend on the thread count") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const State x0 = scaled_initial_state(model.initial, 100.0);
    CHECK(simulate_ssa_batch(model.network, 100.0, x0, 4.0, 2, 50, 1) ==
          simulate_ssa_batch(model.network, 100.0, x0, 4.0, 2, 50, 4));
    const std::vector<double> w{0.5, 0.5};
    CHECK(simulate_tracked_batch(aug, 100.0, x0, w, 4.0, 2, 50, 1) ==
          simulate_tracked_batch(aug, 100.0, x0, w, 4.0, 2, 50, 3));
}

TEST_CASE("runaway simulations are stopped") {
    const ReactionNetwork birth({"A"}, {{"b", testing::cx({{0, 1}}), testing::cx({{0, 2}}), 1.0}});
    SsaOptions o;
    o.max_events = 100;
    CHECK_THROWS_AS(simulate_ssa(birth, 1.0, State{10}, 100.0, 1, 0, o), SimulationError);
}
