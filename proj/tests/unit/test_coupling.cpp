#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/coupling.hpp"
#include "molfate/paths.hpp"
#include "molfate/stats.hpp"

using namespace molfate;

TEST_CASE("coupled limit path has the law of the limit process") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const auto sol = solve_fluid(model.network, model.initial, 10.0);
    const CoupledSimulator coupled(aug, sol);
    const SingleMoleculeSimulator sim(build_limit_rates(aug), sol);
    const State x0 = scaled_initial_state(model.initial, 1000.0);
    std::vector<double> a, b;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        a.push_back(std::min(first_exit_time(coupled.simulate(1000.0, x0, 0, 10.0, 21, i).limit), 10.0));
        b.push_back(std::min(first_exit_time(sim.simulate(0, 10.0, 22, i)), 10.0));
    }
    const double d = kolmogorov_distance(EmpiricalDistribution::continuous(a), EmpiricalDistribution::continuous(b));
    CHECK(ks_two_sample_p_value(d, a.size(), b.size()) > 1e-3);
}

TEST_CASE("coupled finite path has the law of the tracking chain") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const auto sol = solve_fluid(model.network, model.initial, 10.0);
    const CoupledSimulator coupled(aug, sol);
    const State x0 = scaled_initial_state(model.initial, 200.0);
    std::vector<double> a, b;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        a.push_back(std::min(first_exit_time(coupled.simulate(200.0, x0, 0, 10.0, 31, i).finite), 10.0));
        b.push_back(std::min(first_exit_time(simulate_tracked(aug, 200.0, x0, 0, 10.0, 32, i).status), 10.0));
    }
    const double d = kolmogorov_distance(EmpiricalDistribution::continuous(a), EmpiricalDistribution::continuous(b));
    CHECK(ks_two_sample_p_value(d, a.size(), b.size()) > 1e-3);
}

TEST_CASE("disagreement shrinks with the volume and ignores the thread count") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const auto sol = solve_fluid(model.network, model.initial, 2.0);
    const CoupledSimulator coupled(aug, sol);
    const auto grid = uniform_grid(2.0, 20);
    const auto small = coupled.disagreement(100.0, scaled_initial_state(model.initial, 100.0), 0, 2.0, grid, 5, 400, 1);
    const auto large = coupled.disagreement(1e5, scaled_initial_state(model.initial, 1e5), 0, 2.0, grid, 5, 400, 1);
    CHECK(small.front() == 0.0);
    CHECK(*std::max_element(large.begin(), large.end()) <= *std::max_element(small.begin(), small.end()));
    CHECK(coupled.disagreement(100.0, scaled_initial_state(model.initial, 100.0), 0, 2.0, grid, 5, 400, 3) == small);
}
