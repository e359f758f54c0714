#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/error.hpp"
#include "molfate/singlemol.hpp"
#include "molfate/stats.hpp"

using namespace molfate;

TEST_CASE("SIS limit hazards are kappa1 Z_I and kappa2") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const auto table = build_limit_rates(aug);
    const auto sol = solve_fluid(model.network, model.initial, 10.0);
    for (double t : {0.0, 0.7, 3.3, 10.0}) {
        const double zi = sol.eval_component(t, 1);
        CHECK(std::abs(hazard(table, sol, 0, t) - zi) <= 1e-12 * zi);
        CHECK(std::abs(hazard(table, sol, 1, t) - 0.5) <= 1e-12 * 0.5);
    }
}

TEST_CASE("simplified and literal limit rates agree off the boundary") {
    for (const char* name : {"sis", "autophos", "mm_full", "mm_futile"}) {
        CAPTURE(name);
        const auto model = testing::bundled(name);
        const auto table = build_limit_rates(testing::augmented(model));
        for (std::size_t k = 0; k < table.entries().size(); ++k)
            CHECK(table.rate(k, model.initial) == doctest::Approx(table.ratio_rate(k, model.initial)).epsilon(1e-12));
    }
}

TEST_CASE("constant-rate holding times are exponential") {
    const auto model = testing::bundled("sis");
    const auto aug = testing::augmented(model);
    const auto sol = solve_fluid(model.network, model.initial, 40.0);
    const SingleMoleculeSimulator sim(build_limit_rates(aug), sol);
    std::vector<double> holding;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const auto path = sim.simulate(1, 40.0, 4, i);
        if (path.jumps() > 0) holding.push_back(path.times.front());
    }
    CHECK(holding.size() > 9990);
    const auto r = ks_test(holding, [](double x) { return 1.0 - std::exp(-0.5 * x); });
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("majorants dominate the hazard") {
    const auto model = testing::bundled("mm_futile");
    const auto aug = testing::augmented(model);
    const auto sol = solve_fluid(model.network, model.initial, 10.0);
    const SingleMoleculeSimulator sim(build_limit_rates(aug), sol);
    for (std::size_t i = 0; i < sol.cells(); i += 37)
        for (StatusId tau = 0; tau < 5; ++tau)
            CHECK(sim.majorant(tau, i) >= hazard(sim.table(), sol, tau, sol.time(i)));
}

TEST_CASE("status weights") {
    const auto model = testing::bundled("mm_full");
    const auto& schema = *model.schema;
    const auto all = status_weights(schema, model.initial);
    const auto c = *schema.status_index("C~E");
    CHECK(all[static_cast<std::size_t>(c)] == doctest::Approx(model.initial[2] / 2.0));
    const auto e = *schema.status_index("E~");
    const auto enzyme = status_weights(schema, model.initial, {e, c});
    CHECK(enzyme[static_cast<std::size_t>(e)] == doctest::Approx(model.initial[0]));
    CHECK(enzyme[static_cast<std::size_t>(c)] == doctest::Approx(model.initial[2]));
    CHECK(enzyme[static_cast<std::size_t>(*schema.status_index("P~"))] == 0.0);
}

TEST_CASE("limit simulation refuses a fluid solution touching zero") {
    const ReactionNetwork decay({"A", "B"}, {{"d", testing::cx({{0, 1}}), testing::cx({{1, 1}}), 1.0}});
    const StatusSchema schema({{"A~", 0, true}, {"B~", 1, true}}, {{0, 0, 1, 1.0, Rational(1)}});
    const AugmentedNetwork aug(decay, schema);
    const auto sol = solve_fluid(decay, {1.0, 0.0}, 1.0);
    CHECK_THROWS_AS(SingleMoleculeSimulator(build_limit_rates(aug), sol), SimulationError);
}
