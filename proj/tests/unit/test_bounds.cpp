#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/bounds.hpp"
#include "molfate/error.hpp"

using namespace molfate;

namespace {

struct SisTube {
    Model model = testing::sis();
    AugmentedNetwork aug = testing::augmented(model);
    FluidSolution sol = solve_fluid(model.network, model.initial, 10.0);

    BoundQuantities at(double eps, double t, double V) const { return tube_quantities(aug, {&sol, eps, t}, V); }
};

// Independent evaluation of 6 exp(e T / 2 - eps sqrt(n) / 3) in long double.
long double poisson_oracle(long double T, long double eps, long double n) {
    const long double e = std::exp(1.0L);
    return 6.0L * std::exp(e * T / 2.0L - eps * std::sqrt(n) / 3.0L);
}

}  // namespace

TEST_CASE("centered Poisson bound") {
    for (double T : {0.5, 1.0, 3.0})
        for (double eps : {0.01, 0.1, 0.5})
            for (double n : {100.0, 1e4, 1e6})
                CHECK(centered_poisson_bound(T, eps, n) ==
                      doctest::Approx(static_cast<double>(poisson_oracle(T, eps, n))).epsilon(1e-12));
    CHECK_THROWS_AS(centered_poisson_bound(1.0, 0.0, 100.0), InvalidArgument);
    CHECK_THROWS_AS(centered_poisson_bound(-1.0, 0.1, 100.0), InvalidArgument);
}

TEST_CASE("SIS tube quantities against hand estimates") {
    const SisTube sis;
    const double eps = 0.05;
    const auto q = sis.at(eps, 10.0, 1e6);
    CHECK(q.R == 1.0);
    // Gradient of kappa1 S I plus kappa2 I at the upper corner, with S + I = 1.
    CHECK(q.L0 == doctest::Approx(1.0 + 2.0 * eps + 0.5).epsilon(1e-3));
    CHECK(q.L0 >= 1.0 + 2.0 * eps + 0.5);
    CHECK(q.delta0 <= 1e-12);
    CHECK(q.delta1 <= 1e-12);
    CHECK(q.Lambda1 <= q.t * q.Lambda0 * (1.0 + 1e-12));
    CHECK(q.L1 <= q.t * q.L0 * (1.0 + 1e-12));
    CHECK(q.L1 == doctest::Approx(16.0).epsilon(1e-3));
    CHECK(q.m == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(q.eta == doctest::Approx(std::exp(-q.L1_2eps) * eps).epsilon(1e-12));
    CHECK_FALSE(q.tracked_available);
}

TEST_CASE("tube quantities grow with the horizon and the radius") {
    const SisTube sis;
    const auto a = sis.at(0.02, 2.0, 1e6);
    const auto b = sis.at(0.02, 5.0, 1e6);
    const auto c = sis.at(0.05, 5.0, 1e6);
    CHECK(a.Lambda1 <= b.Lambda1);
    CHECK(a.L1 <= b.L1);
    CHECK(b.Lambda0 <= c.Lambda0);
    CHECK(b.L1 <= c.L1);
    CHECK(b.Lambda1 <= b.Lambda1_2eps);
    CHECK(b.L1_2eps <= b.L1_4eps);
}

TEST_CASE("zero horizon") {
    const SisTube sis;
    const auto q = sis.at(0.05, 0.0, 1e4);
    CHECK(q.Lambda1 == 0.0);
    CHECK(q.L1 == 0.0);
    CHECK(q.eta == doctest::Approx(0.05));
}

TEST_CASE("p bound behaviour") {
    const SisTube sis;
    SUBCASE("decreases with the volume and increases with the horizon") {
        const double p4 = p_bound(sis.at(0.1, 1.0, 1e4)).raw;
        const double p6 = p_bound(sis.at(0.1, 1.0, 1e6)).raw;
        const double p6t = p_bound(sis.at(0.1, 2.0, 1e6)).raw;
        CHECK(p6 < p4);
        CHECK(p6 < p6t);
    }
    SUBCASE("p0 is added") {
        const auto q = sis.at(0.1, 1.0, 1e6);
        CHECK(p_bound(q, 0.25).raw == doctest::Approx(p_bound(q).raw + 0.25));
    }
    SUBCASE("vacuous values are clamped") {
        const auto b = make_probability_bound(3.0);
        CHECK(b.vacuous);
        CHECK(b.clamped == 1.0);
        CHECK_FALSE(make_probability_bound(0.3).vacuous);
    }
    SUBCASE("the rederived SIS closed form dominates the generic bound") {
        for (double eps : {0.02, 0.05, 0.1})
            for (double t : {1.0, 5.0, 10.0})
                for (double V : {1e4, 1e6}) {
                    const auto q = sis.at(eps, t, V);
                    if (!(q.eta > 0.0 && q.eta_2eps > 0.0)) continue;
                    CHECK(p_bound(q).raw <= sis_rough_bound_corrected(1.0, 0.5, 1.0, eps, t, V) * (1.0 + 1e-9));
                }
    }
}

TEST_CASE("kinetics discrepancy for bimolecular complexes") {
    const std::string text =
        "species: P, Q\nreactions:\n  dim: 2P -> Q @ 1\n  back: Q -> 2P @ 1\n"
        "statuses:\n  P~ = P\n  Q~ = Q\ntransforms:\n  dim: P~ -> Q~ @ 1\n  back: Q~ -> P~ @ 1\n";
    const auto m = parse_model(text + "initial:\n  P = 1\n  Q = 1\n");
    const AugmentedNetwork aug(m.network, *m.schema);
    const auto sol = solve_fluid(m.network, m.initial, 1.0);
    const auto small = tube_quantities(aug, {&sol, 0.05, 1.0}, 100.0);
    const auto large = tube_quantities(aug, {&sol, 0.05, 1.0}, 1e4);
    CHECK(small.delta0 > 0.0);
    CHECK(large.delta0 < small.delta0);
    // P stays at equilibrium 1, and (z + 1/V) z - z^2 = z / V at z = 1 + eps.
    CHECK(small.delta0 == doctest::Approx(1.05 / 100.0).epsilon(1e-9));
    CHECK_THROWS_AS(p_bound(tube_quantities(aug, {&sol, 0.05, 1.0}, 10.0)), BoundUnavailable);
    CHECK_THROWS_AS(search_p_bound(aug, sol, 10.0, 1.0, {0.01, 0.05}, {0.5, 1.0}), BoundUnavailable);
}

TEST_CASE("bound hypotheses") {
    const SisTube sis;
    const auto q = sis.at(0.005, 1.0, 1e8);
    CHECK(q.tracked_available);
    CHECK_THROWS_AS(single_molecule_bound(sis.at(0.05, 1.0, 1e8), 0.0), BoundUnavailable);
    const auto single = single_molecule_bound(q, 0.01);
    CHECK(single.raw >= 0.01);
    CHECK_THROWS_AS(tube_quantities(sis.aug, {&sis.sol, 0.05, 11.0}, 1e6), InvalidArgument);
    CHECK_THROWS_AS(tube_quantities(sis.aug, {&sis.sol, 0.0, 1.0}, 1e6), InvalidArgument);
    CHECK_THROWS_AS(tube_quantities(sis.aug, {&sis.sol, 0.05, 1.0}, 1e6, 0.0), InvalidArgument);
}

TEST_CASE("aggregate bound tends to p_init + p for large levels") {
    const SisTube sis;
    const auto q = sis.at(0.005, 1.0, 1e8);
    const auto b = aggregate_bound(q, 1.0, 1.0, 0.0, 0.01, 0.02);
    CHECK(b.probability.raw == doctest::Approx(0.03).epsilon(1e-9));
    const auto tighter = aggregate_bound(q, 1e-3, 1e-3, 0.0, 0.01, 0.02);
    CHECK(tighter.nu < b.nu);
    CHECK(tighter.probability.raw >= b.probability.raw);
    CHECK_THROWS_AS(aggregate_bound(q, 0.0, 1.0, 0.0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("reports and search") {
    const SisTube sis;
    BoundInputs in;
    in.volume = 1e6;
    in.epsilon = 0.05;
    const auto report = evaluate_bounds(sis.aug, sis.sol, in);
    REQUIRE(report.p.has_value());
    CHECK(report.p->vacuous);
    CHECK(report.unavailable.size() == 2);
    const auto j = to_json(report);
    CHECK(j.at("single_bound").is_null());
    CHECK(j.at("aggregate_bound").is_null());
    CHECK(j.at("p_bound").at("clamped").get<double>() == 1.0);
    CHECK(j.at("quantities").at("L0").get<double>() == doctest::Approx(1.6).epsilon(1e-3));

    const auto best = search_p_bound(sis.aug, sis.sol, 1e8, 1.0, {0.02, 0.05, 0.1}, {0.5, 1.0});
    CHECK(best.p.raw <= p_bound(sis.at(0.05, 1.0, 1e8)).raw);
}
