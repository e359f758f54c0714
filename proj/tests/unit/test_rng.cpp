#include <set>

#include "doctest.h"
#include "molfate/rng.hpp"

using molfate::Philox4x32;
using molfate::RandomStream;
using molfate::StreamPurpose;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RandomStream a(7, 3, StreamPurpose::Reactions), b(7, 3, StreamPurpose::Reactions);
    RandomStream c(7, 4, StreamPurpose::Reactions), d(7, 3, StreamPurpose::Tracking);
    std::set<double> seen;
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        seen.insert(u);
    }
    CHECK(seen.size() == 1000);
    CHECK(c.uniform() != RandomStream(7, 3, StreamPurpose::Reactions).uniform());
    CHECK(d.uniform() != RandomStream(7, 3, StreamPurpose::Reactions).uniform());
}

TEST_CASE("uniforms have the right mean and exponentials the right mean") {
    RandomStream s(1, 0, StreamPurpose::Poisson);
    double su = 0.0, se = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        su += s.uniform();
        se += s.exponential();
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(se / n == doctest::Approx(1.0).epsilon(0.01));
}
