#include <filesystem>

#include "doctest.h"
#include "helpers.hpp"
#include "molfate/error.hpp"
#include "molfate/model_io.hpp"

using namespace molfate;

TEST_CASE("every bundled model loads and round-trips") {
    for (const auto& entry : std::filesystem::directory_iterator(MOLFATE_MODEL_DIR)) {
        if (entry.path().extension() != ".model") continue;
        CAPTURE(entry.path().string());
        const Model m = load_model(entry.path());
        CHECK(m.schema.has_value());
        CHECK(m.initial.size() == m.network.dimension());
        const Model again = parse_model(serialize_model(m));
        CHECK(again == m);
    }
}

TEST_CASE("parse errors carry the line number") {
    const char* text = "species: S, I\nreactions:\n  infect: S + Q -> 2I @ 1\n";
    try {
        parse_model(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_model("reactions:\n"), ParseError);
    CHECK_THROWS_AS(parse_model("species: A\nreactions:\n  r: A -> 0\n"), ParseError);
    CHECK_THROWS_AS(parse_model("species: A\nreactions:\n  r: A -> 0 @ x\n"), ParseError);
}

TEST_CASE("unicode arrows and rational probabilities") {
    const char* text =
        "species: P, Q\nreactions:\n  phos: 2P \xE2\x86\x92 P + Q @ 1\n"
        "statuses:\n  P~ = P\n  Q~ = Q\ntransforms:\n  phos: P~ -> P~ @ 1/2\n  phos: P~ -> Q~ @ 1/2\n";
    const Model m = parse_model(text);
    CHECK(m.network.reaction(0).reactant[0] == 2);
    const auto& t = m.schema->transforms();
    REQUIRE(t.size() == 2);
    CHECK(t[0].exact == Rational(1, 2));
    CHECK(t[0].probability == 0.5);
}

TEST_CASE("structural violations raise model errors") {
    const char* text =
        "species: S, I\nreactions:\n  infect: S + I -> 2I @ 1\n"
        "statuses:\n  S~ = S\n  I~ = I\ntransforms:\n  infect: S~ -> I~ @ 1\n";
    CHECK_THROWS_AS(parse_model(text), ModelError);
    CHECK_NOTHROW(parse_model(text, false));
}

TEST_CASE("doubles are formatted to round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) CHECK(std::stod(format_double(v)) == v);
}
