#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "collage/clg_format.hpp"
#include "collage/expand.hpp"
#include "generators.hpp"

using namespace collage;

TEST_CASE("single atomic rule") {
    CollageSystem g = parse_system("X1 -> 'a'");
    CHECK(g.size() == 1);
    CHECK(g.start == 1);
    CHECK(g.rule(1).kind == RuleKind::Atomic);
    CHECK(g.rule(1).atom == 'a');
}

TEST_CASE("repetition rule") {
    CollageSystem g = parse_system("X1 -> 'a'\nX2 -> X1 ^ 4");
    CHECK(g.size() == 2);
    CHECK(g.rule(2) == Rule::repetition(1, 4));
    CHECK(g.start == 2);  // default start is the last rule
}

TEST_CASE("forward references are rejected") {
    CHECK_THROWS_AS(parse_system("X1 -> X2 X2"), ParseError);
}

TEST_CASE("repeat count 2 is rejected with a hint") {
    try {
        parse_system("X1 -> 'a'\nX2 -> X1 ^ 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("concatenation") != std::string::npos);
    }
}

TEST_CASE("start directive overrides the default") {
    CollageSystem g = parse_system("X1 -> 'a'\nX2 -> 'b'\nstart X1\n");
    CHECK(g.start == 1);
}

TEST_CASE("comments and blank lines are ignored") {
    CollageSystem g = parse_system("# header\n\nX1 -> 'a'  # trailing\n");
    CHECK(g.size() == 1);
}

TEST_CASE("serialization of the size-1 system") {
    CollageSystem g;
    g.rules.push_back(Rule::atomic('a'));
    g.start = 1;
    CHECK(serialize_system(g) == "X1 -> 'a'\nstart X1\n");
}

TEST_CASE("truncation line format") {
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 [2..3)\n");
    CHECK(g.rule(4) == Rule::truncation(3, 2, 3));
    CHECK(serialize_system(g).find("X4 -> X3 [2..3)") != std::string::npos);
}

TEST_CASE("non-sequential rule ids are rejected") {
    CHECK_THROWS_AS(parse_system("X2 -> 'a'"), ParseError);
    CHECK_THROWS_AS(parse_system("X1 -> 'a'\nX3 -> X1 X1"), ParseError);
}

TEST_CASE("huge repeat counts survive a round trip") {
    std::string src = "X1 -> 'a'\nX2 -> X1 ^ 123456789012345678901234567890\nstart X2\n";
    CollageSystem g = parse_system(src);
    CHECK(g.rule(2).repeat == BigInt("123456789012345678901234567890"));
    CHECK(serialize_system(g) == src);
}

TEST_CASE("parse is the inverse of serialize") {
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 ^ 5\nX5 -> X4 [3..9)\nstart X5\n");
    CHECK(parse_system(serialize_system(g)) == g);
}

TEST_CASE("round trip identity on random systems") {
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        CollageSystem g = testgen::random_system(rng, 30, 5000, 4);
        CAPTURE(serialize_system(g));
        CHECK(parse_system(serialize_system(g)) == g);
    }
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_system("X1 -> 'a'\nX2 -> X1 $ X1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col > 1);
    }
}
