#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "collage/clg_format.hpp"
#include "collage/expand.hpp"
#include "collage/grammar_tree.hpp"
#include "collage/internalize.hpp"
#include "generators.hpp"

using namespace collage;

namespace {

void check_contract(const CollageSystem& in) {
    int m = in.size();
    std::string text = expand(in, 1u << 20);
    InternalizeResult r = internalize(in);
    CAPTURE(serialize_system(in));
    CHECK(expand(r.system, 1u << 20) == text);
    CHECK(is_internal(r.system));
    CHECK(r.system.size() <= 9 * m);
    CHECK(validate(r.system).ok());
}

}  // namespace

TEST_CASE("internal input is returned unchanged") {
    CollageSystem g = parse_system("X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 ^ 3\n");
    InternalizeResult r = internalize(g);
    CHECK(r.system == g);
    CHECK(r.steps == 0);
}

TEST_CASE("G0 collapses to three rules") {
    CollageSystem g0 = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 [2..3)\nX5 -> X3 [1..2)\nX6 -> X4 X5\n");
    InternalizeResult r = internalize(g0);
    CHECK(expand(r.system, 100) == "ba");
    CHECK(is_internal(r.system));
    CHECK(r.system.size() <= 5);
    // both truncations resolve into atomic rules, leaving b, a, and the concat
    CHECK(r.system.size() == 3);
}

TEST_CASE("truncation into one side of a concatenation re-targets") {
    // Q -> X[2..3) with X -> Y Z and |[[Y]]| = 1 lands inside Z
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X2 X2\nX4 -> X1 X3\nX5 -> X4 [2..3)\n");
    check_contract(g);
}

TEST_CASE("truncation spanning several repetition copies") {
    // Q -> X[2..8) with X -> Y^4, |[[Y]]| = 3: partial, full, partial copies
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 X1\nX5 -> X4 ^ 4\nX6 -> X5 [2..8)\n");
    CHECK(expand(g, 100) == "baabaa");
    check_contract(g);
}

TEST_CASE("repetition interval crossing one copy boundary") {
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 ^ 5\nX5 -> X4 [2..5)\nX6 -> X5 X5\n");
    check_contract(g);
}

TEST_CASE("case 2 example expands and internalizes") {
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> X1 ^ 6\nX3 -> X2 [2..5)\nX4 -> X3 X3\n");
    CHECK(expand(g, 100) == "aaaaaa");
    check_contract(g);
}

TEST_CASE("full-copy truncations adopt the referent") {
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 [1..3)\nX5 -> X4 X4\n");
    check_contract(g);
    CHECK(internalize(g).system.size() <= 4);
}

TEST_CASE("two truncations of one concatenation share suffix and prefix rules") {
    CollageSystem g = parse_system(
        "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 ^ 3\nX5 -> X4 ^ 3\n"
        "X6 -> X5 [2..18)\nX7 -> X5 [3..17)\nX8 -> X6 X7\n");
    check_contract(g);
}

TEST_CASE("nested truncation chains resolve") {
    CollageSystem g = testgen::truncation_chain_family(6);
    check_contract(g);
}

TEST_CASE("random systems satisfy the full contract") {
    std::mt19937 rng(23);
    for (int it = 0; it < 300; ++it)
        check_contract(testgen::random_system(rng, 25, 2000, 4));
}

TEST_CASE("step counter stays quadratic") {
    for (int k : {4, 8, 16, 32}) {
        CollageSystem g = testgen::truncation_chain_family(k);
        InternalizeResult r = internalize(g);
        uint64_t m = static_cast<uint64_t>(g.size());
        CHECK(r.steps <= 4 * m * m);
    }
}
