#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <set>
#include <string>

#include "collage.h"

namespace {

struct SystemGuard {
    clg_system* g = nullptr;
    ~SystemGuard() { clg_free(g); }
};

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { clg_string_free(s); }
};

}  // namespace

TEST_CASE("parse, expand, serialize through the C API") {
    SystemGuard g;
    REQUIRE(clg_parse("X1 -> 'a'\nX2 -> X1 ^ 4\n", &g.g) == CLG_OK);
    StringGuard out;
    REQUIRE(clg_expand(g.g, 100, &out.s) == CLG_OK);
    CHECK(std::string(out.s) == "aaaa");
    StringGuard text;
    REQUIRE(clg_serialize(g.g, &text.s) == CLG_OK);
    CHECK(std::string(text.s) == "X1 -> 'a'\nX2 -> X1 ^ 4\nstart X2\n");
}

TEST_CASE("parse errors set the status and message") {
    clg_system* g = nullptr;
    CHECK(clg_parse("X1 -> X2 X2", &g) == CLG_ERR_PARSE);
    CHECK(g == nullptr);
    CHECK(std::strlen(clg_last_error()) > 0);
}

TEST_CASE("null arguments are rejected") {
    CHECK(clg_parse(nullptr, nullptr) == CLG_ERR_ARG);
    CHECK(clg_expand(nullptr, 10, nullptr) == CLG_ERR_ARG);
    int size = 0;
    CHECK(clg_oracle("", -1, &size, nullptr) == CLG_ERR_ARG);
}

TEST_CASE("validate reports violations") {
    SystemGuard g;
    REQUIRE(clg_parse("X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X1\nstart X3\n", &g.g) == CLG_OK);
    StringGuard report;
    CHECK(clg_validate(g.g, &report.s) == CLG_ERR_INVALID);
    REQUIRE(report.s != nullptr);
    CHECK(std::string(report.s).find("X2") != std::string::npos);
}

TEST_CASE("expand limit maps to the limit status") {
    SystemGuard g;
    REQUIRE(clg_parse("X1 -> 'a'\nX2 -> X1 ^ 1000000000\n", &g.g) == CLG_OK);
    StringGuard out;
    CHECK(clg_expand(g.g, 100, &out.s) == CLG_ERR_LIMIT);
    CHECK(std::string(clg_last_error()).find("1000000000") != std::string::npos);
}

TEST_CASE("stats and internalize") {
    SystemGuard g;
    REQUIRE(clg_parse(
                "X1 -> 'a'\nX2 -> 'b'\nX3 -> X1 X2\nX4 -> X3 [2..3)\nX5 -> X3 [1..2)\n"
                "X6 -> X4 X5\nstart X6\n",
                &g.g) == CLG_OK);
    clg_stats_t s;
    REQUIRE(clg_stats(g.g, &s) == CLG_OK);
    CHECK(s.m == 6);
    CHECK(s.m_tr == 2);
    CHECK(s.sigma == 2);
    CHECK(s.internal == 0);

    SystemGuard internal;
    uint64_t steps = 0;
    REQUIRE(clg_internalize(g.g, &internal.g, &steps) == CLG_OK);
    clg_stats_t s2;
    REQUIRE(clg_stats(internal.g, &s2) == CLG_OK);
    CHECK(s2.internal == 1);
    CHECK(s2.m <= 9 * s.m);
    StringGuard out;
    REQUIRE(clg_expand(internal.g, 100, &out.s) == CLG_OK);
    CHECK(std::string(out.s) == "ba");
}

TEST_CASE("oracle with witness") {
    int size = 0;
    SystemGuard witness;
    REQUIRE(clg_oracle("abab", -1, &size, &witness.g) == CLG_OK);
    CHECK(size == 4);
    StringGuard out;
    REQUIRE(clg_expand(witness.g, 100, &out.s) == CLG_OK);
    CHECK(std::string(out.s) == "abab");
    CHECK(clg_oracle("abab", 3, &size, nullptr) == CLG_ERR_LIMIT);
}

TEST_CASE("encode and decode round trip via the in-header pipeline") {
    StringGuard wcnf, catalog;
    REQUIRE(clg_encode("aaaa", 0, &wcnf.s, &catalog.s) == CLG_OK);
    CHECK(std::string(wcnf.s).find("p wcnf") != std::string::npos);
    REQUIRE(catalog.s != nullptr);

    // hand-build the optimal model: read variable ids from the catalog text
    std::string cat(catalog.s);
    auto var_of = [&](const std::string& name) {
        auto pos = cat.find(" " + name + "\n");
        REQUIRE(pos != std::string::npos);
        auto line_start = cat.rfind("var ", pos);
        return std::stoi(cat.substr(line_start + 4));
    };
    int var_count = 0;
    for (size_t pos = cat.find("var "); pos != std::string::npos; pos = cat.find("var ", pos + 1))
        ++var_count;
    std::string model = "v";
    std::set<int> pos_vars;
    for (const char* name :
         {"p 1", "p 2", "p 5", "f 1 1", "f 2 3", "refB 1 2 3", "dref 1 1 2", "q 1 1", "q 1 4"})
        pos_vars.insert(var_of(name));
    // depth vars: level 0 everywhere, level 1 on intervals touching position >= 2
    for (size_t pos = cat.find("var "); pos != std::string::npos; pos = cat.find("var ", pos + 1)) {
        size_t eol = cat.find('\n', pos);
        std::string line = cat.substr(pos, eol - pos);
        if (line.find(" depth ") == std::string::npos) continue;
        int id, i, l, d;
        REQUIRE(sscanf(line.c_str(), "var %d depth %d %d %d", &id, &i, &l, &d) == 4);
        if (d == 0 || (d == 1 && i + l > 2)) pos_vars.insert(id);
    }
    for (int v = 1; v <= var_count; ++v)
        model += (pos_vars.count(v) ? " " : " -") + std::to_string(v);
    model += " 0\n";

    SystemGuard sys;
    int size = 0;
    REQUIRE(clg_decode("aaaa", catalog.s, model.c_str(), &sys.g, &size) == CLG_OK);
    CHECK(size == 2);
    StringGuard out;
    REQUIRE(clg_expand(sys.g, 100, &out.s) == CLG_OK);
    CHECK(std::string(out.s) == "aaaa");
}

TEST_CASE("decode rejects a corrupted model") {
    StringGuard wcnf, catalog;
    REQUIRE(clg_encode("ab", 0, &wcnf.s, &catalog.s) == CLG_OK);
    clg_system* sys = nullptr;
    int size = 0;
    CHECK(clg_decode("ab", catalog.s, "v 0\n", &sys, &size) == CLG_ERR_DECODE);
    CHECK(sys == nullptr);
}
