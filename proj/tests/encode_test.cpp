#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "collage/decode.hpp"
#include "collage/encode.hpp"
#include "collage/oracle.hpp"

using namespace collage;

namespace {

// all typed factorizations of text that pass the validity checker
std::vector<TypedFactorization> enumerate_valid(const std::string& text) {
    int n = static_cast<int>(text.size());
    std::vector<TypedFactorization> out;
    for (uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
        TypedFactorization tf;
        tf.bounds.push_back(1);
        for (int i = 2; i <= n; ++i)
            if (mask & (1ull << (i - 2))) tf.bounds.push_back(i);
        tf.bounds.push_back(n + 1);
        int h = static_cast<int>(tf.bounds.size()) - 1;
        tf.factors.resize(static_cast<size_t>(h));

        std::vector<std::vector<Factor>> options(static_cast<size_t>(h));
        bool feasible = true;
        for (int k = 1; k <= h && feasible; ++k) {
            auto& opts = options[static_cast<size_t>(k - 1)];
            int64_t len = tf.factor_length(k);
            if (len == 1) {
                opts.push_back(Factor{});
                continue;
            }
            std::string fk = text.substr(static_cast<size_t>(tf.factor_begin(k) - 1),
                                         static_cast<size_t>(len));
            for (int i = 1; i <= h; ++i)
                for (int j = i; j <= h; ++j) {
                    std::string ref =
                        text.substr(static_cast<size_t>(tf.factor_begin(i) - 1),
                                    static_cast<size_t>(tf.factor_end(j) - tf.factor_begin(i)));
                    if (j < k && ref == fk) opts.push_back(Factor{FactorType::A, i, j, 0, 0});
                    if (j == k - 1 && len % static_cast<int64_t>(ref.size()) == 0) {
                        int64_t rm1 = len / static_cast<int64_t>(ref.size());
                        std::string rep;
                        for (int64_t t = 0; t < rm1; ++t) rep += ref;
                        if (rm1 >= 2 && rep == fk)
                            opts.push_back(Factor{FactorType::B, i, j, rm1 + 1, 0});
                    }
                    if ((k < i || k > j) && ref.find(fk) != std::string::npos)
                        opts.push_back(Factor{FactorType::C, i, j, 0, 0});
                }
            if (opts.empty()) feasible = false;
        }
        if (!feasible) continue;

        std::vector<size_t> idx(static_cast<size_t>(h), 0);
        while (true) {
            for (int k = 1; k <= h; ++k)
                tf.factor(k) = options[static_cast<size_t>(k - 1)][idx[static_cast<size_t>(k - 1)]];
            if (check_factorization(text, tf).ok) {
                TypedFactorization keep = tf;
                assign_reference_depths(keep);
                out.push_back(keep);
            }
            int k = 0;
            while (k < h && ++idx[static_cast<size_t>(k)] == options[static_cast<size_t>(k)].size())
                idx[static_cast<size_t>(k++)] = 0;
            if (k == h) break;
        }
    }
    return out;
}

// the assignment a valid factorization is meant to induce on the catalog
std::vector<bool> intended_assignment(const TypedFactorization& tf, const VariableCatalog& c) {
    int n = c.n;
    std::vector<bool> val(static_cast<size_t>(c.var_count) + 1, false);
    std::set<int64_t> bounds(tf.bounds.begin(), tf.bounds.end());
    for (int i = 1; i <= n + 1; ++i)
        if (bounds.count(i)) val[static_cast<size_t>(c.p_var(i))] = true;
    for (int k = 1; k <= tf.factor_count(); ++k) {
        int i = static_cast<int>(tf.factor_begin(k));
        int l = static_cast<int>(tf.factor_length(k));
        val[static_cast<size_t>(c.f.at({i, l}))] = true;
        const Factor& f = tf.factor(k);
        int rb = f.type == FactorType::LengthOne ? 0 : static_cast<int>(tf.factor_begin(f.ref_begin));
        int re = f.type == FactorType::LengthOne ? 0 : static_cast<int>(tf.factor_end(f.ref_end));
        switch (f.type) {
            case FactorType::A:
                val[static_cast<size_t>(c.refA.at({rb, i, l}))] = true;
                val[static_cast<size_t>(c.dref.at({rb, l, i}))] = true;
                val[static_cast<size_t>(c.q.at({rb, l}))] = true;
                break;
            case FactorType::B:
                val[static_cast<size_t>(c.refB.at({rb, i, l}))] = true;
                val[static_cast<size_t>(c.dref.at({rb, i - rb, i}))] = true;
                val[static_cast<size_t>(c.q.at({rb, i - rb}))] = true;
                val[static_cast<size_t>(c.q.at({rb, l + i - rb}))] = true;
                break;
            case FactorType::C:
                val[static_cast<size_t>(c.refC.at({rb, re - rb, i, l}))] = true;
                val[static_cast<size_t>(c.dref.at({rb, re - rb, i}))] = true;
                val[static_cast<size_t>(c.q.at({rb, re - rb}))] = true;
                break;
            default:
                break;
        }
    }
    // character depths, then interval depths as maxima
    std::vector<int64_t> char_depth(static_cast<size_t>(n) + 1, 0);
    for (int k = 1; k <= tf.factor_count(); ++k)
        for (int64_t i = tf.factor_begin(k); i < tf.factor_end(k); ++i)
            char_depth[static_cast<size_t>(i)] = tf.factor(k).depth;
    for (const auto& [key, v] : c.depth) {
        auto [i, l, d] = key;
        int64_t mx = 0;
        for (int j = i; j < i + l; ++j) mx = std::max(mx, char_depth[static_cast<size_t>(j)]);
        val[static_cast<size_t>(v)] = d <= mx;
    }
    return val;
}

std::string signature(const TypedFactorization& tf) {
    std::string s;
    for (int64_t b : tf.bounds) s += std::to_string(b) + ",";
    for (int k = 1; k <= tf.factor_count(); ++k) {
        const Factor& f = tf.factor(k);
        if (f.type == FactorType::LengthOne) {
            s += "|1";
            continue;
        }
        s += "|" + std::string(1, "1ABC"[static_cast<int>(f.type)]) +
             std::to_string(tf.factor_begin(f.ref_begin)) + ":" +
             std::to_string(tf.factor_end(f.ref_end));
    }
    return s;
}

// tiny DPLL, used to solve desk instances without the external tool
struct MiniSat {
    int nvars;
    std::vector<std::vector<int>> clauses;
    std::vector<int8_t> val;

    bool solve() {
        val.assign(static_cast<size_t>(nvars) + 1, -1);
        return dpll();
    }

    bool dpll() {
        std::vector<int> trail;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& cl : clauses) {
                int open = 0, last = 0;
                bool sat = false;
                for (int lit : cl) {
                    int8_t v = val[static_cast<size_t>(std::abs(lit))];
                    if (v == -1) {
                        ++open;
                        last = lit;
                    } else if ((v == 1) == (lit > 0)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (open == 0) {
                    for (int v : trail) val[static_cast<size_t>(v)] = -1;
                    return false;
                }
                if (open == 1) {
                    val[static_cast<size_t>(std::abs(last))] = last > 0 ? 1 : 0;
                    trail.push_back(std::abs(last));
                    changed = true;
                }
            }
        }
        int pick = 0;
        for (int v = 1; v <= nvars && !pick; ++v)
            if (val[static_cast<size_t>(v)] == -1) pick = v;
        if (!pick) return true;
        for (int8_t t : {1, 0}) {
            val[static_cast<size_t>(pick)] = t;
            if (dpll()) return true;
        }
        val[static_cast<size_t>(pick)] = -1;
        for (int v : trail) val[static_cast<size_t>(v)] = -1;
        return false;
    }
};

// exact MaxSAT by linear search on the number of violated soft clauses,
// allowing "violate these exact softs" patterns via subset enumeration
int mini_maxsat(const MaxSatInstance& inst, std::vector<int8_t>& model) {
    int s = static_cast<int>(inst.soft.size());
    for (int k = 0; k <= s; ++k) {
        // choose which k soft clauses may be violated
        std::vector<int> pick(static_cast<size_t>(s), 0);
        std::fill(pick.begin(), pick.begin() + k, 1);
        std::sort(pick.begin(), pick.end());
        do {
            MiniSat sat;
            sat.nvars = inst.var_count;
            for (const auto& cl : inst.hard) sat.clauses.push_back(cl.lits);
            bool bad = false;
            for (int i = 0; i < s; ++i)
                if (!pick[static_cast<size_t>(i)]) sat.clauses.push_back(inst.soft[static_cast<size_t>(i)].lits);
            if (!bad && sat.solve()) {
                model = sat.val;
                return k;
            }
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return -1;
}

}  // namespace

TEST_CASE("refA domain of aaaa at length 2") {
    VariableCatalog c = build_catalog("aaaa");
    std::vector<std::tuple<int, int, int>> len2;
    for (const auto& [k, v] : c.refA)
        if (std::get<2>(k) == 2) len2.push_back(k);
    REQUIRE(len2.size() == 1);
    CHECK(len2.front() == std::make_tuple(1, 3, 2));
}

TEST_CASE("refB domain of aaaa contains the full repetition") {
    VariableCatalog c = build_catalog("aaaa");
    CHECK(c.refB.count({1, 2, 3}) == 1);
}

TEST_CASE("ab has no repeated content, so all reference domains are empty") {
    VariableCatalog c = build_catalog("ab");
    CHECK(c.refA.empty());
    CHECK(c.refB.empty());
    CHECK(c.refC.empty());
}

TEST_CASE("encoding output is byte-identical across runs") {
    for (WcnfFormat fmt : {WcnfFormat::Legacy, WcnfFormat::New}) {
        std::string a = write_wcnf(encode("abacaba"), fmt);
        std::string b = write_wcnf(encode("abacaba"), fmt);
        CHECK(a == b);
    }
}

TEST_CASE("legacy header uses top = softs + 1") {
    MaxSatInstance inst = encode("a");  // n=1: no soft clauses at all
    CHECK(inst.soft.empty());
    std::string wcnf = write_wcnf(inst, WcnfFormat::Legacy);
    auto pos = wcnf.find("p wcnf ");
    REQUIRE(pos != std::string::npos);
    std::string header = wcnf.substr(pos, wcnf.find('\n', pos) - pos);
    CHECK(header.substr(header.rfind(' ') + 1) == "1");
}

TEST_CASE("new format prefixes hard clauses with h") {
    std::string wcnf = write_wcnf(encode("ab"), WcnfFormat::New);
    CHECK(wcnf.find("\nh ") != std::string::npos);
    CHECK(wcnf.find("p wcnf") == std::string::npos);
}

TEST_CASE("soft clauses are the negated factor starts plus negated refC") {
    MaxSatInstance inst = encode("abcab");
    int n = inst.catalog.n;
    size_t expected = static_cast<size_t>(n - 1) + inst.catalog.refC.size();
    CHECK(inst.soft.size() == expected);
}

TEST_CASE("catalog sidecar round trips and verifies") {
    VariableCatalog c = build_catalog("abab");
    std::string sidecar = write_catalog_sidecar(c);
    VariableCatalog back = read_catalog_sidecar(sidecar, "abab");
    CHECK(back.var_count == c.var_count);
    CHECK(back.names == c.names);
    std::string tampered = sidecar;
    tampered.replace(tampered.find("refA"), 4, "refB");
    CHECK_THROWS_AS(read_catalog_sidecar(tampered, "abab"), Error);
    CHECK_THROWS_AS(read_catalog_sidecar(sidecar, "abba"), Error);
}

TEST_CASE("every valid factorization satisfies the catalog-only hard clauses") {
    for (std::string t : {"aa", "aaa", "aab", "aba", "abc", "aaaa", "abab"}) {
        MaxSatInstance inst = encode(t);
        const VariableCatalog& c = inst.catalog;
        auto valid = enumerate_valid(t);
        REQUIRE(!valid.empty());
        for (const auto& tf : valid) {
            std::vector<bool> val = intended_assignment(tf, c);
            int violated_soft = 0;
            for (const auto& cl : inst.soft) {
                bool sat = false;
                for (int lit : cl.lits)
                    sat = sat || (val[static_cast<size_t>(std::abs(lit))] == (lit > 0));
                violated_soft += !sat;
            }
            for (const auto& cl : inst.hard) {
                bool has_aux = false, sat = false;
                for (int lit : cl.lits) {
                    if (std::abs(lit) > c.var_count) has_aux = true;
                    else sat = sat || (val[static_cast<size_t>(std::abs(lit))] == (lit > 0));
                }
                if (has_aux) continue;  // counter clauses, satisfiable for any input
                CAPTURE(t);
                CAPTURE(signature(tf));
                REQUIRE(sat);
            }
            // objective bookkeeping: cost is (h-1) + truncation count
            CHECK(violated_soft == tf.factor_count() - 1 + tf.truncation_count());
        }
    }
}

TEST_CASE("in-process exact solving matches the oracle on tiny strings") {
    for (std::string t : {"a", "aa", "ab", "aaa", "aba", "abc", "aaaa", "abab", "abca"}) {
        MaxSatInstance inst = encode(t);
        std::vector<int8_t> model;
        int cost = mini_maxsat(inst, model);
        REQUIRE(cost >= 0);
        std::string v = "v";
        for (int i = 1; i <= inst.catalog.var_count; ++i)
            v += (model[static_cast<size_t>(i)] == 1 ? " " : " -") + std::to_string(i);
        v += " 0\n";
        CertifiedResult r = certified_size(v, inst.catalog);
        CAPTURE(t);
        CHECK(r.size == brute_force_chat(t).size);
        std::set<char> chars(t.begin(), t.end());
        CHECK(r.size == cost + static_cast<int>(chars.size()));
    }
}
