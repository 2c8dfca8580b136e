#include "collage/oracle.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace collage {

namespace {

struct Interval {
    int64_t lo, hi;  // half-open
};

bool crossing(const Interval& a, const Interval& b) {
    return (a.lo < b.lo && b.lo < a.hi && a.hi < b.hi) ||
           (b.lo < a.lo && a.lo < b.hi && b.hi < a.hi);
}

std::vector<Interval> interval_set(const TypedFactorization& tf) {
    std::vector<Interval> out;
    for (int k = 1; k <= tf.factor_count(); ++k) {
        const Factor& f = tf.factor(k);
        if (f.type == FactorType::LengthOne) continue;
        Interval ref{tf.factor_begin(f.ref_begin), tf.factor_end(f.ref_end)};
        out.push_back(ref);                                        // I1, I2 or I4
        if (f.type == FactorType::B) out.push_back({ref.lo, tf.factor_end(k)});  // I3
    }
    return out;
}

bool refs_acyclic(const TypedFactorization& tf) {
    TypedFactorization copy = tf;
    return assign_reference_depths(copy);
}

std::string slice(const std::string& text, int64_t lo, int64_t hi) {
    return text.substr(static_cast<size_t>(lo - 1), static_cast<size_t>(hi - lo));
}

}  // namespace

CheckResult check_factorization(const std::string& text, const TypedFactorization& tf) {
    CheckResult res;
    auto fail = [&](std::string msg) {
        res.ok = false;
        res.violations.push_back(std::move(msg));
    };

    int64_t n = static_cast<int64_t>(text.size());
    int h = tf.factor_count();
    if (static_cast<int>(tf.bounds.size()) != h + 1 || h == 0 || tf.bounds.front() != 1 ||
        tf.bounds.back() != n + 1 ||
        std::adjacent_find(tf.bounds.begin(), tf.bounds.end(),
                           [](int64_t a, int64_t b) { return a >= b; }) != tf.bounds.end()) {
        fail("factor boundaries are not a strictly increasing cover of [1..n+1)");
        return res;
    }

    // condition (i)
    for (int k = 1; k <= h; ++k) {
        const Factor& f = tf.factor(k);
        int64_t len = tf.factor_length(k);
        std::string fk = slice(text, tf.factor_begin(k), tf.factor_end(k));
        if (f.type == FactorType::LengthOne) {
            if (len != 1) fail("factor " + std::to_string(k) + " longer than 1 has no type");
            continue;
        }
        if (len == 1) {
            fail("factor " + std::to_string(k) + " of length 1 must be untyped");
            continue;
        }
        if (f.ref_begin < 1 || f.ref_end > h || f.ref_begin > f.ref_end) {
            fail("factor " + std::to_string(k) + " has an ill-formed reference range");
            continue;
        }
        std::string ref = slice(text, tf.factor_begin(f.ref_begin), tf.factor_end(f.ref_end));
        switch (f.type) {
            case FactorType::A:
                if (!(f.ref_end < k))
                    fail("type-A factor " + std::to_string(k) + " must refer strictly left");
                else if (fk != ref)
                    fail("type-A factor " + std::to_string(k) + " differs from its referred range");
                break;
            case FactorType::B: {
                if (f.ref_end != k - 1) {
                    fail("type-B factor " + std::to_string(k) + " must refer up to factor k-1");
                    break;
                }
                if (f.repeat < 3) {
                    fail("type-B factor " + std::to_string(k) + " needs repeat count >= 3");
                    break;
                }
                std::string expected;
                for (int64_t i = 0; i < f.repeat - 1; ++i) expected += ref;
                if (fk != expected)
                    fail("type-B factor " + std::to_string(k) +
                         " is not the (r-1)-fold repeat of its referred range");
                break;
            }
            case FactorType::C:
                if (!(k < f.ref_begin || k > f.ref_end))
                    fail("type-C factor " + std::to_string(k) +
                         " must lie outside its referred factor range");
                else if (ref.find(fk) == std::string::npos)
                    fail("type-C factor " + std::to_string(k) +
                         " is not a substring of its referred range");
                break;
            default:
                break;
        }
        // A referred range coinciding with a single type-B factor is the rest
        // part of a repetition, which is a leaf, never an internal node; no
        // system realizes such a reference at the counted size.
        if (f.ref_begin == f.ref_end && f.ref_begin >= 1 && f.ref_begin <= h &&
            tf.factor(f.ref_begin).type == FactorType::B)
            fail("factor " + std::to_string(k) +
                 " refers to the rest part of a repetition (factor " +
                 std::to_string(f.ref_begin) + ")");
    }

    // condition (ii): I crossing-free
    auto ivs = interval_set(tf);
    for (size_t a = 0; a < ivs.size(); ++a)
        for (size_t b = a + 1; b < ivs.size(); ++b)
            if (crossing(ivs[a], ivs[b])) {
                fail("intervals [" + std::to_string(ivs[a].lo) + ".." + std::to_string(ivs[a].hi) +
                     ") and [" + std::to_string(ivs[b].lo) + ".." + std::to_string(ivs[b].hi) +
                     ") cross");
            }

    // condition (iii): depths exist
    if (res.ok && !refs_acyclic(tf)) fail("factor reference relation is cyclic");
    return res;
}

namespace {

struct Search {
    const std::string& text;
    int sigma;
    int best = INT_MAX;
    TypedFactorization best_tf;

    void run_mask(const std::vector<int64_t>& bounds) {
        int h = static_cast<int>(bounds.size()) - 1;
        if (h + sigma - 1 >= best) return;
        TypedFactorization tf;
        tf.bounds = bounds;
        tf.factors.resize(static_cast<size_t>(h));

        // candidate type/reference options per factor
        std::vector<std::vector<Factor>> options(static_cast<size_t>(h));
        for (int k = 1; k <= h; ++k) {
            int64_t len = tf.factor_length(k);
            auto& opts = options[static_cast<size_t>(k - 1)];
            if (len == 1) {
                opts.push_back(Factor{});
                continue;
            }
            std::string fk = text.substr(static_cast<size_t>(tf.factor_begin(k) - 1),
                                         static_cast<size_t>(len));
            for (int i = 1; i <= h; ++i) {
                for (int j = i; j <= h; ++j) {
                    int64_t rlo = tf.factor_begin(i), rhi = tf.factor_end(j);
                    std::string ref = text.substr(static_cast<size_t>(rlo - 1),
                                                  static_cast<size_t>(rhi - rlo));
                    if (j < k && ref == fk)
                        opts.push_back(Factor{FactorType::A, i, j, 0, 0});
                    if (j == k - 1 && !ref.empty() && len % static_cast<int64_t>(ref.size()) == 0) {
                        int64_t rm1 = len / static_cast<int64_t>(ref.size());
                        if (rm1 >= 2) {
                            std::string rep;
                            for (int64_t t = 0; t < rm1; ++t) rep += ref;
                            if (rep == fk)
                                opts.push_back(Factor{FactorType::B, i, j, rm1 + 1, 0});
                        }
                    }
                    if ((k < i || k > j) && ref.find(fk) != std::string::npos)
                        opts.push_back(Factor{FactorType::C, i, j, 0, 0});
                }
            }
            if (opts.empty()) return;  // this factorization admits no typing
        }
        assign(tf, options, 1, h + sigma - 1);
    }

    void assign(TypedFactorization& tf, const std::vector<std::vector<Factor>>& options, int k,
                int cost) {
        if (cost >= best) return;  // branch and bound on h + m_tr + sigma - 1
        if (k > tf.factor_count()) {
            CheckResult chk = check_factorization(text, tf);
            if (!chk.ok) return;
            TypedFactorization withdepths = tf;
            if (!assign_reference_depths(withdepths)) return;
            best = cost;
            best_tf = withdepths;
            return;
        }
        for (const Factor& opt : options[static_cast<size_t>(k - 1)]) {
            tf.factor(k) = opt;
            assign(tf, options, k + 1, cost + (opt.type == FactorType::C ? 1 : 0));
        }
    }
};

}  // namespace

OracleResult brute_force_chat(const std::string& text, int max_m) {
    if (text.empty()) throw Error("empty text");
    int64_t n = static_cast<int64_t>(text.size());
    std::set<char> chars(text.begin(), text.end());

    Search search{text, static_cast<int>(chars.size())};
    for (uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
        std::vector<int64_t> bounds{1};
        for (int64_t i = 2; i <= n; ++i)
            if (mask & (1ull << (i - 2))) bounds.push_back(i);
        bounds.push_back(n + 1);
        search.run_mask(bounds);
    }
    if (search.best == INT_MAX) throw Error("no valid factorization found");
    if (max_m >= 0 && search.best > max_m)
        throw BoundExceeded("smallest internal collage system has size " +
                            std::to_string(search.best) + " > bound " + std::to_string(max_m));
    OracleResult out;
    out.size = search.best;
    out.witness = search.best_tf;
    return out;
}

}  // namespace collage
