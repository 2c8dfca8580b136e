#include "collage/expand.hpp"

namespace collage {

std::vector<BigInt> expansion_lengths(const CollageSystem& g) {
    std::vector<BigInt> len(static_cast<size_t>(g.size()) + 1);
    for (int id = 1; id <= g.size(); ++id) {
        const Rule& r = g.rule(id);
        switch (r.kind) {
            case RuleKind::Atomic:
                len[id] = 1;
                break;
            case RuleKind::Concat:
                len[id] = len[r.left] + len[r.right];
                break;
            case RuleKind::Repeat:
                len[id] = len[r.left] * r.repeat;
                break;
            case RuleKind::Truncate:
                len[id] = r.end - r.begin;
                break;
        }
    }
    return len;
}

BigInt expansion_length(const CollageSystem& g, int x) {
    return expansion_lengths(g)[static_cast<size_t>(x)];
}

namespace {

void expand_rec(const CollageSystem& g, const std::vector<BigInt>& len, int x, const BigInt& lo,
                const BigInt& hi, std::string& out) {
    if (lo >= hi) return;
    const Rule& r = g.rule(x);
    switch (r.kind) {
        case RuleKind::Atomic:
            out.push_back(r.atom);
            return;
        case RuleKind::Concat: {
            const BigInt& nl = len[r.left];
            if (lo <= nl) expand_rec(g, len, r.left, lo, std::min(hi, BigInt(nl + 1)), out);
            if (hi > nl + 1)
                expand_rec(g, len, r.right, std::max(BigInt(1), BigInt(lo - nl)), hi - nl, out);
            return;
        }
        case RuleKind::Repeat: {
            const BigInt& unit = len[r.left];
            // copies are 1-based; copy c covers [(c-1)*unit+1 .. c*unit]
            BigInt first = (lo - 1) / unit + 1;
            BigInt last = (hi - 2) / unit + 1;
            for (BigInt c = first; c <= last; ++c) {
                BigInt base = (c - 1) * unit;
                BigInt l = std::max(BigInt(1), BigInt(lo - base));
                BigInt h = std::min(BigInt(unit + 1), BigInt(hi - base));
                expand_rec(g, len, r.left, l, h, out);
            }
            return;
        }
        case RuleKind::Truncate:
            expand_rec(g, len, r.left, lo + r.begin - 1, hi + r.begin - 1, out);
            return;
    }
}

}  // namespace

std::string expand_interval(const CollageSystem& g, int x, const BigInt& lo, const BigInt& hi) {
    auto len = expansion_lengths(g);
    std::string out;
    out.reserve(BigInt(hi - lo).get_ui());
    expand_rec(g, len, x, lo, hi, out);
    return out;
}

std::string expand(const CollageSystem& g, int x, uint64_t limit) {
    auto len = expansion_lengths(g);
    const BigInt& n = len[static_cast<size_t>(x)];
    if (n > limit) throw LimitExceeded("expansion length " + n.get_str() + " exceeds limit", n);
    std::string out;
    out.reserve(n.get_ui());
    expand_rec(g, len, x, BigInt(1), BigInt(n + 1), out);
    return out;
}

std::string expand(const CollageSystem& g, uint64_t limit) { return expand(g, g.start, limit); }

ValidationReport validate(const CollageSystem& g) {
    ValidationReport rep;
    int m = g.size();
    auto bad = [&](int id, std::string msg) { rep.violations.push_back({id, std::move(msg)}); };

    if (g.start < 1 || g.start > m) {
        bad(0, "start symbol X" + std::to_string(g.start) + " is out of range");
        return rep;
    }

    std::vector<bool> ordered(static_cast<size_t>(m) + 1, true);
    for (int id = 1; id <= m; ++id) {
        const Rule& r = g.rule(id);
        if (r.kind == RuleKind::Atomic) continue;
        bool ok = r.left >= 1 && r.left < id;
        if (r.kind == RuleKind::Concat) ok = ok && r.right >= 1 && r.right < id;
        if (!ok) {
            ordered[id] = false;
            bad(id, "rule must refer only to strictly smaller nonterminals");
        }
        if (r.kind == RuleKind::Repeat && r.repeat < 3)
            bad(id, "repeat count must be at least 3 (use a concatenation for squares)");
    }
    // lengths are only meaningful when the reference order holds everywhere
    bool all_ordered = true;
    for (int id = 1; id <= m; ++id) all_ordered = all_ordered && ordered[id];
    if (all_ordered) {
        auto len = expansion_lengths(g);
        for (int id = 1; id <= m; ++id) {
            const Rule& r = g.rule(id);
            if (r.kind != RuleKind::Truncate) continue;
            const BigInt& ref_len = len[r.left];
            if (!(r.begin >= 1 && r.begin < r.end && r.end <= ref_len + 1))
                bad(id, "truncation bounds [" + r.begin.get_str() + ".." + r.end.get_str() +
                            ") violate 1 <= b < e <= " + BigInt(ref_len + 1).get_str());
        }
        // useless nonterminals: closure from start over all references
        std::vector<bool> used(static_cast<size_t>(m) + 1, false);
        std::vector<int> stack{g.start};
        used[g.start] = true;
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            const Rule& r = g.rule(id);
            if (r.kind == RuleKind::Atomic) continue;
            for (int ref : {r.left, r.kind == RuleKind::Concat ? r.right : 0}) {
                if (ref >= 1 && !used[ref]) {
                    used[ref] = true;
                    stack.push_back(ref);
                }
            }
        }
        for (int id = 1; id <= m; ++id)
            if (!used[id]) bad(id, "useless nonterminal: not involved in expanding the start");
    }
    return rep;
}

}  // namespace collage
