#include "collage/internalize.hpp"

#include <algorithm>

namespace collage {

namespace {

// Mutable working copy. Ids are stable handles; topological numbering is
// restored only at the end, since rewrites insert rules out of id order.
class Workspace {
public:
    explicit Workspace(const CollageSystem& g) : rules_(g.rules), start_(g.start) {
        alive_.assign(rules_.size(), true);
        lengths_.resize(rules_.size());
        for (size_t i = 0; i < rules_.size(); ++i) lengths_[i] = compute_length(rules_[i]);
    }

    int start() const { return start_; }
    int count() const { return static_cast<int>(rules_.size()); }
    bool alive(int id) const { return alive_[static_cast<size_t>(id - 1)]; }
    const Rule& rule(int id) const { return rules_[static_cast<size_t>(id - 1)]; }
    const BigInt& length(int id) const { return lengths_[static_cast<size_t>(id - 1)]; }

    int add(Rule r) {
        lengths_.push_back(compute_length(r));
        rules_.push_back(std::move(r));
        alive_.push_back(true);
        return count();
    }

    // rewrites must preserve the derived string, so lengths stay valid
    void rewrite(int id, Rule r) { rules_[static_cast<size_t>(id - 1)] = std::move(r); }

    void kill(int id) { alive_[static_cast<size_t>(id - 1)] = false; }

    std::vector<bool> reachable() const {
        std::vector<bool> reach(rules_.size() + 1, false);
        std::vector<int> stack{start_};
        reach[static_cast<size_t>(start_)] = true;
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            const Rule& r = rule(id);
            if (r.kind == RuleKind::Atomic || r.kind == RuleKind::Truncate) continue;
            int refs[2] = {r.left, r.kind == RuleKind::Concat ? r.right : r.left};
            for (int ref : refs) {
                if (!reach[static_cast<size_t>(ref)]) {
                    reach[static_cast<size_t>(ref)] = true;
                    stack.push_back(ref);
                }
            }
        }
        return reach;
    }

    std::vector<int> referers(int x) const {
        std::vector<int> out;
        for (int id = 1; id <= count(); ++id) {
            if (!alive(id) || id == x) continue;
            const Rule& r = rule(id);
            if (r.kind == RuleKind::Atomic) continue;
            if (r.left == x || (r.kind == RuleKind::Concat && r.right == x)) out.push_back(id);
        }
        return out;
    }

    // kill everything not in the full reference closure from start
    void prune_useless() {
        std::vector<bool> used(rules_.size() + 1, false);
        std::vector<int> stack{start_};
        used[static_cast<size_t>(start_)] = true;
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            const Rule& r = rule(id);
            if (r.kind == RuleKind::Atomic) continue;
            int refs[2] = {r.left, r.kind == RuleKind::Concat ? r.right : r.left};
            for (int ref : refs) {
                if (!used[static_cast<size_t>(ref)]) {
                    used[static_cast<size_t>(ref)] = true;
                    stack.push_back(ref);
                }
            }
        }
        for (int id = 1; id <= count(); ++id)
            if (!used[static_cast<size_t>(id)]) alive_[static_cast<size_t>(id - 1)] = false;
    }

    CollageSystem to_system() const {
        // deterministic topological renumbering of the alive rules
        std::vector<int> newid(rules_.size() + 1, 0);
        CollageSystem out;
        bool progress = true;
        size_t emitted = 0;
        size_t alive_total = 0;
        for (bool a : alive_) alive_total += a;
        while (emitted < alive_total && progress) {
            progress = false;
            for (int id = 1; id <= count(); ++id) {
                if (!alive(id) || newid[static_cast<size_t>(id)]) continue;
                const Rule& r = rule(id);
                bool ready = r.kind == RuleKind::Atomic ||
                             (newid[static_cast<size_t>(r.left)] &&
                              (r.kind != RuleKind::Concat || newid[static_cast<size_t>(r.right)]));
                if (!ready) continue;
                Rule nr = r;
                if (nr.kind != RuleKind::Atomic) {
                    nr.left = newid[static_cast<size_t>(nr.left)];
                    if (nr.kind == RuleKind::Concat) nr.right = newid[static_cast<size_t>(nr.right)];
                }
                out.rules.push_back(std::move(nr));
                newid[static_cast<size_t>(id)] = static_cast<int>(out.rules.size());
                ++emitted;
                progress = true;
            }
        }
        if (emitted < alive_total) throw Error("reference cycle in working system");
        out.start = newid[static_cast<size_t>(start_)];
        return out;
    }

private:
    BigInt compute_length(const Rule& r) const {
        switch (r.kind) {
            case RuleKind::Atomic: return 1;
            case RuleKind::Concat: return length(r.left) + length(r.right);
            case RuleKind::Repeat: return length(r.left) * r.repeat;
            case RuleKind::Truncate: return r.end - r.begin;
        }
        return 0;
    }

    std::vector<Rule> rules_;
    std::vector<bool> alive_;
    std::vector<BigInt> lengths_;
    int start_;
};

class Internalizer {
public:
    explicit Internalizer(const CollageSystem& g) : w_(g) {}

    InternalizeResult run() {
        w_.prune_useless();
        for (;;) {
            auto reach = w_.reachable();
            size_t sz = static_cast<size_t>(w_.count()) + 1;
            std::vector<bool> referenced(sz, false), blocked(sz, false);
            for (int q = 1; q <= w_.count(); ++q) {
                if (!w_.alive(q)) continue;
                const Rule& r = w_.rule(q);
                if (r.kind == RuleKind::Atomic) continue;
                int refs[2] = {r.left, r.kind == RuleKind::Concat ? r.right : r.left};
                for (int t : refs) {
                    referenced[static_cast<size_t>(t)] = true;
                    if (!reach[static_cast<size_t>(q)]) blocked[static_cast<size_t>(t)] = true;
                }
            }
            // drop orphans: unreachable rules nothing refers to anymore
            bool orphan = false;
            for (int id = 1; id <= w_.count(); ++id) {
                if (w_.alive(id) && !reach[static_cast<size_t>(id)] &&
                    !referenced[static_cast<size_t>(id)]) {
                    w_.kill(id);
                    orphan = true;
                }
            }
            if (orphan) continue;

            // an unreachable nonterminal all of whose referers are reachable;
            // its referers are then necessarily truncation rules
            int x = 0;
            for (int id = w_.count(); id >= 1; --id) {
                if (w_.alive(id) && !reach[static_cast<size_t>(id)] &&
                    !blocked[static_cast<size_t>(id)]) {
                    x = id;
                    break;
                }
            }
            if (x == 0) break;
            process(x);
        }
        w_.prune_useless();
        InternalizeResult res;
        res.system = w_.to_system();
        res.steps = steps_;
        return res;
    }

private:

    struct Crossing {
        int q;
        BigInt b, e;
    };

    void process(int x) {
        const Rule rx = w_.rule(x);
        std::vector<int> qs = w_.referers(x);
        std::vector<Crossing> batch;  // Case 3 set A, processed at once

        for (int q : qs) {
            const Rule rq = w_.rule(q);
            if (rq.kind != RuleKind::Truncate || rq.left != x)
                throw Error("unreachable nonterminal referred by a non-truncation rule");
            BigInt b = rq.begin, e = rq.end;
            ++steps_;
            if (b == 1 && e == w_.length(x) + 1) {
                w_.rewrite(q, rx);  // full copy adopts the rule body
                continue;
            }
            switch (rx.kind) {
                case RuleKind::Atomic:  // Case 0
                    w_.rewrite(q, Rule::atomic(rx.atom));
                    break;
                case RuleKind::Truncate:  // Case 1
                    retarget(q, rx.left, b + rx.begin - 1, e + rx.begin - 1);
                    break;
                case RuleKind::Concat: {
                    const BigInt& ly = w_.length(rx.left);
                    if (e - 1 <= ly)
                        retarget(q, rx.left, b, e);  // Case 1, left operand
                    else if (b > ly)
                        retarget(q, rx.right, b - ly, e - ly);  // Case 1, right operand
                    else
                        batch.push_back({q, b, e});  // Case 3
                    break;
                }
                case RuleKind::Repeat: {
                    const BigInt& unit = w_.length(rx.left);
                    BigInt c1 = (b - 1) / unit + 1;
                    BigInt c2 = (e - 2) / unit + 1;
                    if (c1 == c2) {
                        BigInt base = (c1 - 1) * unit;
                        retarget(q, rx.left, b - base, e - base);  // Case 1
                    } else if (c2 == c1 + 1) {
                        // crossing one copy boundary: shift into the first two
                        // copies and treat X as the concatenation Y * Y^{r-1}
                        BigInt base = (c1 - 1) * unit;
                        batch.push_back({q, b - base, e - base});
                    } else {
                        case2(q, rx.left, unit, b, e, c1, c2);
                    }
                    break;
                }
            }
        }
        if (!batch.empty()) {
            if (rx.kind == RuleKind::Concat)
                case3(batch, rx.left, rx.right, w_.length(rx.left), w_.length(rx.right));
            else
                case3(batch, rx.left, rx.left, w_.length(rx.left), w_.length(rx.left));
        }
    }

    // Q -> N[b..e), collapsing full copies into the rule body
    void retarget(int q, int n, BigInt b, BigInt e) {
        if (b == 1 && e == w_.length(n) + 1)
            w_.rewrite(q, w_.rule(n));
        else
            w_.rewrite(q, Rule::truncation(n, std::move(b), std::move(e)));
    }

    // a truncation of Y^r spanning more than two copies: u v w with u a suffix
    // of Y, v = Y^{r'}, w a prefix of Y; at most four rules added net
    // lengths and bounds are taken by value: w_.add below reallocates the
    // workspace length table, which would dangle any reference into it
    void case2(int q, int y, BigInt unit, BigInt b, BigInt e, BigInt c1, BigInt c2) {
        BigInt off_b = b - (c1 - 1) * unit;  // in [1..unit]
        BigInt off_e = e - (c2 - 1) * unit;  // in [2..unit+1]
        BigInt full_first = off_b == 1 ? c1 : c1 + 1;
        BigInt full_last = off_e == unit + 1 ? c2 : c2 - 1;
        BigInt reps = full_last - full_first + 1;  // >= 1 since c2 >= c1 + 2

        std::vector<int> pieces;
        if (off_b > 1) pieces.push_back(w_.add(Rule::truncation(y, off_b, unit + 1)));
        if (reps == 1)
            pieces.push_back(y);
        else if (reps == 2)
            pieces.push_back(w_.add(Rule::concat(y, y)));
        else if (off_b > 1 || off_e <= unit)
            pieces.push_back(w_.add(Rule::repetition(y, reps)));
        if (off_e <= unit) pieces.push_back(w_.add(Rule::truncation(y, BigInt(1), off_e)));

        if (pieces.empty()) {
            // whole interval is full copies: Q itself becomes the repetition
            w_.rewrite(q, Rule::repetition(y, reps));
        } else if (pieces.size() == 1) {
            w_.rewrite(q, w_.rule(pieces[0]));
        } else if (pieces.size() == 2) {
            w_.rewrite(q, Rule::concat(pieces[0], pieces[1]));
        } else {
            int mid = w_.add(Rule::concat(pieces[0], pieces[1]));
            w_.rewrite(q, Rule::concat(mid, pieces[2]));
        }
    }

    // truncations crossing the boundary of X -> Y Z, handled as one batch: a
    // longest shared suffix S of Y and prefix P of Z, each member becoming a
    // concatenation of truncations of S and P
    void case3(const std::vector<Crossing>& batch, int y, int z, BigInt ly, BigInt lz) {
        BigInt s = 0, p = 0;
        for (const Crossing& c : batch) {
            s = std::max(s, BigInt(ly - c.b + 1));
            p = std::max(p, BigInt(c.e - 1 - ly));
        }
        int s_id = s == ly ? y : w_.add(Rule::truncation(y, ly - s + 1, ly + 1));
        int p_id = p == lz ? z : w_.add(Rule::truncation(z, BigInt(1), p + 1));
        for (const Crossing& c : batch) {
            BigInt sb = ly - c.b + 1;
            BigInt pb = c.e - 1 - ly;
            int left = sb == s ? s_id : w_.add(Rule::truncation(s_id, s - sb + 1, s + 1));
            int right = pb == p ? p_id : w_.add(Rule::truncation(p_id, BigInt(1), pb + 1));
            w_.rewrite(c.q, Rule::concat(left, right));
        }
    }

    Workspace w_;
    uint64_t steps_ = 0;
};

}  // namespace

InternalizeResult internalize(const CollageSystem& g) { return Internalizer(g).run(); }

}  // namespace collage
