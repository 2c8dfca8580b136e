#include "collage/decode.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "collage/expand.hpp"
#include "collage/grammar_tree.hpp"
#include "collage/oracle.hpp"

namespace collage {

Assignment parse_model(const std::string& bytes, const VariableCatalog& cat) {
    std::vector<std::string> tokens;
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || (line[0] != 'v' && line[0] != 'V')) continue;
        std::istringstream ls(line.substr(1));
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.empty()) throw DecodeError("no value lines in solver output");

    bool binary = true;
    size_t total_len = 0;
    for (const std::string& t : tokens) {
        total_len += t.size();
        for (char c : t)
            if (c != '0' && c != '1') binary = false;
    }
    // "v 0 1 1 ..." style could parse either way; the binary reading needs one
    // digit per variable, which disambiguates it from a legacy literal list
    binary = binary && total_len >= static_cast<size_t>(cat.var_count) &&
             std::any_of(tokens.begin(), tokens.end(),
                         [](const std::string& t) { return t.size() > 1; });

    Assignment a;
    a.val.assign(static_cast<size_t>(cat.var_count) + 1, -1);
    auto set = [&](int var, bool value) {
        if (var < 1) throw DecodeError("bad variable id in model");
        if (var > cat.var_count) return;  // counter auxiliary, ignored
        int8_t& slot = a.val[static_cast<size_t>(var)];
        if (slot != -1 && slot != static_cast<int8_t>(value))
            throw DecodeError("contradictory duplicate literal for variable " +
                              std::to_string(var));
        slot = value ? 1 : 0;
    };

    if (binary) {
        int var = 0;
        for (const std::string& t : tokens)
            for (char c : t) set(++var, c == '1');
    } else {
        for (const std::string& t : tokens) {
            long lit = 0;
            try {
                lit = std::stol(t);
            } catch (const std::exception&) {
                throw DecodeError("bad token in model: " + t);
            }
            if (lit == 0) continue;  // legacy terminator
            set(static_cast<int>(std::abs(lit)), lit > 0);
        }
    }
    for (int v = 1; v <= cat.var_count; ++v)
        if (a.val[static_cast<size_t>(v)] == -1)
            throw DecodeError("model does not assign variable " + std::to_string(v) + " (" +
                              cat.names[static_cast<size_t>(v)] + ")");
    return a;
}

namespace {

// Semantic re-evaluation of every hard constraint family; independent of the
// counter auxiliaries, so it works directly on the catalog assignment.
void recheck_hard(const Assignment& a, const VariableCatalog& c) {
    int n = c.n;
    auto fam = [](int k) { return "hard constraint family (" + std::to_string(k) + ") violated"; };

    if (!a.truth(c.p_var(1)) || !a.truth(c.p_var(n + 1)))
        throw HardClauseViolated("hard unit p_1 or p_{n+1} violated");

    std::map<std::pair<int, int>, std::vector<int>> cands;
    for (const auto& [k, v] : c.refA) cands[{std::get<1>(k), std::get<2>(k)}].push_back(v);
    for (const auto& [k, v] : c.refB) cands[{std::get<1>(k), std::get<2>(k)}].push_back(v);
    for (const auto& [k, v] : c.refC) cands[{std::get<2>(k), std::get<3>(k)}].push_back(v);

    for (const auto& [il, fv] : c.f) {
        auto [i, l] = il;
        bool pattern = a.truth(c.p_var(i)) && a.truth(c.p_var(i + l));
        for (int j = 1; j < l && pattern; ++j) pattern = !a.truth(c.p_var(i + j));
        if (a.truth(fv) != pattern) throw HardClauseViolated(fam(1));
        if (l > 1 && !cands.count(il) && a.truth(fv)) throw HardClauseViolated(fam(2));
    }
    for (const auto& [il, lits] : cands) {
        bool any = false;
        int true_count = 0;
        for (int v : lits) {
            any = any || a.truth(v);
            true_count += a.truth(v);
        }
        if (a.truth(c.f.at(il)) != any) throw HardClauseViolated(fam(3));
        if (true_count > 1) throw HardClauseViolated(fam(4));
    }
    {
        // (4b) no reference targets exactly a type-B factor's interval
        std::set<std::pair<int, int>> b_factors;
        for (const auto& [k, v] : c.refB)
            if (a.truth(v)) b_factors.insert({std::get<1>(k), std::get<2>(k)});
        auto refs_b = [&](int ip, int lp) { return b_factors.count({ip, lp}) != 0; };
        for (const auto& [k, v] : c.refA)
            if (a.truth(v) && refs_b(std::get<0>(k), std::get<2>(k)))
                throw HardClauseViolated("hard constraint family (4b) violated");
        for (const auto& [k, v] : c.refB)
            if (a.truth(v) && refs_b(std::get<0>(k), std::get<1>(k) - std::get<0>(k)))
                throw HardClauseViolated("hard constraint family (4b) violated");
        for (const auto& [k, v] : c.refC)
            if (a.truth(v) && refs_b(std::get<0>(k), std::get<1>(k)))
                throw HardClauseViolated("hard constraint family (4b) violated");
    }
    for (const auto& [k, dv] : c.dref) {
        auto [ip, lp, i] = k;
        bool any = false;
        if (auto it = c.refA.find({ip, i, lp}); it != c.refA.end()) any = any || a.truth(it->second);
        for (const auto& [bk, bv] : c.refB)
            if (std::get<0>(bk) == ip && std::get<1>(bk) == i && i - ip == lp)
                any = any || a.truth(bv);
        for (const auto& [ck, cv] : c.refC)
            if (std::get<0>(ck) == ip && std::get<1>(ck) == lp && std::get<2>(ck) == i)
                any = any || a.truth(cv);
        if (a.truth(dv) != any) throw HardClauseViolated(fam(5));
    }
    for (const auto& [k, qv] : c.q) {
        auto [ip, lp] = k;
        bool any = false;
        for (const auto& [dk, dv] : c.dref)
            if (std::get<0>(dk) == ip && std::get<1>(dk) == lp) any = any || a.truth(dv);
        for (const auto& [bk, bv] : c.refB)
            if (std::get<0>(bk) == ip && std::get<2>(bk) + std::get<1>(bk) - std::get<0>(bk) == lp)
                any = any || a.truth(bv);
        if (a.truth(qv) != any) throw HardClauseViolated(fam(6));
        if (a.truth(qv) && (!a.truth(c.p_var(ip)) || !a.truth(c.p_var(ip + lp))))
            throw HardClauseViolated(fam(7));
    }
    for (auto x = c.q.begin(); x != c.q.end(); ++x)
        for (auto y = std::next(x); y != c.q.end(); ++y) {
            auto [i1, l1] = x->first;
            auto [i2, l2] = y->first;
            bool cross = (i1 < i2 && i2 < i1 + l1 && i1 + l1 < i2 + l2) ||
                         (i2 < i1 && i1 < i2 + l2 && i2 + l2 < i1 + l1);
            if (cross && a.truth(x->second) && a.truth(y->second))
                throw HardClauseViolated(fam(8));
        }
    for (int i = 1; i <= n; ++i) {
        if (!a.truth(c.depth.at({i, 1, 0})) || a.truth(c.depth.at({i, 1, n})))
            throw HardClauseViolated(fam(9));
        for (int d = 1; d <= n; ++d)
            if (a.truth(c.depth.at({i, 1, d})) && !a.truth(c.depth.at({i, 1, d - 1})))
                throw HardClauseViolated(fam(10));
    }
    for (int i = 2; i <= n; ++i)
        if (!a.truth(c.p_var(i)))
            for (int d = 0; d <= n; ++d)
                if (a.truth(c.depth.at({i, 1, d})) != a.truth(c.depth.at({i - 1, 1, d})))
                    throw HardClauseViolated(fam(11));
    for (int i = 1; i <= n; ++i)
        for (int l = 2; l <= n + 1 - i; ++l)
            for (int d = 0; d <= n; ++d) {
                bool any = false;
                for (int j = i; j < i + l; ++j) any = any || a.truth(c.depth.at({j, 1, d}));
                if (a.truth(c.depth.at({i, l, d})) != any) throw HardClauseViolated(fam(12));
            }
    for (const auto& [k, dv] : c.dref) {
        auto [ip, lp, i] = k;
        if (!a.truth(dv)) continue;
        for (int d = 1; d <= n; ++d)
            if (!a.truth(c.depth.at({i, 1, d})) && a.truth(c.depth.at({ip, lp, d - 1})))
                throw HardClauseViolated(fam(13));
    }
}

}  // namespace

TypedFactorization extract_factorization(const Assignment& a, const VariableCatalog& c) {
    recheck_hard(a, c);
    int n = c.n;

    TypedFactorization tf;
    tf.bounds.push_back(1);
    for (int i = 2; i <= n + 1; ++i)
        if (a.truth(c.p_var(i))) tf.bounds.push_back(i);
    int h = static_cast<int>(tf.bounds.size()) - 1;
    tf.factors.resize(static_cast<size_t>(h));

    std::map<int64_t, int> start_to_factor;  // boundary position -> factor index
    for (int k = 1; k <= h; ++k) start_to_factor[tf.factor_begin(k)] = k;
    auto ref_range = [&](int lo, int hi, int k) {  // text interval -> factor range
        auto b = start_to_factor.find(lo);
        auto e = start_to_factor.find(hi);
        if (b == start_to_factor.end() ||
            (e == start_to_factor.end() && hi != tf.bounds.back()))
            throw DecodeError("reference of factor " + std::to_string(k) +
                              " is not aligned to factor boundaries");
        int last = e == start_to_factor.end() ? h : e->second - 1;
        return std::pair<int, int>(b->second, last);
    };

    for (int k = 1; k <= h; ++k) {
        Factor& f = tf.factor(k);
        int i = static_cast<int>(tf.factor_begin(k));
        int len = static_cast<int>(tf.factor_length(k));
        if (len == 1) {
            f.type = FactorType::LengthOne;
            continue;
        }
        int found = 0;
        for (const auto& [key, v] : c.refA) {
            auto [ip, fi, fl] = key;
            if (fi == i && fl == len && a.truth(v)) {
                auto [rb, re] = ref_range(ip, ip + len, k);
                f = Factor{FactorType::A, rb, re, 0, 0};
                ++found;
            }
        }
        for (const auto& [key, v] : c.refB) {
            auto [ip, fi, fl] = key;
            if (fi == i && fl == len && a.truth(v)) {
                auto [rb, re] = ref_range(ip, i, k);
                f = Factor{FactorType::B, rb, re, static_cast<int64_t>(len / (i - ip)) + 1, 0};
                ++found;
            }
        }
        for (const auto& [key, v] : c.refC) {
            auto [ip, lp, fi, fl] = key;
            if (fi == i && fl == len && a.truth(v)) {
                auto [rb, re] = ref_range(ip, ip + lp, k);
                f = Factor{FactorType::C, rb, re, 0, 0};
                ++found;
            }
        }
        if (found != 1)
            throw DecodeError("factor at position " + std::to_string(i) + " has " +
                              std::to_string(found) + " true reference variables");
    }

    for (int k = 1; k <= h; ++k) {
        int i = static_cast<int>(tf.factor_begin(k));
        int64_t d = 0;
        while (d < c.n && a.truth(c.depth.at({i, 1, static_cast<int>(d) + 1}))) ++d;
        tf.factor(k).depth = d;
    }
    return tf;
}

namespace {

struct IntervalNode {
    int64_t lo, hi;
    int parent = -1;
    // children in left-to-right order: (position, node index or -1, factor index or 0)
    struct Item {
        int64_t pos;
        int node;    // -1 if this item is a factor leaf
        int factor;  // 0 if this item is a sub-node
    };
    std::vector<Item> items;
};

class Reconstructor {
public:
    Reconstructor(const TypedFactorization& tf, const std::string& text)
        : tf_(tf), text_(text), n_(static_cast<int64_t>(text.size())) {}

    CollageSystem run() {
        CheckResult chk = check_factorization(text_, tf_);
        if (!chk.ok)
            throw DecodeError("factorization failed validity check: " + chk.violations.front());

        build_forest();
        node_state_.assign(nodes_.size(), 0);
        node_nt_.assign(nodes_.size(), 0);
        factor_trunc_nt_.assign(tf_.factors.size() + 1, 0);
        int start = node_nt(root_);
        return renumber(start);
    }

private:
    void build_forest() {
        std::set<std::pair<int64_t, int64_t>> ivs;
        for (int k = 1; k <= tf_.factor_count(); ++k) {
            const Factor& f = tf_.factor(k);
            if (f.type == FactorType::LengthOne) continue;
            ivs.insert({tf_.factor_begin(f.ref_begin), tf_.factor_end(f.ref_end)});
            if (f.type == FactorType::B)
                ivs.insert({tf_.factor_begin(f.ref_begin), tf_.factor_end(k)});
        }
        ivs.insert({1, n_ + 1});

        // preorder: by start ascending, longer first; laminar by condition (ii)
        std::vector<std::pair<int64_t, int64_t>> sorted(ivs.begin(), ivs.end());
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first < b.first : a.second > b.second;
        });
        for (const auto& [lo, hi] : sorted) nodes_.push_back({lo, hi});
        root_ = 0;
        std::vector<int> stack;
        for (size_t i = 0; i < nodes_.size(); ++i) {
            while (!stack.empty() && nodes_[static_cast<size_t>(stack.back())].hi < nodes_[i].hi)
                stack.pop_back();
            if (!stack.empty()) {
                nodes_[i].parent = stack.back();
                nodes_[static_cast<size_t>(stack.back())].items.push_back(
                    {nodes_[i].lo, static_cast<int>(i), 0});
            }
            stack.push_back(static_cast<int>(i));
        }
        // attach each factor to the deepest interval containing it
        for (int k = 1; k <= tf_.factor_count(); ++k) {
            int64_t lo = tf_.factor_begin(k), hi = tf_.factor_end(k);
            int best = -1;
            for (size_t i = 0; i < nodes_.size(); ++i) {
                if (nodes_[i].lo <= lo && hi <= nodes_[i].hi &&
                    (best < 0 ||
                     nodes_[i].hi - nodes_[i].lo <
                         nodes_[static_cast<size_t>(best)].hi - nodes_[static_cast<size_t>(best)].lo))
                    best = static_cast<int>(i);
            }
            nodes_[static_cast<size_t>(best)].items.push_back({lo, -1, k});
        }
        for (auto& node : nodes_)
            std::sort(node.items.begin(), node.items.end(),
                      [](const auto& a, const auto& b) { return a.pos < b.pos; });
    }

    int node_of(int64_t lo, int64_t hi) const {
        for (size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].lo == lo && nodes_[i].hi == hi) return static_cast<int>(i);
        throw DecodeError("referred interval is not a node of I");
    }

    int atomic_nt(char ch) {
        auto it = atom_nt_.find(ch);
        if (it != atom_nt_.end()) return it->second;
        int id = add(Rule::atomic(ch));
        atom_nt_[ch] = id;
        return id;
    }

    int add(Rule r) {
        rules_.push_back(std::move(r));
        return static_cast<int>(rules_.size());
    }

    // nonterminal deriving factor k's string; never called for type B
    int factor_nt(int k) {
        const Factor& f = tf_.factor(k);
        if (tf_.factor_length(k) == 1)
            return atomic_nt(text_[static_cast<size_t>(tf_.factor_begin(k) - 1)]);
        switch (f.type) {
            case FactorType::A:
                return node_nt(node_of(tf_.factor_begin(f.ref_begin), tf_.factor_end(f.ref_end)));
            case FactorType::C: {
                int& memo = factor_trunc_nt_[static_cast<size_t>(k)];
                if (memo) return memo;
                int ref = node_nt(node_of(tf_.factor_begin(f.ref_begin), tf_.factor_end(f.ref_end)));
                // truncate at the leftmost occurrence within the referred range
                std::string range =
                    text_.substr(static_cast<size_t>(tf_.factor_begin(f.ref_begin) - 1),
                                 static_cast<size_t>(tf_.factor_end(f.ref_end) -
                                                     tf_.factor_begin(f.ref_begin)));
                std::string fk = text_.substr(static_cast<size_t>(tf_.factor_begin(k) - 1),
                                              static_cast<size_t>(tf_.factor_length(k)));
                auto pos = range.find(fk);
                BigInt b(static_cast<long>(pos) + 1);
                memo = add(Rule::truncation(ref, b, BigInt(b + static_cast<long>(fk.size()))));
                return memo;
            }
            default:
                throw DecodeError("type-B factor outside its repetition node");
        }
    }

    int node_nt(int idx) {
        auto i = static_cast<size_t>(idx);
        if (node_state_[i] == 2) return node_nt_[i];
        if (node_state_[i] == 1) throw DecodeError("cyclic structure among interval nodes");
        node_state_[i] = 1;
        const IntervalNode& node = nodes_[i];

        int nt = 0;
        if (node.items.size() == 2 && node.items[1].node == -1 &&
            tf_.factor(node.items[1].factor).type == FactorType::B && node.items[0].node >= 0) {
            // repetition node: left operand node plus its type-B rest leaf
            int k = node.items[1].factor;
            const Factor& f = tf_.factor(k);
            int left = node.items[0].node;
            if (nodes_[static_cast<size_t>(left)].lo == tf_.factor_begin(f.ref_begin) &&
                nodes_[static_cast<size_t>(left)].hi == tf_.factor_end(f.ref_end) &&
                node.lo == tf_.factor_begin(f.ref_begin) && node.hi == tf_.factor_end(k)) {
                nt = add(Rule::repetition(node_nt(left), BigInt(static_cast<long>(f.repeat))));
            }
        }
        if (nt == 0 && node.items.size() == 1 && node.items[0].node == -1) {
            int k = node.items[0].factor;
            if (tf_.factor(k).type == FactorType::B) {
                // a node coinciding with a type-B factor: r-1 repeats of the base
                const Factor& f = tf_.factor(k);
                int base = node_nt(node_of(tf_.factor_begin(f.ref_begin), tf_.factor_end(f.ref_end)));
                nt = f.repeat - 1 == 2 ? add(Rule::concat(base, base))
                                       : add(Rule::repetition(base, BigInt(static_cast<long>(f.repeat - 1))));
            } else {
                nt = factor_nt(k);  // alias, no new rule
            }
        }
        if (nt == 0) {
            if (node.items.size() < 2) throw DecodeError("interval node with no content");
            std::vector<int> ids;
            for (const auto& item : node.items)
                ids.push_back(item.node >= 0 ? node_nt(item.node) : factor_nt(item.factor));
            int acc = ids[0];
            for (size_t j = 1; j < ids.size(); ++j) acc = add(Rule::concat(acc, ids[j]));
            nt = acc;
        }
        node_state_[i] = 2;
        node_nt_[i] = nt;
        return nt;
    }

    CollageSystem renumber(int start) {
        std::vector<int> newid(rules_.size() + 1, 0);
        CollageSystem out;
        size_t emitted = 0;
        bool progress = true;
        while (emitted < rules_.size() && progress) {
            progress = false;
            for (size_t id = 1; id <= rules_.size(); ++id) {
                if (newid[id]) continue;
                const Rule& r = rules_[id - 1];
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
                newid[id] = static_cast<int>(out.rules.size());
                ++emitted;
                progress = true;
            }
        }
        if (emitted < rules_.size()) throw DecodeError("cyclic rule references in reconstruction");
        out.start = newid[static_cast<size_t>(start)];
        return out;
    }

    const TypedFactorization& tf_;
    const std::string& text_;
    int64_t n_;
    std::vector<IntervalNode> nodes_;
    int root_ = 0;
    std::vector<Rule> rules_;
    std::map<char, int> atom_nt_;
    std::vector<int8_t> node_state_;
    std::vector<int> node_nt_;
    std::vector<int> factor_trunc_nt_;
};

}  // namespace

CollageSystem reconstruct(const TypedFactorization& tf, const std::string& text) {
    CollageSystem g = Reconstructor(tf, text).run();

    std::set<char> chars(text.begin(), text.end());
    int expected = tf.factor_count() + tf.truncation_count() + static_cast<int>(chars.size()) - 1;
    if (g.size() != expected)
        throw DecodeError("reconstructed size " + std::to_string(g.size()) +
                          " differs from h + m_tr + sigma - 1 = " + std::to_string(expected));
    if (!is_internal(g)) throw DecodeError("reconstructed system is not internal");
    if (expand(g, text.size()) != text)
        throw DecodeError("reconstructed system does not derive the text");
    if (!validate(g).ok()) throw DecodeError("reconstructed system fails validation");
    return g;
}

CertifiedResult certified_size(const std::string& model, const VariableCatalog& cat) {
    Assignment a = parse_model(model, cat);
    CertifiedResult res;
    res.tf = extract_factorization(a, cat);
    res.system = reconstruct(res.tf, cat.text);
    res.size = res.system.size();
    return res;
}

}  // namespace collage
