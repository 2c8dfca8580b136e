#include "collage/grammar_tree.hpp"

#include "collage/expand.hpp"

namespace collage {

int GrammarTree::internal_count() const {
    int c = 0;
    for (const auto& n : nodes) c += n.internal;
    return c;
}

int GrammarTree::leaf_count() const { return static_cast<int>(nodes.size()) - internal_count(); }

std::vector<int> GrammarTree::leaves_in_order() const {
    std::vector<int> out;
    std::vector<int> stack{root};
    // iterative preorder; children pushed right-to-left
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const GrammarNode& n = nodes[static_cast<size_t>(id)];
        if (n.children.empty()) {
            out.push_back(id);
        } else {
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
                stack.push_back(*it);
        }
    }
    return out;
}

namespace {

struct TreeBuilder {
    const CollageSystem& g;
    const std::vector<BigInt>& len;
    GrammarTree& tree;
    std::vector<bool> seen;

    int build(int x, const BigInt& begin) {
        int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        {
            GrammarNode& node = tree.nodes.back();
            node.label = GrammarNode::Label::Nonterminal;
            node.nt = x;
            node.begin = begin;
            node.end = begin + len[static_cast<size_t>(x)];
        }
        if (seen[static_cast<size_t>(x)]) return id;  // non-leftmost occurrence: leaf
        seen[static_cast<size_t>(x)] = true;
        tree.nodes[static_cast<size_t>(id)].internal = true;

        const Rule& r = g.rule(x);
        switch (r.kind) {
            case RuleKind::Atomic: {
                int c = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                GrammarNode& leaf = tree.nodes.back();
                leaf.label = GrammarNode::Label::Terminal;
                leaf.ch = r.atom;
                leaf.begin = begin;
                leaf.end = begin + 1;
                tree.nodes[static_cast<size_t>(id)].children.push_back(c);
                break;
            }
            case RuleKind::Concat: {
                int l = build(r.left, begin);
                int rr = build(r.right, begin + len[static_cast<size_t>(r.left)]);
                tree.nodes[static_cast<size_t>(id)].children = {l, rr};
                break;
            }
            case RuleKind::Repeat: {
                int l = build(r.left, begin);
                int c = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                GrammarNode& leaf = tree.nodes.back();
                leaf.label = GrammarNode::Label::RepeatRest;
                leaf.nt = r.left;
                leaf.rep = r.repeat - 1;
                leaf.begin = begin + len[static_cast<size_t>(r.left)];
                leaf.end = begin + len[static_cast<size_t>(x)];
                tree.nodes[static_cast<size_t>(id)].children = {l, c};
                break;
            }
            case RuleKind::Truncate: {
                int c = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                GrammarNode& leaf = tree.nodes.back();
                leaf.label = GrammarNode::Label::TruncSlice;
                leaf.nt = r.left;
                leaf.b = r.begin;
                leaf.e = r.end;
                leaf.begin = begin;
                leaf.end = begin + (r.end - r.begin);
                tree.nodes[static_cast<size_t>(id)].children.push_back(c);
                break;
            }
        }
        return id;
    }
};

}  // namespace

GrammarTree grammar_tree(const CollageSystem& g) {
    GrammarTree tree;
    auto len = expansion_lengths(g);
    TreeBuilder builder{g, len, tree, std::vector<bool>(static_cast<size_t>(g.size()) + 1)};
    tree.root = builder.build(g.start, BigInt(1));
    return tree;
}

bool is_internal(const CollageSystem& g) {
    // closure from start: concat -> both operands, repeat -> base, truncate -> nothing
    std::vector<bool> reached(static_cast<size_t>(g.size()) + 1, false);
    std::vector<int> stack{g.start};
    reached[static_cast<size_t>(g.start)] = true;
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const Rule& r = g.rule(id);
        if (r.kind == RuleKind::Atomic || r.kind == RuleKind::Truncate) continue;
        for (int ref : {r.left, r.kind == RuleKind::Concat ? r.right : r.left}) {
            if (!reached[static_cast<size_t>(ref)]) {
                reached[static_cast<size_t>(ref)] = true;
                stack.push_back(ref);
            }
        }
    }
    for (int id = 1; id <= g.size(); ++id)
        if (!reached[static_cast<size_t>(id)]) return false;
    return true;
}

SystemStats stats(const CollageSystem& g) {
    SystemStats s;
    s.m = g.size();
    for (const Rule& r : g.rules) {
        s.m_tr += r.kind == RuleKind::Truncate;
        s.sigma += r.kind == RuleKind::Atomic;
    }
    GrammarTree tree = grammar_tree(g);
    s.grammar_tree_internal_nodes = tree.internal_count();
    s.grammar_tree_leaves = tree.leaf_count();
    s.internal = is_internal(g);
    if (s.internal) {
        if (s.grammar_tree_internal_nodes != s.m ||
            s.grammar_tree_leaves != s.m - s.m_tr - s.sigma + 1)
            throw Error("grammar tree counts contradict the internal-system identity");
    }
    return s;
}

TypedFactorization ics_factorization(const CollageSystem& g, uint64_t limit) {
    if (!is_internal(g)) throw NotInternal("system is not internal");
    BigInt n = expansion_length(g, g.start);
    if (n > limit) throw LimitExceeded("text length " + n.get_str() + " exceeds limit", n);

    GrammarTree tree = grammar_tree(g);
    std::vector<int> leaves = tree.leaves_in_order();
    int h = static_cast<int>(leaves.size());

    // factor index (1-based) of each leaf node, then leaf ranges per node
    std::vector<int> leaf_factor(tree.nodes.size(), 0);
    for (int k = 1; k <= h; ++k) leaf_factor[static_cast<size_t>(leaves[static_cast<size_t>(k - 1)])] = k;
    std::vector<std::pair<int, int>> range(tree.nodes.size(), {0, 0});
    // nodes are created in preorder, so children have larger ids; sweep backwards
    for (int id = static_cast<int>(tree.nodes.size()) - 1; id >= 0; --id) {
        const GrammarNode& node = tree.nodes[static_cast<size_t>(id)];
        if (node.children.empty()) {
            int k = leaf_factor[static_cast<size_t>(id)];
            range[static_cast<size_t>(id)] = {k, k};
        } else {
            range[static_cast<size_t>(id)] = {range[static_cast<size_t>(node.children.front())].first,
                                              range[static_cast<size_t>(node.children.back())].second};
        }
    }
    // leaf range of each nonterminal's (unique) internal node
    std::vector<std::pair<int, int>> nt_range(static_cast<size_t>(g.size()) + 1, {0, 0});
    std::vector<int> nt_left_child(static_cast<size_t>(g.size()) + 1, -1);
    for (size_t id = 0; id < tree.nodes.size(); ++id) {
        const GrammarNode& node = tree.nodes[id];
        if (node.internal) {
            nt_range[static_cast<size_t>(node.nt)] = range[id];
            if (!node.children.empty()) nt_left_child[static_cast<size_t>(node.nt)] = node.children.front();
        }
    }

    TypedFactorization tf;
    tf.bounds.resize(static_cast<size_t>(h) + 1);
    tf.factors.resize(static_cast<size_t>(h));
    tf.bounds[0] = 1;
    for (int k = 1; k <= h; ++k) {
        const GrammarNode& leaf = tree.nodes[static_cast<size_t>(leaves[static_cast<size_t>(k - 1)])];
        tf.bounds[static_cast<size_t>(k)] = BigInt(leaf.end).get_si();
        Factor& f = tf.factor(k);
        int64_t flen = tf.factor_length(k);
        if (flen == 1) {
            f.type = FactorType::LengthOne;
            continue;
        }
        switch (leaf.label) {
            case GrammarNode::Label::Nonterminal: {
                f.type = FactorType::A;
                auto r = nt_range[static_cast<size_t>(leaf.nt)];
                f.ref_begin = r.first;
                f.ref_end = r.second;
                break;
            }
            case GrammarNode::Label::RepeatRest: {
                f.type = FactorType::B;
                // leaves under the left child of the repetition node
                int parent_nt = 0;
                for (size_t id = 0; id < tree.nodes.size(); ++id) {
                    const GrammarNode& node = tree.nodes[id];
                    if (node.internal && node.children.size() == 2 &&
                        node.children[1] == leaves[static_cast<size_t>(k - 1)]) {
                        parent_nt = node.nt;
                        break;
                    }
                }
                auto r = range[static_cast<size_t>(nt_left_child[static_cast<size_t>(parent_nt)])];
                f.ref_begin = r.first;
                f.ref_end = r.second;
                f.repeat = static_cast<int64_t>(BigInt(leaf.rep).get_si()) + 1;
                break;
            }
            case GrammarNode::Label::TruncSlice: {
                f.type = FactorType::C;
                auto r = nt_range[static_cast<size_t>(leaf.nt)];
                f.ref_begin = r.first;
                f.ref_end = r.second;
                break;
            }
            case GrammarNode::Label::Terminal:
                break;  // length 1, unreachable here
        }
    }

    if (!assign_reference_depths(tf)) throw Error("reference cycle among factors");
    return tf;
}

}  // namespace collage
