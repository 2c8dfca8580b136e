#ifndef COLLAGE_GRAMMAR_TREE_HPP
#define COLLAGE_GRAMMAR_TREE_HPP

#include <vector>

#include "collage/factorization.hpp"
#include "collage/system.hpp"

namespace collage {

/// Node of the grammar tree: the binary parse tree with all descendants of
/// non-leftmost label occurrences removed. Each nonterminal labels at most one
/// internal node, so the node count is O(m).
struct GrammarNode {
    enum class Label {
        Nonterminal,  // nt; internal iff this is the leftmost occurrence
        Terminal,     // ch; child of an atomic rule's node
        RepeatRest,   // nt^rep: right child of a repetition node, always a leaf
        TruncSlice,   // nt[b..e): child of a truncation node, always a leaf
    };
    Label label = Label::Nonterminal;
    int nt = 0;
    char ch = 0;
    BigInt rep;
    BigInt b, e;
    bool internal = false;
    std::vector<int> children;
    // derived half-open interval of T, 1-based
    BigInt begin, end;
};

struct GrammarTree {
    std::vector<GrammarNode> nodes;
    int root = 0;

    int internal_count() const;
    int leaf_count() const;
    std::vector<int> leaves_in_order() const;
};

GrammarTree grammar_tree(const CollageSystem& g);

/// True iff every nonterminal is reachable from the start symbol without
/// passing through a truncation rule (equivalently, labels a grammar tree
/// node).
bool is_internal(const CollageSystem& g);

SystemStats stats(const CollageSystem& g);

/// Extracts the typed ICS-factorization of an internal system: factors are the
/// grammar tree's leaf strings left to right, typed A/B/C by leaf label, with
/// reference factor ranges and reference depths. Throws NotInternal otherwise.
TypedFactorization ics_factorization(const CollageSystem& g, uint64_t limit = 1u << 20);

}  // namespace collage

#endif
