#ifndef COLLAGE_EXPAND_HPP
#define COLLAGE_EXPAND_HPP

#include <vector>

#include "collage/system.hpp"

namespace collage {

/// Exact lengths |[[X]]| for all nonterminals, bottom-up. Lengths can be
/// exponential in the number of rules, hence arbitrary precision.
std::vector<BigInt> expansion_lengths(const CollageSystem& g);

BigInt expansion_length(const CollageSystem& g, int x);

/// [[x]][lo..hi) without materializing intermediate expansions; positions are
/// 1-based and half-open. Requires hi - lo to be small enough for a string.
std::string expand_interval(const CollageSystem& g, int x, const BigInt& lo, const BigInt& hi);

/// Full expansion of x. Throws LimitExceeded (carrying the exact length) when
/// |[[x]]| > limit. Truncations are navigated by interval, so this works even
/// when referents are astronomically long.
std::string expand(const CollageSystem& g, int x, uint64_t limit);

/// Expansion of the start symbol.
std::string expand(const CollageSystem& g, uint64_t limit);

struct Violation {
    int id;  // offending nonterminal, 0 for system-level issues
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks every CollageSystem invariant: reference ordering, repeat counts,
/// truncation bounds against exact expansion lengths, start validity, and
/// useless nonterminals. Violations are report entries, never exceptions.
ValidationReport validate(const CollageSystem& g);

}  // namespace collage

#endif
