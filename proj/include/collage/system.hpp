#ifndef COLLAGE_SYSTEM_HPP
#define COLLAGE_SYSTEM_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace collage {

using BigInt = mpz_class;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& msg)
        : Error("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

class LimitExceeded : public Error {
public:
    LimitExceeded(const std::string& msg, BigInt length)
        : Error(msg), length(std::move(length)) {}
    BigInt length;
};

class NotInternal : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

enum class RuleKind { Atomic, Concat, Repeat, Truncate };

/// A production rule. Nonterminals are 1-based ids into CollageSystem::rules.
///   Atomic   X -> 'a'         (atom)
///   Concat   X -> Y Z         (left, right)
///   Repeat   X -> Y ^ r       (left, repeat), r >= 3
///   Truncate X -> Y [b..e)    (left, begin, end), 1 <= b < e <= |[[Y]]| + 1
struct Rule {
    RuleKind kind = RuleKind::Atomic;
    char atom = 0;
    int left = 0;
    int right = 0;
    BigInt repeat;
    BigInt begin;
    BigInt end;

    static Rule atomic(char a) {
        Rule r;
        r.kind = RuleKind::Atomic;
        r.atom = a;
        return r;
    }
    static Rule concat(int y, int z) {
        Rule r;
        r.kind = RuleKind::Concat;
        r.left = y;
        r.right = z;
        return r;
    }
    static Rule repetition(int y, BigInt count) {
        Rule r;
        r.kind = RuleKind::Repeat;
        r.left = y;
        r.repeat = std::move(count);
        return r;
    }
    static Rule truncation(int y, BigInt b, BigInt e) {
        Rule r;
        r.kind = RuleKind::Truncate;
        r.left = y;
        r.begin = std::move(b);
        r.end = std::move(e);
        return r;
    }

    bool operator==(const Rule& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case RuleKind::Atomic: return atom == o.atom;
            case RuleKind::Concat: return left == o.left && right == o.right;
            case RuleKind::Repeat: return left == o.left && repeat == o.repeat;
            case RuleKind::Truncate:
                return left == o.left && begin == o.begin && end == o.end;
        }
        return false;
    }
};

/// A collage system: ordered rules (id i is rules[i-1]) plus a start symbol.
/// Every rule may refer only to strictly smaller ids.
struct CollageSystem {
    std::vector<Rule> rules;
    int start = 0;

    int size() const { return static_cast<int>(rules.size()); }
    const Rule& rule(int id) const { return rules[static_cast<size_t>(id - 1)]; }
    Rule& rule(int id) { return rules[static_cast<size_t>(id - 1)]; }

    bool operator==(const CollageSystem& o) const {
        return start == o.start && rules == o.rules;
    }
};

struct SystemStats {
    int m = 0;
    int m_tr = 0;
    int sigma = 0;  // number of atomic rules
    int grammar_tree_internal_nodes = 0;
    int grammar_tree_leaves = 0;
    bool internal = false;
};

}  // namespace collage

#endif
