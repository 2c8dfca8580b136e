#ifndef COLLAGE_ORACLE_HPP
#define COLLAGE_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "collage/factorization.hpp"
#include "collage/system.hpp"

namespace collage {

struct CheckResult {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Direct semantic check of the three validity conditions for a typed
/// ICS-factorization of T:
///   (i)  per-type shape of each factor longer than 1,
///   (ii) the interval set I = I1 u I2 u I3 u I4 is crossing-free,
///   (iii) the factor reference relation is acyclic (length-1 factors are
///         sources), i.e. reference depths exist.
/// Independent of the CNF machinery by design of the test architecture.
CheckResult check_factorization(const std::string& text, const TypedFactorization& tf);

class BoundExceeded : public Error {
public:
    using Error::Error;
};

struct OracleResult {
    int size = 0;  // h + m_tr + sigma - 1
    TypedFactorization witness;
};

/// Exhaustive search for the smallest internal collage system size for T:
/// enumerates all factorizations and per-factor type/reference assignments,
/// keeps the valid ones, and minimizes h + m_tr + sigma - 1 with
/// branch-and-bound. Exponential; intended for |T| <= ~8.
OracleResult brute_force_chat(const std::string& text, int max_m = -1);

}  // namespace collage

#endif
