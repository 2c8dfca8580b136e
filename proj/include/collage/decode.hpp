#ifndef COLLAGE_DECODE_HPP
#define COLLAGE_DECODE_HPP

#include <string>
#include <vector>

#include "collage/encode.hpp"
#include "collage/factorization.hpp"
#include "collage/system.hpp"

namespace collage {

class HardClauseViolated : public DecodeError {
public:
    using DecodeError::DecodeError;
};

/// Total truth assignment over the catalog variables.
struct Assignment {
    std::vector<int8_t> val;  // 1-based; -1 unset

    bool truth(int var) const { return val[static_cast<size_t>(var)] == 1; }
};

/// Parses solver output: legacy `v <lit>... 0` lines or a new-format binary
/// value string. Counter auxiliaries beyond the catalog are ignored. Throws
/// DecodeError on a missing catalog variable or contradictory duplicates.
Assignment parse_model(const std::string& bytes, const VariableCatalog& cat);

/// Reads the factorization out of a model: boundaries from p, the type and
/// reference of each multi-character factor from its unique true reference
/// variable, depths from the character depth thresholds. All hard constraint
/// families are re-checked semantically first (the solver is not trusted);
/// HardClauseViolated names the first failing family.
TypedFactorization extract_factorization(const Assignment& a, const VariableCatalog& cat);

/// Builds an internal collage system realizing the factorization, of size
/// exactly h + m_tr + sigma - 1: interval nodes from the laminar forest of I,
/// missing internal nodes filled with left-leaning concatenation chains.
CollageSystem reconstruct(const TypedFactorization& tf, const std::string& text);

struct CertifiedResult {
    int size = 0;
    CollageSystem system;
    TypedFactorization tf;
};

/// Full pipeline: parse, extract, re-check, reconstruct. The returned size is
/// the certificate for the smallest internal collage system when the solver
/// reported optimality.
CertifiedResult certified_size(const std::string& model, const VariableCatalog& cat);

}  // namespace collage

#endif
