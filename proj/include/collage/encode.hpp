#ifndef COLLAGE_ENCODE_HPP
#define COLLAGE_ENCODE_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "collage/system.hpp"

namespace collage {

/// Bijection between the encoding's Boolean variables and solver variable
/// ids. Subscripts are 1-based text positions; all domain predicates
/// (substring equality, divisibility, disjointness, containment) are
/// evaluated exactly when the catalog is built.
struct VariableCatalog {
    std::string text;
    int n = 0;
    int var_count = 0;

    std::vector<int> p;                            // p_i, i in [1..n+1]
    std::map<std::pair<int, int>, int> f;          // f_{i,l}
    std::map<std::tuple<int, int, int>, int> refA;  // refA_{i',i,l}
    std::map<std::tuple<int, int, int>, int> refB;  // refB_{i',i,l}
    std::map<std::tuple<int, int, int, int>, int> refC;  // refC_{i',l',i,l}
    std::map<std::tuple<int, int, int>, int> dref;  // dref_{i',l',i}
    std::map<std::pair<int, int>, int> q;           // q_{i',l'}
    std::map<std::tuple<int, int, int>, int> depth;  // depth_{i,l,d}

    // names[id] for catalog variables, e.g. "refA(1,3,2)"; 1-based, names[0] unused
    std::vector<std::string> names;

    int p_var(int i) const { return p[static_cast<size_t>(i - 1)]; }
};

VariableCatalog build_catalog(const std::string& text);

struct Clause {
    std::vector<int> lits;  // DIMACS convention: negative literal = negation
};

struct MaxSatInstance {
    int var_count = 0;  // catalog variables plus at-most-one counter auxiliaries
    std::vector<Clause> hard;
    std::vector<Clause> soft;  // unit weight 1 each
    VariableCatalog catalog;
    std::vector<std::string> aux_names;  // names of vars catalog.var_count+1..var_count
};

/// Builds the full MAX-SAT instance for T: the thirteen hard constraint
/// families plus the soft objective (negated factor starts and negated
/// truncation references), in a fixed deterministic order.
MaxSatInstance encode(const std::string& text);

enum class WcnfFormat { Legacy, New };

/// Deterministic WCNF serialization. Legacy uses a `p wcnf` header with
/// top = #soft + 1; New uses `h`-prefixed hard lines (MaxSAT Evaluation 2022
/// style). A comment block maps variable ids to their catalog names.
std::string write_wcnf(const MaxSatInstance& inst, WcnfFormat format);

/// Line-oriented catalog sidecar so a later invocation can decode a model.
std::string write_catalog_sidecar(const VariableCatalog& cat);

/// Rebuilds the catalog for `text` and verifies it agrees with the sidecar.
VariableCatalog read_catalog_sidecar(const std::string& bytes, const std::string& text);

}  // namespace collage

#endif
