#ifndef COLLAGE_FACTORIZATION_HPP
#define COLLAGE_FACTORIZATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace collage {

enum class FactorType { LengthOne, A, B, C };

/// One factor of an ICS-factorization. References are factor indices
/// (1-based): the factor refers to the range F_{ref_begin} .. F_{ref_end}.
///   A: copy of T[s_{ref_begin}..s_{ref_end+1}), ref_begin <= ref_end < k
///   B: (T[s_{ref_begin}..s_{ref_end+1}))^{repeat-1}, ref_end = k-1, repeat >= 3
///   C: substring of T[s_{ref_begin}..s_{ref_end+1}), k < ref_begin or k > ref_end
struct Factor {
    FactorType type = FactorType::LengthOne;
    int ref_begin = 0;
    int ref_end = 0;
    int64_t repeat = 0;  // type B only: the r of X -> Y^r
    int64_t depth = 0;   // reference depth D_k
};

struct TypedFactorization {
    std::vector<int64_t> bounds;  // s_1..s_{h+1}; s_1 = 1, s_{h+1} = n+1
    std::vector<Factor> factors;  // h entries

    int factor_count() const { return static_cast<int>(factors.size()); }
    int64_t factor_begin(int k) const { return bounds[static_cast<size_t>(k - 1)]; }
    int64_t factor_end(int k) const { return bounds[static_cast<size_t>(k)]; }
    int64_t factor_length(int k) const { return factor_end(k) - factor_begin(k); }
    const Factor& factor(int k) const { return factors[static_cast<size_t>(k - 1)]; }
    Factor& factor(int k) { return factors[static_cast<size_t>(k - 1)]; }

    int truncation_count() const {
        int c = 0;
        for (const Factor& f : factors) c += f.type == FactorType::C;
        return c;
    }
};

/// Fills the depth fields from the reference relation (length-1 factors get 0,
/// every other factor one more than the maximum over its referred range).
/// Returns false when the relation is cyclic, in which case no valid depth
/// assignment exists.
bool assign_reference_depths(TypedFactorization& tf);

}  // namespace collage

#endif
