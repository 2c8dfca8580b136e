#ifndef COLLAGE_INTERNALIZE_HPP
#define COLLAGE_INTERNALIZE_HPP

#include "collage/system.hpp"

namespace collage {

struct InternalizeResult {
    CollageSystem system;
    uint64_t steps = 0;  // case-dispatch actions; O(m^2) overall
};

/// Converts any valid collage system into an internal one deriving the same
/// string, with size at most 9x the input size. Useless nonterminals in the
/// input are pruned. The output passes validate() cleanly.
InternalizeResult internalize(const CollageSystem& g);

}  // namespace collage

#endif
