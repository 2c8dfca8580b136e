#include "collage/factorization.hpp"

namespace collage {

namespace {

bool depth_rec(TypedFactorization& tf, std::vector<int>& state, int k) {
    auto idx = static_cast<size_t>(k - 1);
    if (state[idx] == 2) return true;
    if (state[idx] == 1) return false;  // cycle
    state[idx] = 1;
    Factor& f = tf.factor(k);
    int64_t d = 0;
    if (f.type != FactorType::LengthOne) {
        for (int j = f.ref_begin; j <= f.ref_end; ++j) {
            if (!depth_rec(tf, state, j)) return false;
            d = std::max(d, tf.factor(j).depth + 1);
        }
    }
    f.depth = d;
    state[idx] = 2;
    return true;
}

}  // namespace

bool assign_reference_depths(TypedFactorization& tf) {
    std::vector<int> state(tf.factors.size(), 0);
    for (int k = 1; k <= tf.factor_count(); ++k)
        if (!depth_rec(tf, state, k)) return false;
    return true;
}

}  // namespace collage
