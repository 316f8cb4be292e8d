#pragma once

#include <cstddef>
#include <span>

namespace uf {

// Fixed-order pairwise summation. The association tree depends only on the
// length of the input, so results do not depend on thread count.
inline double pairwise_sum(std::span<const double> x) {
    constexpr std::size_t kLeaf = 8;
    if (x.size() <= kLeaf) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace uf
