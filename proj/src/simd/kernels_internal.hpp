#pragma once

#include "heis/simd.hpp"

namespace heis::simd::detail {

const Kernels& scalar_kernels();
#if defined(HEIS_WITH_AVX2)
const Kernels& avx2_kernels();
#endif

inline double overlap_len(double side, double twice) {
    double lo = twice - side;
    if (lo < 0.0) lo = 0.0;
    double hi = side < twice ? side : twice;
    double len = hi - lo;
    return len > 0.0 ? len : 0.0;
}

}  // namespace heis::simd::detail
