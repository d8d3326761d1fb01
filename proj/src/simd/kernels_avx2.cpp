#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace heis::simd::detail {
namespace {

void knorm_avx2(int n, const double* pts, std::size_t stride, std::size_t count, double* out) {
    const int zd = 2 * n;
    const std::size_t body = count & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < body; i += 4) {
        __m256d s = _mm256_setzero_pd();
        for (int c = 0; c < zd; ++c) {
            const __m256d v = _mm256_loadu_pd(pts + c * stride + i);
            s = _mm256_add_pd(s, _mm256_mul_pd(v, v));
        }
        const __m256d t = _mm256_loadu_pd(pts + zd * stride + i);
        const __m256d q = _mm256_add_pd(_mm256_mul_pd(s, s), _mm256_mul_pd(t, t));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_sqrt_pd(q)));
    }
    if (i < count) scalar_kernels().knorm(n, pts + i, stride, count - i, out + i);
}

void left_mul_avx2(int n, const double* x, const double* pts, std::size_t stride, std::size_t count,
                   double sign, double* out, std::size_t out_stride) {
    const int zd = 2 * n;
    const __m256d sg = _mm256_set1_pd(sign);
    const __m256d half = _mm256_set1_pd(0.5);
    const std::size_t body = count & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < body; i += 4) {
        __m256d sym = _mm256_setzero_pd();
        for (int j = 0; j < n; ++j) {
            const __m256d bx = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + j * stride + i));
            const __m256d by = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + (n + j) * stride + i));
            const __m256d term = _mm256_sub_pd(_mm256_mul_pd(_mm256_set1_pd(x[n + j]), bx),
                                               _mm256_mul_pd(_mm256_set1_pd(x[j]), by));
            sym = _mm256_add_pd(sym, term);
        }
        for (int c = 0; c < zd; ++c) {
            const __m256d b = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + c * stride + i));
            _mm256_storeu_pd(out + c * out_stride + i, _mm256_add_pd(_mm256_set1_pd(x[c]), b));
        }
        const __m256d bt = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + zd * stride + i));
        const __m256d tt = _mm256_add_pd(_mm256_add_pd(_mm256_set1_pd(x[zd]), bt), _mm256_mul_pd(half, sym));
        _mm256_storeu_pd(out + zd * out_stride + i, tt);
    }
    if (i < count) scalar_kernels().left_mul(n, x, pts + i, stride, count - i, sign, out + i, out_stride);
}

void right_mul_avx2(int n, const double* pts, std::size_t stride, std::size_t count, double sign,
                    const double* x, double* out, std::size_t out_stride) {
    const int zd = 2 * n;
    const __m256d sg = _mm256_set1_pd(sign);
    const __m256d half = _mm256_set1_pd(0.5);
    const std::size_t body = count & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < body; i += 4) {
        __m256d sym = _mm256_setzero_pd();
        for (int j = 0; j < n; ++j) {
            const __m256d ax = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + j * stride + i));
            const __m256d ay = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + (n + j) * stride + i));
            const __m256d term = _mm256_sub_pd(_mm256_mul_pd(ay, _mm256_set1_pd(x[j])),
                                               _mm256_mul_pd(ax, _mm256_set1_pd(x[n + j])));
            sym = _mm256_add_pd(sym, term);
        }
        for (int c = 0; c < zd; ++c) {
            const __m256d a = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + c * stride + i));
            _mm256_storeu_pd(out + c * out_stride + i, _mm256_add_pd(a, _mm256_set1_pd(x[c])));
        }
        const __m256d at = _mm256_mul_pd(sg, _mm256_loadu_pd(pts + zd * stride + i));
        const __m256d tt = _mm256_add_pd(_mm256_add_pd(at, _mm256_set1_pd(x[zd])), _mm256_mul_pd(half, sym));
        _mm256_storeu_pd(out + zd * out_stride + i, tt);
    }
    if (i < count) scalar_kernels().right_mul(n, pts + i, stride, count - i, sign, x, out + i, out_stride);
}

inline __m256d overlap_len_v(__m256d side, __m256d twice, __m256d zero) {
    const __m256d lo = _mm256_max_pd(zero, _mm256_sub_pd(twice, side));
    const __m256d hi = _mm256_min_pd(side, twice);
    return _mm256_max_pd(_mm256_sub_pd(hi, lo), zero);
}

double box_overlap_sum_avx2(int n, const double* weight, const double* side, std::size_t count,
                            const double* x) {
    const int zd = 2 * n;
    __m256d twice[2 * 8 + 1];
    double twice_s[2 * 8 + 1];
    for (int c = 0; c <= zd; ++c) {
        twice_s[c] = 2.0 * x[c];
        twice[c] = _mm256_set1_pd(twice_s[c]);
    }
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    const std::size_t body = count & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < body; i += 4) {
        const __m256d r = _mm256_loadu_pd(side + i);
        __m256d prod = overlap_len_v(r, twice[0], zero);
        for (int c = 1; c < zd; ++c) prod = _mm256_mul_pd(prod, overlap_len_v(r, twice[c], zero));
        prod = _mm256_mul_pd(prod, overlap_len_v(_mm256_mul_pd(r, r), twice[zd], zero));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(weight + i), prod));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (; i < count; ++i) {
        const double r = side[i];
        double prod = overlap_len(r, twice_s[0]);
        for (int c = 1; c < zd; ++c) prod *= overlap_len(r, twice_s[c]);
        prod *= overlap_len(r * r, twice_s[zd]);
        lanes[i & 3] += weight[i] * prod;
    }
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{knorm_avx2, left_mul_avx2, right_mul_avx2, box_overlap_sum_avx2};
    return k;
}

}  // namespace heis::simd::detail
