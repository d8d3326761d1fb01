#include <cmath>

#include "kernels_internal.hpp"

namespace heis::simd::detail {
namespace {

void knorm_scalar(int n, const double* pts, std::size_t stride, std::size_t count, double* out) {
    const int zd = 2 * n;
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (int c = 0; c < zd; ++c) {
            const double v = pts[c * stride + i];
            s += v * v;
        }
        const double t = pts[zd * stride + i];
        out[i] = std::sqrt(std::sqrt(s * s + t * t));
    }
}

void left_mul_scalar(int n, const double* x, const double* pts, std::size_t stride, std::size_t count,
                     double sign, double* out, std::size_t out_stride) {
    const int zd = 2 * n;
    for (std::size_t i = 0; i < count; ++i) {
        double sym = 0.0;
        for (int j = 0; j < n; ++j) {
            const double bx = sign * pts[j * stride + i];
            const double by = sign * pts[(n + j) * stride + i];
            sym += x[n + j] * bx - x[j] * by;
        }
        for (int c = 0; c < zd; ++c) out[c * out_stride + i] = x[c] + sign * pts[c * stride + i];
        out[zd * out_stride + i] = x[zd] + sign * pts[zd * stride + i] + 0.5 * sym;
    }
}

void right_mul_scalar(int n, const double* pts, std::size_t stride, std::size_t count, double sign,
                      const double* x, double* out, std::size_t out_stride) {
    const int zd = 2 * n;
    for (std::size_t i = 0; i < count; ++i) {
        double sym = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ax = sign * pts[j * stride + i];
            const double ay = sign * pts[(n + j) * stride + i];
            sym += ay * x[j] - ax * x[n + j];
        }
        for (int c = 0; c < zd; ++c) out[c * out_stride + i] = sign * pts[c * stride + i] + x[c];
        out[zd * out_stride + i] = sign * pts[zd * stride + i] + x[zd] + 0.5 * sym;
    }
}

double box_overlap_sum_scalar(int n, const double* weight, const double* side, std::size_t count,
                              const double* x) {
    const int zd = 2 * n;
    double twice[2 * 8 + 1];
    for (int c = 0; c <= zd; ++c) twice[c] = 2.0 * x[c];
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < count; ++i) {
        const double r = side[i];
        double prod = overlap_len(r, twice[0]);
        for (int c = 1; c < zd; ++c) prod *= overlap_len(r, twice[c]);
        prod *= overlap_len(r * r, twice[zd]);
        acc[i & 3] += weight[i] * prod;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{knorm_scalar, left_mul_scalar, right_mul_scalar, box_overlap_sum_scalar};
    return k;
}

}  // namespace heis::simd::detail
