#pragma once

#include <cstddef>
#include <string>

// Batched kernels over structure-of-arrays point batches: coordinate c of
// point i lives at pts[c * stride + i], c in [0, 2n] with c == 2n the t slot.
namespace heis::simd {

enum class Backend { Scalar, Avx2 };

struct Kernels {
    // out[i] = |p_i|
    void (*knorm)(int n, const double* pts, std::size_t stride, std::size_t count, double* out);
    // out_i = x . (sign * p_i); sign = -1 gives x . p_i^{-1}
    void (*left_mul)(int n, const double* x, const double* pts, std::size_t stride, std::size_t count,
                     double sign, double* out, std::size_t out_stride);
    // out_i = (sign * p_i) . x
    void (*right_mul)(int n, const double* pts, std::size_t stride, std::size_t count, double sign,
                      const double* x, double* out, std::size_t out_stride);
    // sum_i weight[i] * prod_c len(side[i], x_c) * len(side[i]^2, x_t) where
    // len(r, v) = |[0, r] intersect [2v - r, 2v]|; x has 2n+1 coords.
    double (*box_overlap_sum)(int n, const double* weight, const double* side, std::size_t count,
                              const double* x);
};

const char* backend_name(Backend b);
bool backend_available(Backend b);
const Kernels& kernels(Backend b);

// Selected once from CPU features; HEIS_SIMD=scalar|avx2 overrides.
Backend active_backend();
void set_active_backend(Backend b);
const Kernels& active();

class ScopedBackend {
public:
    explicit ScopedBackend(Backend b) : saved_(active_backend()) { set_active_backend(b); }
    ~ScopedBackend() { set_active_backend(saved_); }
    ScopedBackend(const ScopedBackend&) = delete;
    ScopedBackend& operator=(const ScopedBackend&) = delete;

private:
    Backend saved_;
};

}  // namespace heis::simd
