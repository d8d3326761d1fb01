#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace heis::simd {
namespace {

bool cpu_has_avx2() {
#if defined(HEIS_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend initial_backend() {
    const char* env = std::getenv("HEIS_SIMD");
    if (env != nullptr) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

}  // namespace

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) { return b == Backend::Scalar || cpu_has_avx2(); }

const Kernels& kernels(Backend b) {
    if (!backend_available(b)) throw std::runtime_error(std::string("SIMD backend unavailable: ") + backend_name(b));
#if defined(HEIS_WITH_AVX2)
    if (b == Backend::Avx2) return detail::avx2_kernels();
#endif
    return detail::scalar_kernels();
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_active_backend(Backend b) {
    if (!backend_available(b)) throw std::runtime_error(std::string("SIMD backend unavailable: ") + backend_name(b));
    current().store(b, std::memory_order_relaxed);
}

const Kernels& active() { return kernels(active_backend()); }

}  // namespace heis::simd
