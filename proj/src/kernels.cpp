#include "tdl/kernels.hpp"

#include "tdl/error.hpp"

#include <atomic>

namespace tdl::kernels {

bool avx2_available() {
#if defined(TDL_HAVE_AVX2_KERNELS)
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

namespace {

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> b{avx2_available() ? Backend::Avx2 : Backend::Scalar};
    return b;
}

bool use_avx2() { return backend_slot().load(std::memory_order_relaxed) == Backend::Avx2; }

}  // namespace

Backend active_backend() { return backend_slot().load(); }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_available())
        throw Error(ErrorCode::InvalidArgument, "AVX2 backend unavailable on this CPU");
    backend_slot().store(b);
}

std::int64_t max_abs_cyclic_diff(const std::int64_t* v, std::size_t n) {
    return use_avx2() ? avx2::max_abs_cyclic_diff(v, n) : scalar::max_abs_cyclic_diff(v, n);
}

std::int64_t sum(const std::int64_t* v, std::size_t n) {
    return use_avx2() ? avx2::sum(v, n) : scalar::sum(v, n);
}

Extrema min_max(const std::int64_t* v, std::size_t n) {
    return use_avx2() ? avx2::min_max(v, n) : scalar::min_max(v, n);
}

SignedParts signed_parts(const std::int64_t* v, std::size_t n) {
    return use_avx2() ? avx2::signed_parts(v, n) : scalar::signed_parts(v, n);
}

}  // namespace tdl::kernels
