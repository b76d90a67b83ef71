#pragma once

#include <cstddef>
#include <cstdint>

// Reductions over integer step-function arrays. Scalar reference plus an AVX2
// variant picked at runtime.
namespace tdl::kernels {

struct Extrema {
    std::int64_t min = 0;
    std::int64_t max = 0;
};

struct SignedParts {
    std::int64_t positive = 0;  // sum of max(v, 0)
    std::int64_t negative = 0;  // sum of min(v, 0)
    std::int64_t negative_count = 0;
};

enum class Backend { Scalar, Avx2 };

// max_i |v[i] - v[(i + 1) % n]|; 0 for n < 2.
std::int64_t max_abs_cyclic_diff(const std::int64_t* v, std::size_t n);
std::int64_t sum(const std::int64_t* v, std::size_t n);
// n must be positive.
Extrema min_max(const std::int64_t* v, std::size_t n);
SignedParts signed_parts(const std::int64_t* v, std::size_t n);

bool avx2_available();
Backend active_backend();
// For equivalence testing; throws if the requested backend is unavailable.
void set_backend(Backend b);

namespace scalar {
std::int64_t max_abs_cyclic_diff(const std::int64_t* v, std::size_t n);
std::int64_t sum(const std::int64_t* v, std::size_t n);
Extrema min_max(const std::int64_t* v, std::size_t n);
SignedParts signed_parts(const std::int64_t* v, std::size_t n);
}  // namespace scalar

namespace avx2 {
std::int64_t max_abs_cyclic_diff(const std::int64_t* v, std::size_t n);
std::int64_t sum(const std::int64_t* v, std::size_t n);
Extrema min_max(const std::int64_t* v, std::size_t n);
SignedParts signed_parts(const std::int64_t* v, std::size_t n);
}  // namespace avx2

}  // namespace tdl::kernels
