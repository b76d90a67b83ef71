#include "tdl/kernels.hpp"

#include <algorithm>

namespace tdl::kernels::scalar {

std::int64_t max_abs_cyclic_diff(const std::int64_t* v, std::size_t n) {
    if (n < 2) return 0;
    std::int64_t best = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::int64_t d = v[i] - v[i + 1];
        best = std::max(best, d < 0 ? -d : d);
    }
    std::int64_t d = v[n - 1] - v[0];
    return std::max(best, d < 0 ? -d : d);
}

std::int64_t sum(const std::int64_t* v, std::size_t n) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
}

Extrema min_max(const std::int64_t* v, std::size_t n) {
    Extrema e{v[0], v[0]};
    for (std::size_t i = 1; i < n; ++i) {
        e.min = std::min(e.min, v[i]);
        e.max = std::max(e.max, v[i]);
    }
    return e;
}

SignedParts signed_parts(const std::int64_t* v, std::size_t n) {
    SignedParts p;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] < 0) {
            p.negative += v[i];
            ++p.negative_count;
        } else {
            p.positive += v[i];
        }
    }
    return p;
}

}  // namespace tdl::kernels::scalar
