#include "tdl/kernels.hpp"

#if defined(TDL_HAVE_AVX2_KERNELS) && defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>

namespace tdl::kernels::avx2 {

namespace {

inline __m256i load(const std::int64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

inline __m256i abs64(__m256i x) {
    __m256i neg = _mm256_cmpgt_epi64(_mm256_setzero_si256(), x);
    return _mm256_sub_epi64(_mm256_xor_si256(x, neg), neg);
}

inline __m256i max64(__m256i a, __m256i b) { return _mm256_blendv_epi8(b, a, _mm256_cmpgt_epi64(a, b)); }
inline __m256i min64(__m256i a, __m256i b) { return _mm256_blendv_epi8(a, b, _mm256_cmpgt_epi64(a, b)); }

inline void store(std::int64_t out[4], __m256i x) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), x); }

}  // namespace

std::int64_t max_abs_cyclic_diff(const std::int64_t* v, std::size_t n) {
    if (n < 2) return 0;
    __m256i best = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 < n; i += 4) best = max64(best, abs64(_mm256_sub_epi64(load(v + i), load(v + i + 1))));
    std::int64_t lanes[4];
    store(lanes, best);
    std::int64_t r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) {
        std::int64_t d = v[i] - v[(i + 1) % n];
        r = std::max(r, d < 0 ? -d : d);
    }
    return r;
}

std::int64_t sum(const std::int64_t* v, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, load(v + i));
    std::int64_t lanes[4];
    store(lanes, acc);
    std::int64_t s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += v[i];
    return s;
}

Extrema min_max(const std::int64_t* v, std::size_t n) {
    Extrema e{v[0], v[0]};
    std::size_t i = 0;
    if (n >= 4) {
        __m256i lo = load(v), hi = lo;
        for (i = 4; i + 4 <= n; i += 4) {
            __m256i x = load(v + i);
            lo = min64(lo, x);
            hi = max64(hi, x);
        }
        std::int64_t a[4], b[4];
        store(a, lo);
        store(b, hi);
        for (int k = 0; k < 4; ++k) {
            e.min = std::min(e.min, a[k]);
            e.max = std::max(e.max, b[k]);
        }
    }
    for (; i < n; ++i) {
        e.min = std::min(e.min, v[i]);
        e.max = std::max(e.max, v[i]);
    }
    return e;
}

SignedParts signed_parts(const std::int64_t* v, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i pos = zero, neg = zero, cnt = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i x = load(v + i);
        __m256i m = _mm256_cmpgt_epi64(zero, x);
        neg = _mm256_add_epi64(neg, _mm256_and_si256(m, x));
        pos = _mm256_add_epi64(pos, _mm256_andnot_si256(m, x));
        cnt = _mm256_sub_epi64(cnt, m);
    }
    std::int64_t a[4], b[4], c[4];
    store(a, pos);
    store(b, neg);
    store(c, cnt);
    SignedParts p;
    for (int k = 0; k < 4; ++k) {
        p.positive += a[k];
        p.negative += b[k];
        p.negative_count += c[k];
    }
    for (; i < n; ++i) {
        if (v[i] < 0) {
            p.negative += v[i];
            ++p.negative_count;
        } else {
            p.positive += v[i];
        }
    }
    return p;
}

}  // namespace tdl::kernels::avx2

#else

#include <stdexcept>

namespace tdl::kernels::avx2 {

[[noreturn]] static void unavailable() { throw std::logic_error("AVX2 kernels not compiled in"); }

std::int64_t max_abs_cyclic_diff(const std::int64_t*, std::size_t) { unavailable(); }
std::int64_t sum(const std::int64_t*, std::size_t) { unavailable(); }
Extrema min_max(const std::int64_t*, std::size_t) { unavailable(); }
SignedParts signed_parts(const std::int64_t*, std::size_t) { unavailable(); }

}  // namespace tdl::kernels::avx2

#endif
