#include "tdl/kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace tdl::kernels;

TEST_CASE("scalar kernels on small arrays") {
    const std::vector<std::int64_t> v{3, -1, 4, -1, 5};
    CHECK(scalar::sum(v.data(), v.size()) == 10);
    CHECK(scalar::max_abs_cyclic_diff(v.data(), v.size()) == 6);
    const Extrema e = scalar::min_max(v.data(), v.size());
    CHECK(e.min == -1);
    CHECK(e.max == 5);
    const SignedParts s = scalar::signed_parts(v.data(), v.size());
    CHECK(s.positive == 12);
    CHECK(s.negative == -2);
    CHECK(s.negative_count == 2);
    CHECK(scalar::max_abs_cyclic_diff(v.data(), 1) == 0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!avx2_available()) {
        MESSAGE("AVX2 unavailable; skipping equivalence");
        return;
    }
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 64u, 1001u}) {
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = d(rng);
        CHECK(avx2::sum(v.data(), n) == scalar::sum(v.data(), n));
        CHECK(avx2::max_abs_cyclic_diff(v.data(), n) == scalar::max_abs_cyclic_diff(v.data(), n));
        const Extrema a = avx2::min_max(v.data(), n), b = scalar::min_max(v.data(), n);
        CHECK(a.min == b.min);
        CHECK(a.max == b.max);
        const SignedParts p = avx2::signed_parts(v.data(), n), q = scalar::signed_parts(v.data(), n);
        CHECK(p.positive == q.positive);
        CHECK(p.negative == q.negative);
        CHECK(p.negative_count == q.negative_count);
    }
}

TEST_CASE("backend switch") {
    const Backend before = active_backend();
    set_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    const std::vector<std::int64_t> v{1, 2, 3};
    CHECK(sum(v.data(), v.size()) == 6);
    if (avx2_available()) {
        set_backend(Backend::Avx2);
        CHECK(sum(v.data(), v.size()) == 6);
    } else {
        CHECK_THROWS(set_backend(Backend::Avx2));
    }
    set_backend(before);
}
