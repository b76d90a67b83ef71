#include "tdl/circle.hpp"

#include "tdl/error.hpp"
#include "tdl/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

namespace tdl::circle {

const char* mode_name(Mode m) { return m == Mode::Compliant ? "compliant" : "relaxed"; }

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

std::uint64_t mulmod_u(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u(r, a, m);
        a = mulmod_u(a, a, m);
        e >>= 1;
    }
    return r;
}

constexpr std::int64_t kMaxModulus = std::int64_t{1} << 62;

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::int64_t default_search_cap() {
    const char* env = std::getenv("TDL_SEARCH_CAP");
    if (env && *env) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 10'000'000;
}

std::int64_t compliant_floor(std::int64_t prev) {
    i128 v = 40;
    for (int k = 0; k < 5; ++k) {
        v *= prev;
        if (v > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
    }
    return static_cast<std::int64_t>(v + 1);
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    i128 r = static_cast<i128>(a) * b % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t mod) {
    i128 g = mod, x = 0, g1 = ((a % mod) + mod) % mod, x1 = 1;
    while (g1 != 0) {
        i128 q = g / g1;
        i128 t = g - q * g1;
        g = g1;
        g1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw Error(ErrorCode::InvalidArgument, "value is not invertible modulo " + std::to_string(mod));
    x %= mod;
    if (x < 0) x += mod;
    return static_cast<std::int64_t>(x);
}

Tower build_tower(std::int64_t m1, int depth, const std::vector<std::int64_t>& floors, std::int64_t search_cap) {
    if (m1 < 5 || !is_prime(static_cast<std::uint64_t>(m1)))
        throw Error(ErrorCode::InvalidArgument, "m1 must be an odd prime >= 5");
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
    Tower t;
    t.m.push_back(m1);
    t.M.push_back(m1);
    t.P.push_back(1);
    bool compliant = true;
    for (int j = 2; j <= depth; ++j) {
        const std::int64_t prev = t.M.back();
        // x = 1 mod m_{j-1}, x = -1 mod m_i for i < j-1.
        std::int64_t x = 1 % t.m.back(), mod = t.m.back();
        for (int i = 0; i + 1 < j - 1; ++i) {
            const std::int64_t mi = t.m[i];
            std::int64_t want = ((-1 - x) % mi + mi) % mi;
            std::int64_t step = mul_mod(want, mod_inverse(mod % mi, mi), mi);
            x += mod * step;
            mod *= mi;
        }
        std::int64_t floor = j - 2 < static_cast<int>(floors.size()) ? floors[j - 2] : 5;
        floor = std::max<std::int64_t>(floor, 5);
        i128 cand = x;
        if (cand < floor) cand += (static_cast<i128>(floor) - cand + prev - 1) / prev * prev;
        std::int64_t found = 0;
        for (std::int64_t k = 0; k < search_cap; ++k, cand += prev) {
            if (cand * prev >= kMaxModulus)
                throw Error(ErrorCode::InvalidArgument,
                            "level " + std::to_string(j) + " modulus would exceed 2^62");
            if (is_prime(static_cast<std::uint64_t>(cand))) {
                found = static_cast<std::int64_t>(cand);
                break;
            }
        }
        if (found == 0)
            throw Error(ErrorCode::SearchCapExceeded,
                        "no qualifying prime for level " + std::to_string(j) + " within " +
                            std::to_string(search_cap) + " candidates");
        if (found < compliant_floor(prev)) compliant = false;
        t.m.push_back(found);
        t.M.push_back(prev * found);
        t.P.push_back(t.P.back() * found + 1);
        if (std::gcd(t.P.back(), t.M.back()) != 1)
            throw Error(ErrorCode::InvalidArgument, "numerator and modulus share a factor");
    }
    t.mode = compliant ? Mode::Compliant : Mode::Relaxed;
    return t;
}

Tower build_compliant_tower(std::int64_t m1, int depth, std::int64_t search_cap) {
    Tower t = build_tower(m1, 1, {}, search_cap);
    std::vector<std::int64_t> floors;
    for (int j = 2; j <= depth; ++j) {
        floors.push_back(compliant_floor(t.M.back()));
        t = build_tower(m1, j, floors, search_cap);
    }
    return t;
}

CircleIndex rotate(const Tower& t, CircleIndex x, std::int64_t steps) {
    const std::int64_t M = t.modulus(x.level);
    std::int64_t shift = mul_mod(steps % M, t.numerator(x.level), M);
    std::int64_t l = x.l + shift;
    if (l >= M) l -= M;
    return {x.level, l};
}

HalfCirclePartition half_partition(const Tower& t, int n) {
    const std::int64_t M = t.modulus(n);
    return {n, (M - 3) / 2, (M - 1) / 2, (M + 1) / 2};
}

VisitBalance orbit_visit_balance(const Tower& t, CircleIndex x, std::int64_t steps) {
    const std::int64_t M = t.modulus(x.level), P = t.numerator(x.level);
    if (steps > M || steps < -M) throw Error(ErrorCode::InvalidArgument, "|steps| must not exceed M_n");
    const HalfCirclePartition h = half_partition(t, x.level);
    VisitBalance b;
    std::int64_t count = steps >= 0 ? steps : -steps;
    std::int64_t l = steps >= 0 ? x.l : rotate(t, x, steps + 1).l;
    for (std::int64_t i = 0; i < count; ++i) {
        switch (h.classify(l)) {
            case Half::Left: ++b.left; break;
            case Half::Middle: ++b.middle; break;
            case Half::Right: ++b.right; break;
        }
        l += P;
        if (l >= M) l -= M;
    }
    return b;
}

std::vector<std::int64_t> digits(const Tower& t, int n, std::int64_t l) {
    std::vector<std::int64_t> k(n);
    for (int j = n; j >= 1; --j) {
        k[j - 1] = l % t.prime(j) + 1;
        l /= t.prime(j);
    }
    return k;
}

Rational StepFunction::integral() const {
    mpz_class acc = static_cast<long>(kernels::sum(numer.data(), numer.size()));
    Rational s(acc, mpz_class(static_cast<long>(denom)) * static_cast<unsigned long>(numer.size()));
    s.canonicalize();
    return s;
}

StepFunction phi_level(const Tower& t, int n) {
    if (n < 1 || n > t.depth()) throw Error(ErrorCode::TowerTooShallow, "level " + std::to_string(n));
    const std::int64_t M = t.modulus(n), P = t.numerator(n), mid = (M - 1) / 2;
    StepFunction f;
    f.level = n;
    f.numer.assign(static_cast<std::size_t>(M), 0);
    std::int64_t l = 0, cur = 0;
    for (std::int64_t j = 0; j < M; ++j) {
        f.numer[l] = cur;
        cur += l < mid ? 1 : (l == mid ? 0 : -1);
        l += P;
        if (l >= M) l -= M;
    }
    return f;
}

StepFunction psi_from_phi(const StepFunction& phi) {
    StepFunction g = phi;
    for (auto& v : g.numer) v = phi.denom - v;
    return g;
}

OscillationReport verify_oscillations(const Tower& t, int n) { return verify_oscillations(t, n, phi_level(t, n)); }

OscillationReport verify_oscillations(const Tower& t, int n, const StepFunction& phi) {
    if (n < 2 || n > t.depth()) throw Error(ErrorCode::InvalidArgument, "oscillation checks need 2 <= n <= depth");
    OscillationReport r;
    r.level = n;
    r.compliant = t.mode == Mode::Compliant;
    const std::int64_t Mp = t.parent_modulus(n), m = t.prime(n), M = t.modulus(n), P = t.numerator(n);
    const std::vector<std::int64_t>& v = phi.numer;

    r.neighbor_max = kernels::max_abs_cyclic_diff(v.data(), v.size());
    r.neighbor_bound = 4 * Mp * Mp;
    r.neighbor_asserted = n == 2;

    std::int64_t min_mid = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_start = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t b = 0; b < Mp; ++b) {
        min_mid = std::min(min_mid, v[b * m + (m - 1) / 2]);
        max_start = std::max(max_start, v[b * m]);
    }
    r.rise_min = min_mid - max_start;
    r.rise_bound = make_rational(m, 2 * Mp) - Rational(10 * Mp * Mp * Mp);
    r.rise_asserted = n == 2 && r.compliant;

    std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t b = 0; b < Mp; ++b) {
        for (std::int64_t s = 0; s < m; ++s) {
            std::int64_t k = s + 1;
            if (std::min(k, m - k) >= Mp) {
                s = std::max(s, m - Mp - 1);  // jump to the right boundary run
                continue;
            }
            lo = std::min(lo, v[b * m + s]);
            hi = std::max(hi, v[b * m + s]);
        }
    }
    r.boundary_spread = hi - lo;
    r.boundary_bound = 3 * Mp * r.neighbor_bound;
    r.boundary_asserted = n == 2 && r.compliant;

    if (n == 2) {
        const std::int64_t a = P % M, b = mul_mod(m - 1, P, M);
        std::int64_t worst = 0;
        for (std::int64_t x = 0; x < M; ++x) {
            std::int64_t xa = x + a, xb = x + b;
            if (xa >= M) xa -= M;
            if (xb >= M) xb -= M;
            worst = std::max(worst, std::abs(v[xb] - v[xa]));
        }
        r.visit_diff_max = worst;
        r.visit_diff_bound = 4 * t.prime(1);
        r.visit_asserted = true;
    }
    return r;
}

}  // namespace tdl::circle
