#include "tdl/duals.hpp"

#include "tdl/error.hpp"
#include "tdl/kernels.hpp"

#include <algorithm>
#include <string>

namespace tdl::duals {

using circle::StepFunction;
using circle::Tower;
using tau::TauLevel;

namespace {

StepFunction lift(const StepFunction& f, std::int64_t factor, int level) {
    StepFunction g;
    g.level = level;
    g.denom = f.denom;
    g.numer.resize(f.numer.size() * static_cast<std::size_t>(factor));
    for (std::size_t l = 0; l < g.numer.size(); ++l) g.numer[l] = f.numer[l / factor];
    return g;
}

DualPairLevel lifted(const TauLevel& level, const Tower& t, int N) {
    if (N < level.level || N > t.depth())
        throw Error(ErrorCode::InvalidArgument, "evaluation level must lie between the pair level and the depth");
    const std::int64_t factor = t.modulus(N) / t.modulus(level.level);
    const StepFunction phi = circle::phi_level(t, level.level);
    DualPairLevel p;
    p.level = level.level;
    p.eval_level = N;
    p.phi_raw = lift(phi, factor, N);
    p.psi = lift(circle::psi_from_phi(phi), factor, N);
    p.phi_corrected = p.phi_raw;
    return p;
}

struct Graphs {
    std::vector<std::int64_t> rot, rot_cost, tau, tau_cost;
};

Graphs graphs_at(const TauLevel& level, const Tower& t, int N) {
    const std::int64_t M = t.modulus(N), P = t.numerator(N);
    const StepFunction phi = circle::phi_level(t, N);
    Graphs g;
    g.tau = tau_graph_at(level, t, N);
    g.rot.resize(M);
    g.rot_cost.resize(M);
    g.tau_cost.resize(M);
    for (std::int64_t l = 0; l < M; ++l) {
        std::int64_t r = l + P;
        if (r >= M) r -= M;
        g.rot[l] = r;
        g.rot_cost[l] = 1 + phi.numer[l] - phi.numer[r];
        g.tau_cost[l] = 1 + phi.numer[l] - phi.numer[g.tau[l]];
    }
    return g;
}

}  // namespace

std::vector<std::int64_t> tau_graph_at(const TauLevel& level, const Tower& t, int N) {
    if (N == level.level) return level.sigma;
    const std::int64_t M = t.modulus(N), P = t.numerator(N);
    const std::int64_t factor = M / t.modulus(level.level);
    std::vector<std::int64_t> out(M);
    for (std::int64_t l = 0; l < M; ++l) {
        std::int64_t v = l + circle::mul_mod(level.tau[l / factor], P, M);
        out[l] = v >= M ? v - M : v;
    }
    return out;
}

DualPairLevel raw_pair(const TauLevel& level, const Tower& t, int N) { return lifted(level, t, N); }

DualPairLevel corrected_pair(const TauLevel& level, const Tower& t, int N) {
    DualPairLevel p = lifted(level, t, N);
    const Graphs g = graphs_at(level, t, N);
    const std::int64_t M = t.modulus(N);
    std::int64_t total = 0;
    for (std::int64_t l = 0; l < M; ++l) {
        const std::int64_t ex_rot = p.phi_raw.numer[l] + p.psi.numer[g.rot[l]] - g.rot_cost[l];
        const std::int64_t ex_tau = p.phi_raw.numer[l] + p.psi.numer[g.tau[l]] - g.tau_cost[l];
        const std::int64_t c = std::max<std::int64_t>(ex_rot, 0) + std::max<std::int64_t>(ex_tau, 0);
        p.phi_corrected.numer[l] -= c;
        total += c;
    }
    p.correction_norm = make_rational(total, M);
    return p;
}

DualPairLevel corrected_pair(const TauLevel& level, const Tower& t) { return corrected_pair(level, t, level.level); }

Report verify_feasibility(const DualPairLevel& pair, const TauLevel& level, const Tower& t) {
    Report r;
    const int N = pair.eval_level;
    const std::int64_t M = t.modulus(N);
    if (pair.level != level.level || static_cast<std::int64_t>(pair.phi_corrected.size()) != M) {
        r.add("shape", false, "pair does not belong to level " + std::to_string(level.level));
        return r;
    }
    const Graphs gr = graphs_at(level, t, N);
    const auto& f = pair.phi_corrected.numer;
    const auto& g = pair.psi.numer;
    std::int64_t bad0 = 0, bad1 = 0, badt = 0, first0 = -1, first1 = -1, firstt = -1;
    bool below = true;
    for (std::int64_t l = 0; l < M; ++l) {
        if (f[l] + g[l] > 1 && bad0++ == 0) first0 = l;
        if (f[l] + g[gr.rot[l]] > gr.rot_cost[l] && bad1++ == 0) first1 = l;
        if (f[l] + g[gr.tau[l]] > gr.tau_cost[l] && badt++ == 0) firstt = l;
        if (f[l] > pair.phi_raw.numer[l]) below = false;
    }
    auto detail = [](std::int64_t count, std::int64_t first) {
        return count ? std::to_string(count) + " violations, first at index " + std::to_string(first) : std::string();
    };
    r.add("identity_graph", bad0 == 0, detail(bad0, first0));
    r.add("rotation_graph", bad1 == 0, detail(bad1, first1));
    r.add("tau_graph", badt == 0, detail(badt, firstt));
    r.add("corrected_below_raw", below);
    return r;
}

Rational dual_value(const DualPairLevel& pair) {
    const std::int64_t s = kernels::sum(pair.phi_corrected.numer.data(), pair.phi_corrected.size()) +
                           kernels::sum(pair.psi.numer.data(), pair.psi.size());
    return make_rational(s, static_cast<std::int64_t>(pair.psi.size()) * pair.psi.denom);
}

RotationDrift rotation_drift(const Tower& t, int n) {
    if (n < 1 || n + 1 > t.depth()) throw Error(ErrorCode::TowerTooShallow, "rotation drift needs level n + 1");
    const StepFunction phi = circle::phi_level(t, n);
    const std::int64_t Mn = t.modulus(n), Pn = t.numerator(n);
    const std::int64_t m = t.prime(n + 1), M = t.modulus(n + 1), P = t.numerator(n + 1);
    std::int64_t total = 0;
    for (std::int64_t l = 0; l < M; ++l) {
        std::int64_t a = l + P;
        if (a >= M) a -= M;
        std::int64_t b = l / m + Pn;
        if (b >= Mn) b -= Mn;
        const std::int64_t d = phi.numer[a / m] - phi.numer[b];
        total += d < 0 ? -d : d;
    }
    RotationDrift r;
    r.level = n;
    r.norm = make_rational(total, M);
    r.bound = make_rational(4 * Mn, m);
    return r;
}

std::vector<Rational> default_delta_grid(std::int64_t M) {
    std::vector<Rational> out;
    Rational d = make_rational(1, 2);
    const Rational floor = make_rational(2, M);
    while (d >= floor) {
        out.push_back(d);
        d /= 2;
    }
    return out;
}

SingularDiagnostic singular_diagnostic(const TauLevel& level, const Tower& t, const std::vector<Rational>& deltas) {
    const StepFunction q = tau::quasi_cost(level, t);
    const std::int64_t M = static_cast<std::int64_t>(q.size());
    SingularDiagnostic d;
    d.level = level.level;
    const kernels::SignedParts parts = kernels::signed_parts(q.numer.data(), q.size());
    d.negative_mass = make_rational(parts.negative, M);
    d.carrier_measure = make_rational(parts.negative_count, M);
    std::int64_t above = 0, below = 0;
    std::vector<std::int64_t> neg;
    for (std::int64_t v : q.numer) {
        if (v > 1) above += v - 1;
        if (v < 1) below += 1 - v;
        if (v < 0) neg.push_back(v);
    }
    d.excess_above = make_rational(above, M);
    d.excess_below = make_rational(below, M);
    std::sort(neg.begin(), neg.end());
    for (const Rational& delta : deltas) {
        // Largest count k with k / M < delta.
        mpz_class lim = delta.get_num() * M;
        mpz_class k = (lim - 1) / delta.get_den();
        if (lim <= 0) k = 0;
        const std::size_t take = k.fits_slong_p() ? std::min<std::size_t>(neg.size(), k.get_si()) : neg.size();
        std::int64_t s = 0;
        for (std::size_t i = 0; i < take; ++i) s -= neg[i];
        d.small_set_sup.emplace_back(delta, make_rational(s, M));
    }
    return d;
}

std::vector<SingularDiagnostic> singular_buildup(const std::vector<TauLevel>& levels, const Tower& t,
                                                 const std::vector<Rational>& deltas) {
    std::vector<SingularDiagnostic> out;
    for (const auto& lv : levels)
        out.push_back(singular_diagnostic(lv, t, deltas.empty() ? default_delta_grid(t.modulus(lv.level)) : deltas));
    return out;
}

}  // namespace tdl::duals
