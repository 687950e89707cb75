#pragma once

// Verification suites shared by the command-line tool and the acceptance
// harness. Each suite returns per-case pass/fail records.

#include "rsmorse/combinatorics.hpp"
#include "rsmorse/dualop.hpp"
#include "rsmorse/io.hpp"
#include "rsmorse/latticeop.hpp"
#include "rsmorse/polynomials.hpp"
#include "rsmorse/qcore.hpp"
#include "rsmorse/scattering.hpp"
#include "rsmorse/spectral.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace rsmorse {

struct CaseResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CaseResult> cases;

    void add(std::string name, bool pass, std::string detail = {}) {
        cases.push_back({std::move(name), pass, std::move(detail)});
    }
    void merge(const SuiteReport& other) { cases.insert(cases.end(), other.cases.begin(), other.cases.end()); }
    std::size_t failed() const {
        return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.pass; }));
    }
    std::size_t passed() const { return cases.size() - failed(); }
    bool ok() const { return failed() == 0; }

    json to_json() const {
        json arr = json::array();
        for (const auto& c : cases) arr.push_back({{"case", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return json{{"suite", suite}, {"passed", passed()}, {"failed", failed()}, {"cases", arr}};
    }
};

struct VerifyConfig {
    ParamSet params;
    int n = 2;
    int max_weight = 3;
    std::uint64_t seed = 0;
    int points = 3;
};

// ---------------------------------------------------------------------------
// Random rational inputs

/// Rationals a/b drawn uniformly from a bounded-denominator grid.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed, int max_den = 12) : rng_(seed), max_den_(max_den) {}

    /// Uniform over {a/b : lo < a/b < hi, 2 <= b <= max_den}; excludes zero if asked.
    Rational open_interval(const Rational& lo, const Rational& hi, bool nonzero = false) {
        std::uniform_int_distribution<int> den(2, max_den_);
        for (;;) {
            const int b = den(rng_);
            const Rational lb = lo * b, ub = hi * b;
            const long a_min = static_cast<long>(floor_of(lb)) + 1;
            const long a_max = static_cast<long>(ceil_of(ub)) - 1;
            if (a_min > a_max) continue;
            std::uniform_int_distribution<long> num(a_min, a_max);
            Rational r(num(rng_), b);
            r.canonicalize();
            if (nonzero && sgn(r) == 0) continue;
            return r;
        }
    }

    /// Parameters in the open domain, rejecting coincidences that make the
    /// construction degenerate (q a power of t and vice versa, repeated that).
    ParamSet params() {
        for (;;) {
            const Rational q = open_interval(0, 1), t = open_interval(0, 1);
            std::array<Rational, 3> h;
            for (auto& x : h) x = open_interval(-1, 1, true);
            bool coincide = false;
            for (int m = 1; m <= 8 && !coincide; ++m) coincide = rpow(t, m) == q || rpow(q, m) == t;
            if (coincide) continue;
            return params_from_hat(q, t, h);
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    static long floor_of(const Rational& x) {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return f.get_si();
    }
    static long ceil_of(const Rational& x) {
        Integer c;
        mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return c.get_si();
    }

    std::mt19937_64 rng_;
    int max_den_;
};

namespace detail {
inline std::string label(const std::string& what, const Partition& lambda, int l) {
    return what + " lambda=" + lambda.str() + " l=" + std::to_string(l);
}

/// E_{l,m}(z; y) with the convention E_{l,m} = 0 for l > m.
inline Rational eln_or_zero(int l, std::span<const Rational> z, std::span<const Rational> y) {
    if (l > static_cast<int>(z.size())) return Rational(0);
    return eval_Eln<Rational>(l, z, y);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Exact suites

/// H_l psi_xi = Ehat_l psi_xi at every lambda with |lambda| <= max_weight.
inline SuiteReport verify_pieri(const VerifyConfig& cfg) {
    SuiteReport rep{"pieri", {}};
    QHahnFamily family(cfg.params, cfg.n, cfg.max_weight + cfg.n, cfg.seed);
    GenericPointSampler sampler(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::vector<Rational>> pts;
    for (int k = 0; k < cfg.points; ++k) pts.push_back(sampler.next(cfg.n));
    for (const auto& lambda : partitions_up_to(cfg.n, cfg.max_weight))
        for (int l = 1; l <= cfg.n; ++l)
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const Rational res = pieri_residual(lambda, l, pts[k], family);
                rep.add(detail::label("pieri", lambda, l) + " point=" + std::to_string(k), sgn(res) == 0,
                        "residual=" + to_string(res));
            }
    return rep;
}

/// Triangularity, diagonal = E_{mu,l}, and Hhat_l P_lambda = E_{lambda,l} P_lambda.
inline SuiteReport verify_qdiff(const VerifyConfig& cfg) {
    SuiteReport rep{"qdiff", {}};
    QHahnFamily family(cfg.params, cfg.n, cfg.max_weight, cfg.seed);
    std::vector<int> top(static_cast<std::size_t>(cfg.n), 0);
    top[0] = cfg.max_weight;
    const Partition root(top);
    for (int l = 1; l <= cfg.n; ++l) {
        const TriangularMatrix C = matrix_in_monomial_basis(l, root, cfg.params, cfg.seed + static_cast<std::uint64_t>(l));
        rep.add("triangular l=" + std::to_string(l), C.violations.empty(),
                std::to_string(C.violations.size()) + " entries outside the ideal");
        rep.add("held-out l=" + std::to_string(l), C.held_out_failures.empty(),
                std::to_string(C.held_out_failures.size()) + " failing images");
        for (std::size_t i = 0; i < C.basis.size(); ++i) {
            const Rational E = eval_E_l(C.basis[i], l, cfg.params);
            rep.add(detail::label("diagonal", C.basis[i], l), C.entries(i, i) == E,
                    "entry=" + to_string(C.entries(i, i)) + " E=" + to_string(E));
        }
        for (const auto& lambda : C.basis) {
            const auto& P = family.get(lambda);
            const Rational E = eval_E_l(lambda, l, cfg.params);
            std::size_t nonzero = 0;
            for (std::size_t nu = 0; nu < C.basis.size(); ++nu) {
                Rational r = -E * P.coeff(C.basis[nu]);
                for (const auto& [mu, c] : P.coeffs()) r += c * C.entries(C.index_of(mu), nu);
                if (sgn(r) != 0) ++nonzero;
            }
            rep.add(detail::label("eigen", lambda, l), nonzero == 0,
                    std::to_string(nonzero) + " nonzero residual coefficients");
        }
    }
    return rep;
}

/// Lattice commutators on deltas and commuting dual matrices.
inline SuiteReport verify_commute(const VerifyConfig& cfg) {
    SuiteReport rep{"commute", {}};
    const int n = cfg.n;
    for (const auto& lambda0 : partitions_up_to(n, cfg.max_weight))
        for (int l = 1; l <= n; ++l)
            for (int m = l; m <= n; ++m) {
                const auto c = commutator_on_delta(l, m, lambda0, cfg.params);
                rep.add("lattice lambda0=" + lambda0.str() + " l=" + std::to_string(l) + " m=" + std::to_string(m),
                        c.is_zero(), std::to_string(c.values.size()) + " nonzero entries");
            }
    std::vector<int> top(static_cast<std::size_t>(n), 0);
    top[0] = cfg.max_weight;
    std::vector<TriangularMatrix> mats;
    for (int l = 1; l <= n; ++l)
        mats.push_back(matrix_in_monomial_basis(l, Partition(top), cfg.params, cfg.seed + static_cast<std::uint64_t>(l)));
    for (int l = 1; l <= n; ++l)
        for (int m = l + 1; m <= n; ++m) {
            const auto& A = mats[static_cast<std::size_t>(l - 1)].entries;
            const auto& B = mats[static_cast<std::size_t>(m - 1)].entries;
            rep.add("dual l=" + std::to_string(l) + " m=" + std::to_string(m), A * B == B * A);
        }
    return rep;
}

/// E_{lambda,l} >= 0 for every particle number up to n; the E_{l,n}
/// recurrence and homogeneity at random rational inputs.
inline SuiteReport verify_nonneg(const VerifyConfig& cfg, int random_inputs = 100) {
    SuiteReport rep{"nonneg", {}};
    const Rational& q = cfg.params.q();
    const Rational& t = cfg.params.t();
    for (int n = 1; n <= cfg.n; ++n)
        for (const auto& lambda : partitions_up_to(n, cfg.max_weight))
            for (int l = 1; l <= n; ++l) {
                const Rational E = eval_E_l(lambda, l, cfg.params);
                rep.add(detail::label("nonneg", lambda, l), sgn(E) >= 0, "E=" + to_string(E));
            }

    RationalSampler rs(cfg.seed);
    std::uniform_int_distribution<int> pick_n(1, std::max(1, cfg.n));
    std::size_t rec_bad = 0, hom_bad = 0, spec_bad = 0;
    for (int k = 0; k < random_inputs; ++k) {
        const int n = std::max(2, pick_n(rs.engine()));
        std::uniform_int_distribution<int> pick_l(1, n);
        const int l = pick_l(rs.engine());
        std::vector<Rational> z, y;
        for (int j = 0; j < n; ++j) z.push_back(rs.open_interval(-3, 3));
        for (int j = l; j <= n; ++j) y.push_back(rs.open_interval(-3, 3));
        const Rational s = rs.open_interval(0, 1, true);

        // Recurrence, with E_{l,n-1} = 0 when l = n.
        const std::span<const Rational> zt(z.data() + 1, z.size() - 1);
        const Rational lhs = eval_Eln<Rational>(l, z, y);
        Rational rhs = (z[0] - y[0]) * detail::eln_or_zero(l - 1, zt, y);
        if (l <= n - 1) rhs += eval_Eln<Rational>(l, zt, std::span<const Rational>(y.data() + 1, y.size() - 1));
        if (lhs != rhs) ++rec_bad;

        std::vector<Rational> sz(z), sy(y);
        for (auto& x : sz) x *= s;
        for (auto& x : sy) x *= s;
        if (eval_Eln<Rational>(l, sz, sy) != rpow(s, l) * lhs) ++hom_bad;

        // Specialization z_j = t^{j-1} q^{-lambda_j}, y = (t^{l-1}, ..., t^{n-1}).
        std::vector<int> parts(static_cast<std::size_t>(n));
        std::uniform_int_distribution<int> part(0, 4);
        for (auto& p : parts) p = part(rs.engine());
        std::sort(parts.rbegin(), parts.rend());
        const Partition lambda(parts);
        std::vector<Rational> zz, yy;
        for (int j = 0; j < n; ++j) zz.push_back(rpow(t, j) * rpow(q, -lambda[j]));
        for (int j = l - 1; j <= n - 1; ++j) yy.push_back(rpow(t, j));
        if (eval_E_l(lambda, l, cfg.params) != rpow(t, -static_cast<long>(l) * (l - 1) / 2) * eval_Eln<Rational>(l, zz, yy))
            ++spec_bad;
    }
    rep.add("recurrence", rec_bad == 0, std::to_string(rec_bad) + " of " + std::to_string(random_inputs) + " failed");
    rep.add("homogeneity", hom_bad == 0, std::to_string(hom_bad) + " of " + std::to_string(random_inputs) + " failed");
    rep.add("elementary form", spec_bad == 0, std::to_string(spec_bad) + " of " + std::to_string(random_inputs) + " failed");
    return rep;
}

/// that_2 -> 0 coefficient match, the elementary identity, and the
/// Ruijsenaars limit of the one-body factors.
inline SuiteReport verify_limits(const VerifyConfig& cfg, int identity_points = 50) {
    SuiteReport rep{"limits", {}};
    const ParamSet mv = params_morse_vanishing(cfg.params.q(), cfg.params.t(), cfg.params.that(0), cfg.params.that(1));
    for (int n = 1; n <= cfg.n; ++n) {
        const auto r = morse_vanishing_limit_check(mv, n, cfg.max_weight);
        std::string detail = std::to_string(r.checked) + " coefficients compared";
        if (!r.ok()) detail += ", first mismatch " + r.mismatches.front().what + " at " + r.mismatches.front().lambda.str();
        rep.add("morse-vanishing n=" + std::to_string(n), r.ok(), detail);
    }
    RationalSampler rs(cfg.seed + 17);
    std::size_t bad = 0, tried = 0;
    std::uniform_int_distribution<int> pick_n(1, std::max(1, cfg.n));
    while (tried < static_cast<std::size_t>(identity_points)) {
        const int n = pick_n(rs.engine());
        std::vector<Rational> z;
        for (int j = 0; j < n; ++j) z.push_back(rs.open_interval(-4, 4, true));
        try {
            const auto [lhs, rhs] = elementary_identity_sides<Rational>(z, cfg.params.t());
            if (lhs != rhs) ++bad;
            ++tried;
        } catch (const PoleError&) {
        }
    }
    rep.add("elementary identity", bad == 0, std::to_string(bad) + " of " + std::to_string(tried) + " failed");
    for (int n = 1; n <= cfg.n; ++n) {
        const auto r = ruijsenaars_limit_check(n, cfg.params.qd(), cfg.params.td(), 1e-4, 1e-6);
        rep.add("ruijsenaars n=" + std::to_string(n), r.shrinks_linearly(),
                "error ratio " + format_double(r.ratio()) + " (expected 100)");
    }
    return rep;
}

/// Detailed balance of the hopping coefficients and exact symmetry of the
/// conjugated integrals on the truncated lattice.
inline SuiteReport verify_balance(const VerifyConfig& cfg) {
    SuiteReport rep{"balance", {}};
    const int n = cfg.n;
    for (const auto& lambda : partitions_up_to(n, cfg.max_weight))
        for (int j = 0; j < n; ++j) {
            const Rational vp = v_plus(lambda, j, cfg.params);
            auto up = detail::shifted(lambda, IndexMask(1) << j, 0);
            if (!up) {
                rep.add("balance lambda=" + lambda.str() + " j=" + std::to_string(j + 1), sgn(vp) == 0, "boundary");
                continue;
            }
            const Rational lhs = norm_ratio(*up, cfg.params) / norm_ratio(lambda, cfg.params) * v_minus(*up, j, cfg.params);
            rep.add("balance lambda=" + lambda.str() + " j=" + std::to_string(j + 1), lhs == vp,
                    "lhs=" + to_string(lhs) + " v+=" + to_string(vp));
        }
    for (int l = 1; l <= n; ++l) {
        const auto M = conjugated_H_matrix(l, cfg.max_weight, cfg.params, n);
        rep.add("symmetric l=" + std::to_string(l), M.exactly_symmetric(),
                std::to_string(M.asymmetric.size()) + " asymmetric pairs");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Numerical reports

/// Gram matrix against delta_{lambda mu} Delta_lambda^{-1}.
inline std::vector<GramEntry> orthogonality_table(QHahnFamily& family, const QuadSpec& quad, int max_weight) {
    Spectrum spec(family, quad);
    const auto labels = partitions_up_to(family.n(), max_weight);
    std::vector<GramEntry> out;
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = a; b < labels.size(); ++b) out.push_back(spec.gram(labels[a], labels[b]));
    return out;
}

struct PhaseSample {
    std::vector<double> xi;
    Complex S;
    double unimodular_err = 0;
};

/// S_hat along random alcove points.
inline std::vector<PhaseSample> phase_table(const ParamSet& p, int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    const FloatParams fp = FloatParams::from(p);
    std::vector<PhaseSample> out;
    while (static_cast<int>(out.size()) < samples) {
        std::vector<double> xi(static_cast<std::size_t>(n));
        for (auto& x : xi) x = u(rng);
        std::sort(xi.rbegin(), xi.rend());
        if (std::adjacent_find(xi.begin(), xi.end()) != xi.end()) continue;
        const Complex S = S_hat(std::span<const double>(xi), fp);
        out.push_back({xi, S, std::abs(std::abs(S) - 1)});
    }
    return out;
}

}  // namespace rsmorse
