#pragma once

// The lattice Hamiltonian H and the commuting integrals H_l acting on
// finitely supported functions on rho + Lambda.
//
// Sites are indexed 0-based here: j = 0..n-1 stands for particle j+1, so
// q^{x_j} = t^{n-1-j} q^{lambda_j}.

#include "rsmorse/combinatorics.hpp"
#include "rsmorse/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsmorse {

/// Finitely supported f : rho + Lambda -> T; absent keys are zero.
template <class T = Rational>
struct LatticeFunction {
    int n = 0;
    std::map<Partition, T> values;

    LatticeFunction() = default;
    explicit LatticeFunction(int particles) : n(particles) {}

    static LatticeFunction delta(const Partition& lambda, T value = T(1)) {
        LatticeFunction f(lambda.size());
        f.values.emplace(lambda, std::move(value));
        return f;
    }

    T at(const Partition& lambda) const {
        auto it = values.find(lambda);
        return it == values.end() ? T(0) : it->second;
    }

    void add(const Partition& lambda, const T& v) {
        if (lambda.size() != n) throw std::invalid_argument("LatticeFunction: partition has wrong length");
        auto [it, inserted] = values.try_emplace(lambda, v);
        if (!inserted) it->second += v;
    }

    /// Drops exact zeros.
    void prune() {
        std::erase_if(values, [](const auto& kv) { return is_exact_zero(kv.second); });
    }

    bool is_zero() const {
        for (const auto& [k, v] : values)
            if (!is_exact_zero(v)) return false;
        return true;
    }
};

using IndexMask = std::uint32_t;

inline int mask_size(IndexMask m) { return std::popcount(m); }
inline bool in_mask(IndexMask m, int j) { return (m >> j) & 1u; }

/// One term of the H_l stencil at lambda: coefficient times f(target), with
/// target = lambda + e_{J+} - e_{J-}.
struct HopTerm {
    IndexMask plus = 0;
    IndexMask minus = 0;
    Rational coefficient;
    Partition target;
};

namespace detail {

/// Per-site data at lambda: X_j = q^{x_j} and the one-body up/down factors
///   up_j   = that_0^{-1} (1 - t1 X_j)(1 - t2 X_j)
///   down_j = that_0 (1 - t0 X_j)(1 - X_j).
struct SiteData {
    std::vector<Rational> X, up, down;
    const ParamSet* params = nullptr;

    SiteData(const Partition& lambda, const ParamSet& p) : params(&p) {
        const int n = lambda.size();
        X.resize(static_cast<std::size_t>(n));
        up.resize(X.size());
        down.resize(X.size());
        for (int j = 0; j < n; ++j) {
            const auto u = static_cast<std::size_t>(j);
            X[u] = rpow(p.t(), n - 1 - j) * rpow(p.q(), lambda[j]);
            up[u] = (1 - p.t1() * X[u]) * (1 - p.t2() * X[u]) / p.that(0);
            down[u] = p.that(0) * (1 - p.t0() * X[u]) * (1 - X[u]);
        }
    }

    int n() const { return static_cast<int>(X.size()); }
    Rational ratio(int j, int k) const { return X[static_cast<std::size_t>(j)] / X[static_cast<std::size_t>(k)]; }
};

inline Rational checked_quotient(const Rational& num, const Rational& den, const char* where) {
    if (sgn(den) == 0) throw DegeneracyError(std::string("vanishing denominator in ") + where);
    return num / den;
}

// (t^{-1} - R)/(1 - R) and (t - R)/(1 - R) with R = X_j / X_k.
inline Rational up_pair(const SiteData& s, int j, int k) {
    const Rational R = s.ratio(j, k);
    return checked_quotient(1 / s.params->t() - R, 1 - R, "up-hop pair factor");
}
inline Rational down_pair(const SiteData& s, int j, int k) {
    const Rational R = s.ratio(j, k);
    return checked_quotient(s.params->t() - R, 1 - R, "down-hop pair factor");
}

inline void require_site(int j, int n) {
    if (j < 0 || j >= n)
        throw std::out_of_range("site index " + std::to_string(j) + " outside 0.." + std::to_string(n - 1));
}

inline IndexMask full_mask(int n) { return n >= 32 ? ~IndexMask(0) : (IndexMask(1) << n) - 1; }

inline void require_small_n(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("particle number must lie in 1..16");
}

/// lambda + e_plus - e_minus if that is a partition.
inline std::optional<Partition> shifted(const Partition& lambda, IndexMask plus, IndexMask minus) {
    std::vector<int> raw = lambda.parts();
    for (int j = 0; j < lambda.size(); ++j) {
        if (in_mask(plus, j)) ++raw[static_cast<std::size_t>(j)];
        if (in_mask(minus, j)) --raw[static_cast<std::size_t>(j)];
    }
    if (!Partition::is_partition(raw)) return std::nullopt;
    return Partition(std::move(raw));
}

/// Calls f(sub) for every submask of m, including 0 and m.
template <class F>
void for_each_submask(IndexMask m, F&& f) {
    for (IndexMask s = m;; s = (s - 1) & m) {
        f(s);
        if (s == 0) break;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// H

/// v_j^+(lambda) = that_0^{-1}(1 - t1 X_j)(1 - t2 X_j) prod_{k != j} (t^{-1} - X_j/X_k)/(1 - X_j/X_k).
inline Rational v_plus(const Partition& lambda, int j, const ParamSet& p) {
    detail::require_site(j, lambda.size());
    detail::SiteData s(lambda, p);
    Rational v = s.up[static_cast<std::size_t>(j)];
    for (int k = 0; k < s.n(); ++k)
        if (k != j) v *= detail::up_pair(s, j, k);
    return v;
}

/// v_j^-(lambda) = that_0 (1 - t0 X_j)(1 - X_j) prod_{k != j} (t - X_j/X_k)/(1 - X_j/X_k).
inline Rational v_minus(const Partition& lambda, int j, const ParamSet& p) {
    detail::require_site(j, lambda.size());
    detail::SiteData s(lambda, p);
    Rational v = s.down[static_cast<std::size_t>(j)];
    for (int k = 0; k < s.n(); ++k)
        if (k != j) v *= detail::down_pair(s, j, k);
    return v;
}

/// (Hf)(lambda) = sum_j v_j^+ (f(lambda+e_j) - f(lambda)) + v_j^- (f(lambda-e_j) - f(lambda)),
/// each sum restricted to neighbours inside Lambda.
template <class T>
LatticeFunction<T> apply_H(const LatticeFunction<T>& f, const ParamSet& p) {
    const int n = f.n;
    LatticeFunction<T> out(n);
    std::set<Partition> rows;
    for (const auto& [mu, v] : f.values) {
        rows.insert(mu);
        for (int j = 0; j < n; ++j) {
            if (auto a = detail::shifted(mu, IndexMask(1) << j, 0)) rows.insert(*a);
            if (auto b = detail::shifted(mu, 0, IndexMask(1) << j)) rows.insert(*b);
        }
    }
    for (const Partition& lambda : rows) {
        const T here = f.at(lambda);
        T value(0);
        for (int j = 0; j < n; ++j) {
            if (auto up = detail::shifted(lambda, IndexMask(1) << j, 0))
                value += scalar_from<T>(v_plus(lambda, j, p)) * (f.at(*up) - here);
            if (auto down = detail::shifted(lambda, 0, IndexMask(1) << j))
                value += scalar_from<T>(v_minus(lambda, j, p)) * (f.at(*down) - here);
        }
        if (!is_exact_zero(value)) out.values.emplace(lambda, value);
    }
    return out;
}

// ---------------------------------------------------------------------------
// H_l

/// V_{J+,J-}(lambda) (J+ = plus, J- = minus as 0-based index masks).
inline Rational V_coeff(IndexMask plus, IndexMask minus, const Partition& lambda, const ParamSet& p) {
    if (plus & minus) throw std::invalid_argument("V_coeff: J+ and J- overlap");
    const int n = lambda.size();
    detail::require_small_n(n);
    if ((plus | minus) & ~detail::full_mask(n)) throw std::out_of_range("V_coeff: index outside 0..n-1");
    detail::SiteData s(lambda, p);
    const long a = mask_size(plus), b = mask_size(minus);
    Rational v = rpow(p.t(), -a * (a - 1) / 2 + b * (b - 1) / 2);
    const IndexMask rest = detail::full_mask(n) & ~(plus | minus);
    const Rational& t = p.t();
    const Rational& q = p.q();
    for (int j = 0; j < n; ++j) {
        if (in_mask(plus, j)) {
            v *= s.up[static_cast<std::size_t>(j)];
            for (int k = 0; k < n; ++k) {
                if (in_mask(minus, k)) {
                    const Rational R = s.ratio(j, k);
                    v *= detail::checked_quotient(1 - t * R, 1 - R, "V pair factor");
                    v *= detail::checked_quotient(1 / t - q * R, 1 - q * R, "V pair factor");
                } else if (in_mask(rest, k)) {
                    v *= detail::up_pair(s, j, k);
                }
            }
        } else if (in_mask(minus, j)) {
            v *= s.down[static_cast<std::size_t>(j)];
            for (int k = 0; k < n; ++k)
                if (in_mask(rest, k)) v *= detail::down_pair(s, j, k);
        }
    }
    return v;
}

/// U_{K,p}(lambda): (-1)^p times the sum over disjoint I+, I- in K with
/// |I+| + |I-| = count.
inline Rational U_coeff(IndexMask K, int count, const Partition& lambda, const ParamSet& p) {
    if (count < 0) throw std::invalid_argument("U_coeff: negative order");
    const int n = lambda.size();
    detail::require_small_n(n);
    if (K & ~detail::full_mask(n)) throw std::out_of_range("U_coeff: index outside 0..n-1");
    if (count == 0) return Rational(1);
    if (count > mask_size(K)) return Rational(0);

    detail::SiteData s(lambda, p);
    const Rational& t = p.t();
    const Rational& q = p.q();
    Rational total(0);
    detail::for_each_submask(K, [&](IndexMask Ip) {
        if (mask_size(Ip) > count) return;
        detail::for_each_submask(K & ~Ip, [&](IndexMask Im) {
            if (mask_size(Ip) + mask_size(Im) != count) return;
            const IndexMask rest = K & ~(Ip | Im);
            Rational term(1);
            for (int j = 0; j < n; ++j) {
                if (in_mask(Ip, j)) {
                    term *= s.up[static_cast<std::size_t>(j)];
                    for (int k = 0; k < n; ++k) {
                        if (in_mask(Im, k)) {
                            const Rational R = s.ratio(j, k);
                            term *= detail::checked_quotient(1 - t * R, 1 - R, "U pair factor");
                            term *= detail::checked_quotient(1 - q * R / t, 1 - q * R, "U pair factor");
                        } else if (in_mask(rest, k)) {
                            term *= detail::up_pair(s, j, k);
                        }
                    }
                } else if (in_mask(Im, j)) {
                    term *= s.down[static_cast<std::size_t>(j)];
                    for (int k = 0; k < n; ++k)
                        if (in_mask(rest, k)) term *= detail::down_pair(s, j, k);
                }
            }
            total += term;
        });
    });
    return count % 2 ? Rational(-total) : total;
}

/// All admissible terms of (H_l f)(lambda): disjoint J+, J- with
/// |J+| + |J-| <= l and lambda + e_{J+} - e_{J-} in Lambda.
inline std::vector<HopTerm> hl_stencil(int l, const Partition& lambda, const ParamSet& p) {
    const int n = lambda.size();
    detail::require_small_n(n);
    detail::require_degree(l, n, "hl_stencil");
    const IndexMask all = detail::full_mask(n);
    std::vector<HopTerm> terms;
    for (IndexMask plus = 0; plus <= all; ++plus) {
        if (mask_size(plus) > l) continue;
        detail::for_each_submask(all & ~plus, [&](IndexMask minus) {
            const int used = mask_size(plus) + mask_size(minus);
            if (used > l) return;
            auto target = detail::shifted(lambda, plus, minus);
            if (!target) return;
            const IndexMask K = all & ~(plus | minus);
            Rational c = U_coeff(K, l - used, lambda, p) * V_coeff(plus, minus, lambda, p);
            terms.push_back(HopTerm{plus, minus, std::move(c), std::move(*target)});
        });
    }
    return terms;
}

template <class T>
LatticeFunction<T> apply_Hl(int l, const LatticeFunction<T>& f, const ParamSet& p) {
    const int n = f.n;
    detail::require_small_n(n);
    detail::require_degree(l, n, "apply_Hl");
    const IndexMask all = detail::full_mask(n);

    // Rows that can see the support: lambda = mu - e_{J+} + e_{J-}.
    std::set<Partition> rows;
    for (const auto& [mu, v] : f.values) {
        for (IndexMask plus = 0; plus <= all; ++plus) {
            if (mask_size(plus) > l) continue;
            detail::for_each_submask(all & ~plus, [&](IndexMask minus) {
                if (mask_size(plus) + mask_size(minus) > l) return;
                if (auto lam = detail::shifted(mu, minus, plus)) rows.insert(*lam);
            });
        }
    }

    LatticeFunction<T> out(n);
    for (const Partition& lambda : rows) {
        T value(0);
        for (const HopTerm& h : hl_stencil(l, lambda, p)) {
            auto it = f.values.find(h.target);
            if (it != f.values.end()) value += scalar_from<T>(h.coefficient) * it->second;
        }
        if (!is_exact_zero(value)) out.values.emplace(lambda, value);
    }
    return out;
}

/// eps_0 = sum_j (that_0 t^{n-j} + that_0^{-1} t^{j-n}).
inline Rational epsilon0(const ParamSet& p, int n) {
    Rational e(0);
    for (int j = 1; j <= n; ++j) e += p.that(0) * rpow(p.t(), n - j) + rpow(p.t(), j - n) / p.that(0);
    return e;
}

/// (H_l H_m - H_m H_l) delta_{lambda0}; identically zero for commuting integrals.
inline LatticeFunction<Rational> commutator_on_delta(int l, int m, const Partition& lambda0,
                                                     const ParamSet& p) {
    const auto delta = LatticeFunction<Rational>::delta(lambda0);
    auto lm = apply_Hl(l, apply_Hl(m, delta, p), p);
    const auto ml = apply_Hl(m, apply_Hl(l, delta, p), p);
    for (const auto& [mu, v] : ml.values) lm.add(mu, -v);
    lm.prune();
    return lm;
}

// ---------------------------------------------------------------------------
// Limit checks

struct LimitMismatch {
    Partition lambda;
    int site = -1;  // -1 for the diagonal
    std::string what;
    Rational lhs, rhs;
};

struct MorseLimitReport {
    std::size_t checked = 0;
    std::vector<LimitMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
};

/// At that_2 = 0, compares H's hop and diagonal coefficients with
///   up:   that_0^{-1} (1 - that_0 that_1 X_j) prod_{k!=j} (t^{-1} - X_j/X_k)/(1 - X_j/X_k)
///   down: that_0 (1 - X_j) prod_{k!=j} (t - X_j/X_k)/(1 - X_j/X_k)
///   diag: (that_0 + that_1) sum_j X_j - eps_0
/// for every lambda with n parts and weight <= max_weight.
inline MorseLimitReport morse_vanishing_limit_check(const ParamSet& p, int n, int max_weight) {
    if (!p.morse_vanishing())
        throw std::invalid_argument("morse_vanishing_limit_check needs parameters with that_2 = 0");
    const Rational& t = p.t();
    const Rational& q = p.q();
    const Rational& h0 = p.that(0);
    const Rational& h1 = p.that(1);
    const Rational eps0 = epsilon0(p, n);

    MorseLimitReport report;
    for (const Partition& lambda : partitions_up_to(n, max_weight)) {
        // q^{x_j - x_k} = t^{k-j} q^{lambda_j - lambda_k}, written out directly.
        auto rel = [&](int j, int k) -> Rational { return rpow(t, k - j) * rpow(q, lambda[j] - lambda[k]); };
        Rational diag(0), x_sum(0);
        for (int j = 0; j < n; ++j) {
            const Rational xj = rpow(t, n - 1 - j) * rpow(q, lambda[j]);
            x_sum += xj;
            Rational up = (1 - h0 * h1 * xj) / h0, down = h0 * (1 - xj);
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                up *= (1 / t - rel(j, k)) / (1 - rel(j, k));
                down *= (t - rel(j, k)) / (1 - rel(j, k));
            }
            const Rational vp = v_plus(lambda, j, p), vm = v_minus(lambda, j, p);
            diag -= vp + vm;
            report.checked += 2;
            if (vp != up) report.mismatches.push_back({lambda, j, "up-hop", vp, up});
            if (vm != down) report.mismatches.push_back({lambda, j, "down-hop", vm, down});
        }
        const Rational expected = (h0 + h1) * x_sum - eps0;
        ++report.checked;
        if (diag != expected) report.mismatches.push_back({lambda, -1, "diagonal", diag, expected});
    }
    return report;
}

/// Both sides of sum_j (1 + z_j) prod_{k!=j} (t - z_j/z_k)/(1 - z_j/z_k) = sum_j (z_j + t^{n-j}).
template <class T>
std::pair<T, T> elementary_identity_sides(std::span<const T> z, const T& t) {
    const int n = static_cast<int>(z.size());
    T lhs(0), rhs(0);
    for (int j = 0; j < n; ++j) {
        T term = T(1) + z[static_cast<std::size_t>(j)];
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const T r = z[static_cast<std::size_t>(j)] / z[static_cast<std::size_t>(k)];
            if (is_exact_zero(T(T(1) - r))) throw PoleError("elementary identity: coinciding variables");
            term *= (t - r) / (T(1) - r);
        }
        lhs += term;
        T tp(1);
        for (int e = 0; e < n - 1 - j; ++e) tp *= t;
        rhs += z[static_cast<std::size_t>(j)] + tp;
    }
    return {lhs, rhs};
}

/// Unnormalised Morse couplings (t0, t1, t2, t3) in floating point.
struct GenericCouplings {
    double q = 0, t = 0;
    double t0 = 0, t1 = 0, t2 = 0, t3 = 1;
};

/// w_+(x) = sqrt(q t0 t3 / (t1 t2)) (1 - t1 q^x)(1 - t2 q^x), given qx = q^x.
inline double w_plus(double qx, const GenericCouplings& c) {
    return std::sqrt(c.q * c.t0 * c.t3 / (c.t1 * c.t2)) * (1 - c.t1 * qx) * (1 - c.t2 * qx);
}

/// w_-(x) = sqrt(t1 t2 / (q t0 t3)) (1 - t0 q^x)(1 - t3 q^x).
inline double w_minus(double qx, const GenericCouplings& c) {
    return std::sqrt(c.t1 * c.t2 / (c.q * c.t0 * c.t3)) * (1 - c.t0 * qx) * (1 - c.t3 * qx);
}

struct RuijsenaarsLimitReport {
    double eps_a = 0, eps_b = 0;
    double err_a = 0, err_b = 0;  // max |w_pm(x_j) - t^{pm(n-1)/2}|
    double product_err_b = 0;     // max |w_+ w_- - 1| at eps_b
    double ratio() const { return err_a / err_b; }
    /// err_a / err_b within rel_tol of eps_a / eps_b.
    bool shrinks_linearly(double rel_tol = 0.1) const {
        const double expected = eps_a / eps_b;
        return std::abs(ratio() - expected) <= rel_tol * expected;
    }
};

/// Sets t0 = eps t^{n-1}/q and t1 = t2 = t3 = eps and measures how far the
/// one-body factors are from t^{pm(n-1)/2} over all lambda with weight <= max_weight.
inline RuijsenaarsLimitReport ruijsenaars_limit_check(int n, double q, double t, double eps_a,
                                                      double eps_b, int max_weight = 4) {
    if (!(q > 0 && q < 1 && t > 0 && t < 1)) throw DomainError("ruijsenaars_limit_check: q,t must lie in (0,1)");
    const auto sites = partitions_up_to(n, max_weight);
    auto measure = [&](double eps, double* product_err) {
        GenericCouplings c{q, t, eps * std::pow(t, n - 1) / q, eps, eps, eps};
        const double target_plus = std::pow(t, 0.5 * (n - 1));
        const double target_minus = std::pow(t, -0.5 * (n - 1));
        double err = 0, perr = 0;
        for (const Partition& lambda : sites) {
            for (int j = 0; j < n; ++j) {
                const double qx = std::pow(t, n - 1 - j) * std::pow(q, lambda[j]);
                const double wp = w_plus(qx, c), wm = w_minus(qx, c);
                err = std::max({err, std::abs(wp - target_plus), std::abs(wm - target_minus)});
                perr = std::max(perr, std::abs(wp * wm - 1.0));
            }
        }
        if (product_err) *product_err = perr;
        return err;
    };
    RuijsenaarsLimitReport r;
    r.eps_a = eps_a;
    r.eps_b = eps_b;
    r.err_a = measure(eps_a, nullptr);
    r.err_b = measure(eps_b, &r.product_err_b);
    return r;
}

}  // namespace rsmorse
