#pragma once

// Multivariate continuous dual q-Hahn polynomials P_lambda, built as the
// triangular eigenbasis of the dual operator Hhat_1 in the monomial basis.

#include "rsmorse/combinatorics.hpp"
#include "rsmorse/dualop.hpp"
#include "rsmorse/latticeop.hpp"
#include "rsmorse/qcore.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsmorse {

/// Coefficient of m_lambda in P_lambda.
inline Rational leading_coeff(const Partition& lambda, const ParamSet& p) {
    const int n = lambda.size();
    const Rational& t = p.t();
    const Rational& q = p.q();
    Rational c(1);
    for (int j = 1; j <= n; ++j) {
        const int lj = lambda[j - 1];
        const Rational tj = rpow(t, n - j);
        const Rational den = qpoch_finite(p.that(0) * p.that(1) * tj, lj, q) *
                             qpoch_finite(p.that(0) * p.that(2) * tj, lj, q);
        if (sgn(den) == 0) throw DegeneracyError("leading_coeff: vanishing Pochhammer at " + lambda.str());
        c *= rpow(p.that(0), lj) * rpow(tj, lj) / den;
    }
    for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
            const int d = lambda[j - 1] - lambda[k - 1];
            const Rational den = qpoch_finite(rpow(t, 1 + k - j), d, q);
            if (sgn(den) == 0) throw DegeneracyError("leading_coeff: vanishing Pochhammer at " + lambda.str());
            c *= qpoch_finite(rpow(t, k - j), d, q) / den;
        }
    return c;
}

/// The point i*rho_hat, i.e. z_j = 1 / (t^{n-j} that_0).
inline std::vector<Rational> normalization_point(int n, const ParamSet& p) {
    std::vector<Rational> z;
    for (int j = 1; j <= n; ++j) z.push_back(1 / (rpow(p.t(), n - j) * p.that(0)));
    return z;
}

struct QHahnPolynomial {
    Partition label;
    InvariantPolynomial poly;

    const std::map<Partition, Rational>& coeffs() const { return poly.coeffs; }
    Rational coeff(const Partition& mu) const { return poly.coeff(mu); }

    template <class T>
    T evaluate(std::span<const T> z) const {
        return poly.evaluate(z);
    }
    template <class T>
    T evaluate(const std::vector<T>& z) const {
        return poly.evaluate(std::span<const T>(z));
    }
};

/// P_lambda from a Hhat_1 matrix whose basis contains the ideal of lambda.
inline QHahnPolynomial build_P_from_matrix(const Partition& lambda, const TriangularMatrix& M,
                                           const ParamSet& p) {
    if (!M.structurally_sound()) throw StructureError("build_P: dual operator matrix is not triangular");
    const std::size_t top = M.index_of(lambda);
    const Rational E = M.entries(top, top);

    // u_lambda = 1; (E - c_nu,nu) u_nu = sum_{mu > nu} u_mu c_mu,nu, descending.
    std::map<std::size_t, Rational> u;
    u.emplace(top, Rational(1));
    for (std::size_t i = top; i-- > 0;) {
        const Partition& nu = M.basis[i];
        if (!dominance_leq(nu, lambda)) continue;
        Rational rhs(0);
        for (const auto& [r, ur] : u)
            if (sgn(M.entries(r, i)) != 0) rhs += ur * M.entries(r, i);
        const Rational gap = E - M.entries(i, i);
        if (sgn(gap) == 0)
            throw DegeneracyError("build_P: eigenvalue collision between " + nu.str() + " and " + lambda.str());
        if (sgn(rhs) != 0) u.emplace(i, rhs / gap);
    }

    const Rational scale = leading_coeff(lambda, p);
    QHahnPolynomial P{lambda, InvariantPolynomial(lambda.size())};
    for (const auto& [i, ui] : u) P.poly.coeffs.emplace(M.basis[i], ui * scale);
    return P;
}

inline QHahnPolynomial build_P(const Partition& lambda, const ParamSet& p, std::uint64_t seed = 0) {
    return build_P_from_matrix(lambda, matrix_in_monomial_basis(1, lambda, p, seed), p);
}

/// All P_lambda with |lambda| <= max_weight for fixed (n, params), sharing a
/// single Hhat_1 matrix over the partitions of weight <= max_weight.
/// Readers share the cache; growth takes an exclusive lock.
class QHahnFamily {
public:
    QHahnFamily(ParamSet params, int n, int max_weight = 0, std::uint64_t seed = 0)
        : params_(std::move(params)), n_(n), seed_(seed) {
        if (n < 1) throw std::invalid_argument("QHahnFamily: n must be positive");
        if (max_weight > 0) reserve(max_weight);
    }

    const ParamSet& params() const noexcept { return params_; }
    int n() const noexcept { return n_; }

    /// Ensures every partition of weight <= w is available.
    void reserve(int w) {
        {
            std::shared_lock lock(mutex_);
            if (matrix_ && covered_ >= w) return;
        }
        std::unique_lock lock(mutex_);
        if (matrix_ && covered_ >= w) return;
        std::vector<int> parts(static_cast<std::size_t>(n_), 0);
        parts[0] = w;
        matrix_ = std::make_shared<TriangularMatrix>(matrix_in_monomial_basis(1, Partition(parts), params_, seed_));
        covered_ = w;
        cache_.clear();
    }

    const QHahnPolynomial& get(const Partition& lambda) {
        if (lambda.size() != n_) throw std::invalid_argument("QHahnFamily: partition has wrong length");
        reserve(lambda.weight());
        {
            std::shared_lock lock(mutex_);
            if (auto it = cache_.find(lambda); it != cache_.end()) return *it->second;
        }
        std::unique_lock lock(mutex_);
        if (auto it = cache_.find(lambda); it != cache_.end()) return *it->second;
        auto P = std::make_unique<QHahnPolynomial>(build_P_from_matrix(lambda, *matrix_, params_));
        return *cache_.emplace(lambda, std::move(P)).first->second;
    }

    std::shared_ptr<const TriangularMatrix> matrix() const {
        std::shared_lock lock(mutex_);
        return matrix_;
    }

private:
    ParamSet params_;
    int n_;
    std::uint64_t seed_;
    int covered_ = -1;
    std::shared_ptr<TriangularMatrix> matrix_;
    std::map<Partition, std::unique_ptr<QHahnPolynomial>> cache_;
    mutable std::shared_mutex mutex_;
};

template <class T>
T evaluate_P(const QHahnPolynomial& P, std::span<const T> z) {
    return P.evaluate(z);
}

/// (H_l psi_xi)(rho+lambda) - Ehat_l(xi) psi_xi(rho+lambda) with
/// e^{i xi_j} = z_j, so cos xi_j = (z_j + 1/z_j)/2.
inline Rational pieri_residual(const Partition& lambda, int l, std::span<const Rational> z, QHahnFamily& family) {
    const ParamSet& p = family.params();
    std::vector<Rational> cosines;
    for (const auto& zj : z) {
        if (sgn(zj) == 0) throw DomainError("pieri_residual: zero coordinate");
        cosines.push_back((zj + 1 / zj) / 2);
    }
    Rational lhs(0);
    for (const HopTerm& h : hl_stencil(l, lambda, p))
        if (sgn(h.coefficient) != 0) lhs += h.coefficient * family.get(h.target).evaluate(z);
    const Rational rhs = eval_Ehat_l_from_cos<Rational>(l, cosines, p) * family.get(lambda).evaluate(z);
    return lhs - rhs;
}

/// Hhat_l P_lambda - E_{lambda,l} P_lambda.
inline InvariantPolynomial dual_eigen_residual(const QHahnPolynomial& P, int l, const ParamSet& p,
                                               std::uint64_t seed = 0) {
    auto image = apply_Hhat_l(l, P.poly, p, seed);
    const Rational E = eval_E_l(P.label, l, p);
    for (const auto& [mu, c] : P.poly.coeffs) image.coeffs[mu] -= E * c;
    image.prune();
    return image;
}

}  // namespace rsmorse
