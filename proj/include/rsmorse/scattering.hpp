#pragma once

// Factorized scattering matrix, its square-root branches, the free
// anti-invariant kernel and the discrete Laplacian on the cone.

#include "rsmorse/combinatorics.hpp"
#include "rsmorse/latticeop.hpp"
#include "rsmorse/qcore.hpp"
#include "rsmorse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

namespace rsmorse {

class BranchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline Complex qp(Complex x, double q, double tol) { return qpoch_infinite(x, Complex(q), tol); }
inline Complex eix(double x) { return std::polar(1.0, x); }

inline Complex unit(Complex z, const char* where) {
    const double a = std::abs(z);
    if (a < 1e-300) throw BranchError(std::string(where) + ": vanishing modulus");
    return z / a;
}
}  // namespace detail

/// s(x) = (q e^{ix}, t e^{-ix})_inf / (q e^{-ix}, t e^{ix})_inf.
inline Complex s_pair(double x, const FloatParams& p, double tol = kDefaultTol) {
    using detail::eix;
    using detail::qp;
    return qp(p.q * eix(x), p.q, tol) * qp(p.t * eix(-x), p.q, tol) /
           (qp(p.q * eix(-x), p.q, tol) * qp(p.t * eix(x), p.q, tol));
}

/// s_0(x) = (q e^{2ix})_inf / (q e^{-2ix})_inf prod_r (that_r e^{-ix})_inf / (that_r e^{ix})_inf.
inline Complex s_one(double x, const FloatParams& p, double tol = kDefaultTol) {
    using detail::eix;
    using detail::qp;
    Complex v = qp(p.q * eix(2 * x), p.q, tol) / qp(p.q * eix(-2 * x), p.q, tol);
    for (double h : p.that) v *= qp(h * eix(-x), p.q, tol) / qp(h * eix(x), p.q, tol);
    return v;
}

/// prod_{j<k} s(xi_j - xi_k) s(xi_j + xi_k) prod_j s_0(xi_j), at any real xi.
inline Complex S_hat(std::span<const double> xi, const FloatParams& p, double tol = kDefaultTol) {
    Complex v(1);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        v *= s_one(xi[j], p, tol);
        for (std::size_t k = j + 1; k < xi.size(); ++k) v *= s_pair(xi[j] - xi[k], p, tol) * s_pair(xi[j] + xi[k], p, tol);
    }
    return v;
}

inline Complex S_hat(const AlcovePoint& xi, const FloatParams& p, double tol = kDefaultTol) {
    return S_hat(xi.coords(), p, tol);
}

/// s(x)^{1/2} = (q e^{ix})/|(q e^{ix})| * |(t e^{ix})|/(t e^{ix}).
inline Complex sqrt_branch_s(double x, const FloatParams& p, double tol = kDefaultTol) {
    using detail::eix;
    using detail::qp;
    return detail::unit(qp(p.q * eix(x), p.q, tol), "sqrt_branch_s") /
           detail::unit(qp(p.t * eix(x), p.q, tol), "sqrt_branch_s");
}

/// s_0(x)^{1/2} = (q e^{2ix})/|(q e^{2ix})| prod_r |(that_r e^{ix})|/(that_r e^{ix}).
inline Complex sqrt_branch_s0(double x, const FloatParams& p, double tol = kDefaultTol) {
    using detail::eix;
    using detail::qp;
    Complex v = detail::unit(qp(p.q * eix(2 * x), p.q, tol), "sqrt_branch_s0");
    for (double h : p.that) v /= detail::unit(qp(h * eix(x), p.q, tol), "sqrt_branch_s0");
    return v;
}

/// chi_xi(lambda) = (2 pi)^{-n/2} i^{-n^2} sum_w sign(w) e^{i <w(rho_0 + lambda), xi>},
/// rho_0 = (n, ..., 1).
inline Complex chi(std::span<const double> xi, const Partition& lambda) {
    const int n = lambda.size();
    if (static_cast<int>(xi.size()) != n) throw std::invalid_argument("chi: dimension mismatch");
    std::vector<double> shifted(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) shifted[static_cast<std::size_t>(j)] = n - j + lambda[j];
    // Sum over the signs factorizes: sum_eps prod eps_i e^{i eps_i a_i} = prod 2i sin(a_i).
    // The remaining sum over S_n is a determinant of sines.
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = std::sin(shifted[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(i)]);
    const Complex twoi_n = std::pow(Complex(0, 2), n);
    const Complex i_n2 = std::pow(Complex(0, 1), n * n);
    return twoi_n * S.determinant() / (std::pow(2 * std::numbers::pi, n / 2.0) * i_n2);
}

inline Complex chi(const AlcovePoint& xi, const Partition& lambda) { return chi(xi.coords(), lambda); }

/// The literal group sum; used to cross-check the determinant form.
inline Complex chi_group_sum(std::span<const double> xi, const Partition& lambda) {
    const int n = lambda.size();
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = n - j + lambda[j];
    Complex total(0);
    for (const auto& w : hyperoctahedral_group(n)) {
        const auto wv = w.apply<double>(v);
        double phase = 0;
        for (int j = 0; j < n; ++j) phase += wv[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
        total += static_cast<double>(w.sign()) * std::polar(1.0, phase);
    }
    return total / (std::pow(2 * std::numbers::pi, n / 2.0) * std::pow(Complex(0, 1), n * n));
}

/// (H_0 f)(lambda) = sum over admissible lambda +- e_j of f(lambda +- e_j).
template <class T>
LatticeFunction<T> apply_H0(const LatticeFunction<T>& f) {
    const int n = f.n;
    std::set<Partition> rows;
    for (const auto& [mu, v] : f.values)
        for (int j = 0; j < n; ++j) {
            const IndexMask e = IndexMask(1) << j;
            if (auto a = detail::shifted(mu, e, 0)) rows.insert(*a);
            if (auto b = detail::shifted(mu, 0, e)) rows.insert(*b);
        }
    LatticeFunction<T> out(n);
    for (const auto& lambda : rows) {
        T value(0);
        for (int j = 0; j < n; ++j) {
            const IndexMask e = IndexMask(1) << j;
            if (auto a = detail::shifted(lambda, e, 0)) value += f.at(*a);
            if (auto b = detail::shifted(lambda, 0, e)) value += f.at(*b);
        }
        if (!is_exact_zero(value)) out.values.emplace(lambda, value);
    }
    return out;
}

struct ScatterPoint {
    std::vector<double> xi;
    bool regular = false;
    SignedPermutation w;       // meaningful when regular
    std::vector<double> w_xi;  // w applied to xi
};

/// Regularity of xi and the signed permutation w with w grad Ehat(xi)
/// positive and strictly decreasing, grad Ehat = (-2 sin xi_j).
inline ScatterPoint sorting_permutation(const AlcovePoint& xi, double tie_tol = 1e-12) {
    const int n = xi.size();
    ScatterPoint sp;
    sp.xi.assign(xi.coords().begin(), xi.coords().end());
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = -2 * std::sin(xi[j]);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(g[static_cast<std::size_t>(a)]) > std::abs(g[static_cast<std::size_t>(b)]);
    });
    sp.regular = true;
    for (int i = 0; i < n; ++i) {
        const double gi = std::abs(g[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
        if (gi <= tie_tol) sp.regular = false;
        if (i > 0 && std::abs(g[static_cast<std::size_t>(order[static_cast<std::size_t>(i - 1)])]) - gi <= tie_tol)
            sp.regular = false;
    }
    if (!sp.regular) return sp;
    sp.w.perm = order;
    sp.w.signs.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sp.w.signs[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] > 0 ? 1 : -1;
    sp.w_xi = sp.w.apply<double>(sp.xi);
    return sp;
}

/// S_hat(w_xi xi), the symbol of the scattering multiplication operator.
/// Irregular points are rejected.
inline Complex scattering_symbol(const ScatterPoint& sp, const FloatParams& p, double tol = kDefaultTol) {
    if (!sp.regular) throw DomainError("scattering_symbol: point is not regular");
    return S_hat(std::span<const double>(sp.w_xi), p, tol);
}

}  // namespace rsmorse
