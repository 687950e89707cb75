#pragma once

// Spectral side: the weight on the alcove, the norms Delta_lambda,
// quadrature-based orthogonality, the Fourier pair, and the conjugated
// Hamiltonian with its truncated dynamics.

#include "rsmorse/combinatorics.hpp"
#include "rsmorse/latticeop.hpp"
#include "rsmorse/polynomials.hpp"
#include "rsmorse/qcore.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsmorse {

/// Parameters in floating point; unlike ParamSet these may sit on the
/// boundary (q = 0, that_r = 0) for limit checks.
struct FloatParams {
    double q = 0, t = 0;
    std::array<double, 3> that{};

    static FloatParams from(const ParamSet& p) { return {p.qd(), p.td(), {p.thatd(0), p.thatd(1), p.thatd(2)}}; }
};

/// A point of the open alcove pi > xi_1 > ... > xi_n > 0.
class AlcovePoint {
public:
    explicit AlcovePoint(std::vector<double> xi) : xi_(std::move(xi)) {
        if (xi_.empty()) throw DomainError("AlcovePoint: empty");
        double prev = std::numbers::pi;
        for (double x : xi_) {
            if (!(x < prev)) throw DomainError("AlcovePoint: coordinates must satisfy pi > xi_1 > ... > xi_n > 0");
            prev = x;
        }
        if (!(prev > 0)) throw DomainError("AlcovePoint: coordinates must satisfy pi > xi_1 > ... > xi_n > 0");
    }
    std::span<const double> coords() const noexcept { return xi_; }
    int size() const noexcept { return static_cast<int>(xi_.size()); }
    double operator[](int j) const { return xi_[static_cast<std::size_t>(j)]; }

private:
    std::vector<double> xi_;
};

// ---------------------------------------------------------------------------
// Weight and norms

namespace detail {
inline double qpoch_abs2(Complex x, double q, double tol) {
    return std::norm(qpoch_infinite(x, Complex(q), tol));
}
}  // namespace detail

/// Delta_hat at any real xi (no alcove check). Zero on the walls.
inline double weight_unchecked(std::span<const double> xi, const FloatParams& p, double tol = kDefaultTol) {
    const int n = static_cast<int>(xi.size());
    auto e = [](double a) { return std::polar(1.0, a); };
    double w = std::pow(2 * std::numbers::pi, -n);
    for (int j = 0; j < n; ++j) {
        const double xj = xi[static_cast<std::size_t>(j)];
        double den = 1;
        for (double h : p.that) den *= detail::qpoch_abs2(h * e(xj), p.q, tol);
        w *= detail::qpoch_abs2(e(2 * xj), p.q, tol) / den;
        for (int k = j + 1; k < n; ++k) {
            const double xk = xi[static_cast<std::size_t>(k)];
            w *= detail::qpoch_abs2(e(xj + xk), p.q, tol) * detail::qpoch_abs2(e(xj - xk), p.q, tol) /
                 (detail::qpoch_abs2(p.t * e(xj + xk), p.q, tol) * detail::qpoch_abs2(p.t * e(xj - xk), p.q, tol));
        }
    }
    return w;
}

inline double weight(const AlcovePoint& xi, const FloatParams& p, double tol = kDefaultTol) {
    return weight_unchecked(xi.coords(), p, tol);
}

inline double weight(const AlcovePoint& xi, const ParamSet& p, double tol = kDefaultTol) {
    return weight(xi, FloatParams::from(p), tol);
}

/// Delta_lambda / Delta_0, exact.
inline Rational norm_ratio(const Partition& lambda, const ParamSet& p) {
    const int n = lambda.size();
    const Rational& t = p.t();
    const Rational& q = p.q();
    const Rational &h0 = p.that(0), &h1 = p.that(1), &h2 = p.that(2);
    Rational num(1), den(1);
    for (int j = 1; j <= n; ++j) {
        const int lj = lambda[j - 1];
        const Rational tj = rpow(t, n - j);
        num *= qpoch_finite(h0 * h1 * tj, lj, q) * qpoch_finite(h0 * h2 * tj, lj, q);
        den *= rpow(h0, 2 * lj) * rpow(tj, 2 * lj) * qpoch_finite(q * tj, lj, q) * qpoch_finite(h1 * h2 * tj, lj, q);
    }
    for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
            const int d = lambda[j - 1] - lambda[k - 1];
            const Rational tkj = rpow(t, k - j);
            num *= (1 - tkj * rpow(q, d)) * qpoch_finite(rpow(t, 1 + k - j), d, q);
            den *= (1 - tkj) * qpoch_finite(q * rpow(t, k - j - 1), d, q);
        }
    if (sgn(den) == 0) throw DegeneracyError("norm_ratio: vanishing denominator at " + lambda.str());
    return num / den;
}

inline double delta0(const ParamSet& p, int n, double tol = kDefaultTol) {
    const double q = p.qd(), t = p.td();
    const std::array<double, 3> h{p.thatd(0), p.thatd(1), p.thatd(2)};
    double d = 1;
    for (int j = 1; j <= n; ++j) {
        const double tnj = std::pow(t, n - j);
        d *= qpoch_infinite(q, q, tol) * qpoch_infinite(std::pow(t, j), q, tol) / qpoch_infinite(t, q, tol);
        for (int r = 0; r < 3; ++r)
            for (int s = r + 1; s < 3; ++s) d *= qpoch_infinite(h[static_cast<std::size_t>(r)] * h[static_cast<std::size_t>(s)] * tnj, q, tol);
    }
    return d;
}

struct NormValue {
    Rational ratio;
    double delta0 = 0;
    double value() const { return delta0 * ratio.get_d(); }
};

inline NormValue norm_Delta(const Partition& lambda, const ParamSet& p, double tol = kDefaultTol) {
    return {norm_ratio(lambda, p), delta0(p, lambda.size(), tol)};
}

// ---------------------------------------------------------------------------
// Quadrature

struct QuadSpec {
    int nodes = 0;  // per axis; 0 selects the default for n
    bool allow_high_rank = false;
    double tol = kDefaultTol;

    int nodes_for(int n) const {
        if (n > 2 && !allow_high_rank)
            throw std::invalid_argument("quadrature for n > 2 is disabled by default; set allow_high_rank");
        if (nodes > 0) return nodes;
        return n == 1 ? 200 : n == 2 ? 120 : 40;
    }
};

/// Gauss-Legendre nodes and weights on [a, b].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m, double a, double b) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    const auto zeros = boost::math::legendre_p_zeros<double>(m);
    std::vector<double> x, w;
    const double half = (b - a) / 2, mid = (a + b) / 2;
    for (double r : zeros) {
        const double d = boost::math::legendre_p_prime<double>(m, r);
        const double wt = 2 / ((1 - r * r) * d * d) * half;
        x.push_back(mid + half * r);
        w.push_back(wt);
        if (r != 0) {
            x.push_back(mid - half * r);
            w.push_back(wt);
        }
    }
    return {x, w};
}

struct GramEntry {
    Partition lambda, mu;
    double value = 0;
    double target = 0;
    double abs_err = 0;
    double rel_err = 0;
};

/// Quadrature context for one family: caches Delta_0, the tensor grid with
/// the weight folded in, and polynomial values on the grid.
class Spectrum {
public:
    struct Node {
        std::vector<double> xi;
        double measure;  // GL weight * Delta_hat(xi) / n!
    };

    Spectrum(QHahnFamily& family, QuadSpec spec = {})
        : family_(family), spec_(spec), delta0_(delta0(family.params(), family.n(), spec.tol)) {}

    int n() const { return family_.n(); }
    const ParamSet& params() const { return family_.params(); }
    double delta0_value() const noexcept { return delta0_; }

    double norm(const Partition& lambda) const { return delta0_ * norm_ratio(lambda, params()).get_d(); }

    const std::vector<Node>& grid() {
        std::call_once(grid_once_, [&] { build_grid(); });
        return grid_;
    }

    /// P_lambda on the grid (real for real xi).
    const std::vector<double>& values(const Partition& lambda) {
        const auto& g = grid();
        {
            std::shared_lock lock(mutex_);
            if (auto it = values_.find(lambda); it != values_.end()) return it->second;
        }
        const auto& P = family_.get(lambda);
        std::vector<double> out;
        out.reserve(g.size());
        for (const auto& node : g) out.push_back(real_value(P, node.xi));
        std::unique_lock lock(mutex_);
        return values_.try_emplace(lambda, std::move(out)).first->second;
    }

    /// integral over the alcove of f(xi) Delta_hat(xi).
    template <class F>
    Complex integrate(F&& f) {
        Complex total(0);
        for (const auto& node : grid()) total += node.measure * Complex(f(std::span<const double>(node.xi)));
        return total;
    }

    GramEntry gram(const Partition& lambda, const Partition& mu) {
        const auto& a = values(lambda);
        const auto& b = values(mu);
        const auto& g = grid();
        double s = 0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g[i].measure * a[i] * b[i];
        GramEntry e{lambda, mu, s, 0, 0, 0};
        const double nl = norm(lambda), nm = norm(mu);
        if (lambda == mu) {
            e.target = 1 / nl;
            e.abs_err = std::abs(s - e.target);
            e.rel_err = e.abs_err / e.target;
        } else {
            e.abs_err = std::abs(s);
            e.rel_err = e.abs_err / (1 / std::sqrt(nl * nm));
        }
        return e;
    }

    /// (F f)(xi) = sum_lambda f(lambda) conj(P_lambda(xi)) Delta_lambda.
    template <class T>
    Complex fourier_forward(const LatticeFunction<T>& f, std::span<const double> xi) {
        Complex total(0);
        for (const auto& [lambda, v] : f.values)
            total += Complex(to_complex(v)) * real_value(family_.get(lambda), xi) * norm(lambda);
        return total;
    }

    /// (F^{-1} fhat)(lambda) by quadrature over the alcove.
    template <class F>
    Complex fourier_inverse(F&& fhat, const Partition& lambda) {
        const auto& pv = values(lambda);
        const auto& g = grid();
        Complex total(0);
        for (std::size_t i = 0; i < g.size(); ++i)
            total += g[i].measure * Complex(fhat(std::span<const double>(g[i].xi))) * pv[i];
        return total;
    }

    /// Quadrature of the roundtrip F^{-1} F f at the given labels.
    template <class T>
    LatticeFunction<Complex> roundtrip(const LatticeFunction<T>& f, const std::vector<Partition>& labels) {
        const auto& g = grid();
        std::vector<Complex> fhat(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) fhat[i] = fourier_forward(f, g[i].xi);
        LatticeFunction<Complex> out(n());
        for (const auto& lambda : labels) {
            const auto& pv = values(lambda);
            Complex s(0);
            for (std::size_t i = 0; i < g.size(); ++i) s += g[i].measure * fhat[i] * pv[i];
            out.values.emplace(lambda, s);
        }
        return out;
    }

private:
    template <class T>
    static Complex to_complex(const T& v) {
        if constexpr (std::is_same_v<T, Rational>) return Complex(v.get_d());
        else return Complex(v);
    }

    static double real_value(const QHahnPolynomial& P, std::span<const double> xi) {
        double total = 0;
        for (const auto& [mu, c] : P.coeffs()) {
            double m = 0;
            for (const auto& nu : orbit(mu)) {
                double phase = 0;
                for (std::size_t j = 0; j < nu.size(); ++j) phase += nu[j] * xi[j];
                m += std::cos(phase);
            }
            total += c.get_d() * m;
        }
        return total;
    }

    void build_grid() {
        const int n = family_.n();
        const int m = spec_.nodes_for(n);
        const auto [x, w] = gauss_legendre(m, 0.0, std::numbers::pi);
        const FloatParams fp = FloatParams::from(params());
        double fact = 1;
        for (int k = 2; k <= n; ++k) fact *= k;
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        const std::size_t M = x.size();
        for (;;) {
            Node node{std::vector<double>(static_cast<std::size_t>(n)), 1.0 / fact};
            for (int j = 0; j < n; ++j) {
                node.xi[static_cast<std::size_t>(j)] = x[idx[static_cast<std::size_t>(j)]];
                node.measure *= w[idx[static_cast<std::size_t>(j)]];
            }
            node.measure *= weight_unchecked(node.xi, fp, spec_.tol);
            grid_.push_back(std::move(node));
            int j = n - 1;
            while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == M) idx[static_cast<std::size_t>(j--)] = 0;
            if (j < 0) break;
        }
    }

    QHahnFamily& family_;
    QuadSpec spec_;
    double delta0_;
    std::once_flag grid_once_;
    std::vector<Node> grid_;
    std::map<Partition, std::vector<double>> values_;
    mutable std::shared_mutex mutex_;
};

// ---------------------------------------------------------------------------
// Conjugated Hamiltonian Delta^{1/2} (H_l + eps_0 [l=1]) Delta^{-1/2}

struct ConjugatedMatrix {
    std::vector<Partition> basis;
    Eigen::MatrixXd matrix;
    /// Pairs (lambda, mu) whose entries fail exact symmetry.
    std::vector<std::pair<Partition, Partition>> asymmetric;
    /// Stencil terms whose target lies beyond the cutoff.
    std::size_t dropped = 0;

    bool exactly_symmetric() const { return asymmetric.empty(); }
    std::size_t index_of(const Partition& mu) const {
        auto it = std::lower_bound(basis.begin(), basis.end(), mu, graded_less);
        if (it == basis.end() || *it != mu) throw std::out_of_range("ConjugatedMatrix: " + mu.str() + " outside cutoff");
        return static_cast<std::size_t>(it - basis.begin());
    }
};

/// Matrix on {lambda : |lambda| <= cutoff}. The entry for lambda <- mu is
/// c_{lambda mu} sqrt(r_lambda / r_mu) with r the exact norm ratios, so
/// Delta_0 cancels; symmetry is decided exactly on squared entries.
inline ConjugatedMatrix conjugated_H_matrix(int l, int cutoff, const ParamSet& p, int n) {
    if (cutoff < 0) throw std::invalid_argument("conjugated_H_matrix: negative cutoff");
    ConjugatedMatrix out;
    out.basis = partitions_up_to(n, cutoff);
    const std::size_t N = out.basis.size();
    std::vector<Rational> r;
    r.reserve(N);
    for (const auto& b : out.basis) r.push_back(norm_ratio(b, p));

    std::vector<std::map<std::size_t, Rational>> exact(N);
    for (std::size_t i = 0; i < N; ++i) {
        for (const auto& h : hl_stencil(l, out.basis[i], p)) {
            if (sgn(h.coefficient) == 0) continue;
            if (h.target.weight() > cutoff) {
                ++out.dropped;
                continue;
            }
            exact[i][out.index_of(h.target)] += h.coefficient;
        }
        if (l == 1) exact[i][i] += epsilon0(p, n);
    }

    out.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i)
        for (const auto& [j, c] : exact[i]) {
            const double v = c.get_d() * std::sqrt(Rational(r[i] / r[j]).get_d());
            out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            if (j <= i) continue;
            auto back = exact[j].find(i);
            const Rational cb = back == exact[j].end() ? Rational(0) : back->second;
            const bool same = sgn(c) == sgn(cb) && c * c * r[i] / r[j] == cb * cb * r[j] / r[i];
            if (!same) out.asymmetric.emplace_back(out.basis[i], out.basis[j]);
        }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (exact[i].count(j) == 0 && exact[j].count(i) != 0) out.asymmetric.emplace_back(out.basis[i], out.basis[j]);
    return out;
}

struct EvolutionResult {
    LatticeFunction<Complex> state;
    double initial_norm = 0;
    double norm = 0;
    /// Probability on the outermost shell |lambda| = cutoff.
    double leakage = 0;
    bool truncation_warning = false;
};

/// e^{i t H} on the truncated lattice via one dense symmetric eigensolve.
class Evolver {
public:
    Evolver(const ParamSet& p, int n, int cutoff, double leakage_tol = 1e-6)
        : n_(n), cutoff_(cutoff), leakage_tol_(leakage_tol), conj_(conjugated_H_matrix(1, cutoff, p, n)) {
        if (!conj_.exactly_symmetric()) throw std::runtime_error("Evolver: truncated Hamiltonian is not symmetric");
        solver_.compute(conj_.matrix);
        if (solver_.info() != Eigen::Success) throw std::runtime_error("Evolver: eigendecomposition failed");
    }

    const ConjugatedMatrix& hamiltonian() const noexcept { return conj_; }
    const Eigen::VectorXd& eigenvalues() const { return solver_.eigenvalues(); }

    EvolutionResult evolve(const LatticeFunction<Complex>& initial, double time) const {
        const auto N = static_cast<Eigen::Index>(conj_.basis.size());
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(N);
        EvolutionResult res;
        res.state = LatticeFunction<Complex>(n_);
        for (const auto& [lambda, v] : initial.values) {
            if (lambda.weight() > cutoff_) throw DomainError("evolve: initial state outside the cutoff");
            if (lambda.weight() >= cutoff_ - 1 && v != Complex(0)) res.truncation_warning = true;
            psi(static_cast<Eigen::Index>(conj_.index_of(lambda))) = v;
        }
        res.initial_norm = psi.norm();
        if (time == 0) {
            res.norm = res.initial_norm;
            for (const auto& [lambda, v] : initial.values)
                if (v != Complex(0)) res.state.values.emplace(lambda, v);
            return res;
        }
        const Eigen::MatrixXd& V = solver_.eigenvectors();
        Eigen::VectorXcd coeff = V.transpose().cast<Complex>() * psi;
        for (Eigen::Index k = 0; k < N; ++k) coeff(k) *= std::polar(1.0, solver_.eigenvalues()(k) * time);
        Eigen::VectorXcd out = V.cast<Complex>() * coeff;
        res.norm = out.norm();
        for (Eigen::Index i = 0; i < N; ++i) {
            const auto& lambda = conj_.basis[static_cast<std::size_t>(i)];
            if (lambda.weight() == cutoff_) res.leakage += std::norm(out(i));
            if (out(i) != Complex(0)) res.state.values.emplace(lambda, out(i));
        }
        if (res.leakage > leakage_tol_) res.truncation_warning = true;
        return res;
    }

private:
    int n_, cutoff_;
    double leakage_tol_;
    ConjugatedMatrix conj_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

inline EvolutionResult evolve(const LatticeFunction<Complex>& initial, double time, int cutoff, const ParamSet& p) {
    return Evolver(p, initial.n, cutoff).evolve(initial, time);
}

}  // namespace rsmorse
