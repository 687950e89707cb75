#pragma once

// The bispectral dual q-difference operators Hhat_l on W-invariant Laurent
// polynomials. Images are computed by evaluation-interpolation: the defining
// sum is evaluated exactly at generic rational points and the monomial
// coefficients are recovered from an exact linear solve.

#include "rsmorse/combinatorics.hpp"
#include "rsmorse/linalg.hpp"
#include "rsmorse/qcore.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace rsmorse {

/// sum_mu c_mu m_mu with finitely many nonzero c_mu.
struct InvariantPolynomial {
    int n = 0;
    std::map<Partition, Rational> coeffs;

    InvariantPolynomial() = default;
    explicit InvariantPolynomial(int particles) : n(particles) {}

    static InvariantPolynomial monomial(const Partition& mu, Rational c = Rational(1)) {
        InvariantPolynomial p(mu.size());
        p.coeffs.emplace(mu, std::move(c));
        return p;
    }

    Rational coeff(const Partition& mu) const {
        auto it = coeffs.find(mu);
        return it == coeffs.end() ? Rational(0) : it->second;
    }

    int degree() const {
        int d = 0;
        for (const auto& [mu, c] : coeffs)
            if (sgn(c) != 0) d = std::max(d, mu[0]);
        return d;
    }

    void prune() {
        std::erase_if(coeffs, [](const auto& kv) { return sgn(kv.second) == 0; });
    }

    template <class T>
    T evaluate(std::span<const T> z) const {
        if (static_cast<int>(z.size()) != n) throw std::invalid_argument("InvariantPolynomial: wrong dimension");
        PowerTable<T> pw(z, degree());
        T total(0);
        for (const auto& [mu, c] : coeffs) {
            if (sgn(c) == 0) continue;
            total += scalar_from<T>(c) * monomial_eval(orbit(mu), pw);
        }
        return total;
    }

    template <class T>
    T evaluate(const std::vector<T>& z) const {
        return evaluate(std::span<const T>(z));
    }

    friend bool operator==(const InvariantPolynomial& a, const InvariantPolynomial& b) {
        InvariantPolynomial x = a, y = b;
        x.prune();
        y.prune();
        return x.n == y.n && x.coeffs == y.coeffs;
    }
};

namespace detail {

template <class T>
double magnitude(const T& x) {
    if constexpr (std::is_same_v<T, Rational>) {
        return std::abs(x.get_d());
    } else {
        return std::abs(x);
    }
}

template <class T>
void require_nonpole(const T& den, const char* where) {
    if constexpr (std::is_same_v<T, Rational>) {
        if (sgn(den) == 0) throw PoleError(std::string("exact pole in ") + where);
    } else {
        if (std::abs(den) < 1e-13) throw PoleError(std::string("near pole in ") + where);
    }
}

template <class T>
T guarded_div(const T& num, const T& den, const char* where) {
    require_nonpole(den, where);
    return num / den;
}

/// prod_r (1 - that_r x) / ((1 - x^2)(1 - q x^2))
template <class T>
T one_body(const T& x, const ParamSet& p) {
    const T q = scalar_from<T>(p.q());
    T num(1);
    for (int r = 0; r < 3; ++r) num *= T(1) - scalar_from<T>(p.that(r)) * x;
    return guarded_div<T>(num, (T(1) - x * x) * (T(1) - q * x * x), "one-body factor");
}

/// (1 - t x y)/(1 - x y) * (1 - t x/y)/(1 - x/y): interaction with a
/// variable that is not shifted (both signs of y appear).
template <class T>
T spectator(const T& x, const T& y, const ParamSet& p) {
    const T t = scalar_from<T>(p.t());
    const T xy = x * y, xoy = x / y;
    return guarded_div<T>(T(1) - t * xy, T(1) - xy, "spectator factor") *
           guarded_div<T>(T(1) - t * xoy, T(1) - xoy, "spectator factor");
}

/// Pair of shifted variables, X = x_j x_k:
///   V-type: (1 - t X)/(1 - X) * (1 - t q X)/(1 - q X)
///   U-type: (1 - t X)/(1 - X) * (t - q X)/(1 - q X)
template <class T>
T shifted_pair(const T& X, const ParamSet& p, bool u_type) {
    const T t = scalar_from<T>(p.t()), q = scalar_from<T>(p.q());
    T first = guarded_div<T>(T(1) - t * X, T(1) - X, "pair factor");
    T second = u_type ? guarded_div<T>(t - q * X, T(1) - q * X, "pair factor")
                      : guarded_div<T>(T(1) - t * q * X, T(1) - q * X, "pair factor");
    return first * second;
}

/// z_j^{eps_j} for the indices in mask, eps read from sign_bits (bit set: -1).
template <class T>
std::vector<T> signed_vars(std::span<const T> z, std::uint32_t mask, std::uint32_t sign_bits) {
    std::vector<T> x(z.begin(), z.end());
    for (std::size_t j = 0; j < z.size(); ++j)
        if (((mask >> j) & 1u) && ((sign_bits >> j) & 1u)) x[j] = T(1) / z[j];
    return x;
}

}  // namespace detail

/// vhat_j(z) with e^{i xi_k} -> z_k (j is 0-based).
template <class T>
T vhat(int j, std::span<const T> z, const ParamSet& p) {
    const int n = static_cast<int>(z.size());
    if (j < 0 || j >= n) throw std::out_of_range("vhat: index out of range");
    T v = detail::one_body<T>(z[static_cast<std::size_t>(j)], p);
    for (int k = 0; k < n; ++k)
        if (k != j) v *= detail::spectator<T>(z[static_cast<std::size_t>(j)], z[static_cast<std::size_t>(k)], p);
    return v;
}

template <class T>
T vhat(int j, const std::vector<T>& z, const ParamSet& p) {
    return vhat(j, std::span<const T>(z), p);
}

/// One term of Hhat_l at a point: coefficient times p evaluated at
/// z_j q^{shift_j}.
template <class T>
struct DualTerm {
    T coefficient;
    std::vector<int> shift;
};

/// Uhat_{K,count}(z).
template <class T>
T Uhat_coeff(std::uint32_t K, int count, std::span<const T> z, const ParamSet& p) {
    if (count == 0) return T(1);
    const int n = static_cast<int>(z.size());
    T total(0);
    for (std::uint32_t I = K;; I = (I - 1) & K) {
        if (std::popcount(I) == count) {
            // Iterate signs over I only: sub-masks of I mark eps = -1.
            for (std::uint32_t s = I;; s = (s - 1) & I) {
                const auto x = detail::signed_vars(z, I, s);
                T term(1);
                for (int j = 0; j < n; ++j) {
                    if (!((I >> j) & 1u)) continue;
                    term *= detail::one_body<T>(x[static_cast<std::size_t>(j)], p);
                    for (int k = 0; k < n; ++k) {
                        if (((K >> k) & 1u) && !((I >> k) & 1u))
                            term *= detail::spectator<T>(x[static_cast<std::size_t>(j)], z[static_cast<std::size_t>(k)], p);
                        else if (k > j && ((I >> k) & 1u))
                            term *= detail::shifted_pair<T>(x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(k)], p, true);
                    }
                }
                total += term;
                if (s == 0) break;
            }
        }
        if (I == 0) break;
    }
    return count % 2 ? T(-total) : total;
}

/// Vhat_{eps J}(z); sign_bits marks eps_j = -1 for j in J.
template <class T>
T Vhat_coeff(std::uint32_t J, std::uint32_t sign_bits, std::span<const T> z, const ParamSet& p) {
    const int n = static_cast<int>(z.size());
    const auto x = detail::signed_vars(z, J, sign_bits);
    T v(1);
    for (int j = 0; j < n; ++j) {
        if (!((J >> j) & 1u)) continue;
        v *= detail::one_body<T>(x[static_cast<std::size_t>(j)], p);
        for (int k = 0; k < n; ++k) {
            if (!((J >> k) & 1u))
                v *= detail::spectator<T>(x[static_cast<std::size_t>(j)], z[static_cast<std::size_t>(k)], p);
            else if (k > j)
                v *= detail::shifted_pair<T>(x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(k)], p, false);
        }
    }
    return v;
}

/// All terms of Hhat_l = sum_{|J|<=l, eps} Uhat_{J^c, l-|J|} Vhat_{eps J} T_{eps J, q} at z.
template <class T>
std::vector<DualTerm<T>> dual_terms(int l, std::span<const T> z, const ParamSet& p) {
    const int n = static_cast<int>(z.size());
    detail::require_degree(l, n, "dual_terms");
    const std::uint32_t all = (std::uint32_t(1) << n) - 1;
    std::vector<DualTerm<T>> terms;
    for (std::uint32_t J = 0; J <= all; ++J) {
        const int size = std::popcount(J);
        if (size > l) continue;
        const T u = Uhat_coeff(all & ~J, l - size, z, p);
        for (std::uint32_t s = J;; s = (s - 1) & J) {
            DualTerm<T> term{u * Vhat_coeff(J, s, z, p), std::vector<int>(static_cast<std::size_t>(n), 0)};
            for (int j = 0; j < n; ++j)
                if ((J >> j) & 1u) term.shift[static_cast<std::size_t>(j)] = ((s >> j) & 1u) ? -1 : 1;
            terms.push_back(std::move(term));
            if (s == 0) break;
        }
    }
    return terms;
}

template <class T>
std::vector<T> shifted_point(std::span<const T> z, const std::vector<int>& shift, const ParamSet& p) {
    const T q = scalar_from<T>(p.q());
    std::vector<T> w(z.begin(), z.end());
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (shift[j] == 1) w[j] *= q;
        else if (shift[j] == -1) w[j] /= q;
    }
    return w;
}

/// (Hhat_l f)(z) for any callable f on points.
template <class T, class F>
T apply_Hhat_l_pointwise(int l, F&& f, std::span<const T> z, const ParamSet& p) {
    T total(0);
    for (const auto& term : dual_terms(l, z, p)) {
        const auto w = shifted_point(z, term.shift, p);
        total += term.coefficient * f(std::span<const T>(w));
    }
    return total;
}

/// Generic rational points z_j = a/b with a != b small primes. Every point
/// has pairwise distinct coordinates with no reciprocal pairs, and no two
/// points are W-equivalent.
class GenericPointSampler {
public:
    explicit GenericPointSampler(std::uint64_t seed) : rng_(seed) {}

    std::vector<Rational> next(int n) {
        static constexpr std::array<int, 12> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
        for (;;) {
            std::vector<Rational> z;
            while (static_cast<int>(z.size()) < n) {
                const int a = primes[pick(rng_)], b = primes[pick(rng_)];
                if (a == b) continue;
                Rational x(a, b);
                x.canonicalize();
                const Rational inv = 1 / x;
                if (std::find(z.begin(), z.end(), x) != z.end() || std::find(z.begin(), z.end(), inv) != z.end())
                    continue;
                z.push_back(std::move(x));
            }
            std::vector<Rational> key;
            for (const auto& x : z) key.push_back(x > 1 ? x : Rational(1 / x));
            std::sort(key.begin(), key.end());
            if (seen_.insert(key).second) return z;
        }
    }

private:
    std::mt19937_64 rng_;
    std::set<std::vector<Rational>> seen_;
};

namespace detail {

/// Result of interpolating the images of several polynomials (columns)
/// under Hhat_l in a common monomial basis.
struct InterpolatedImages {
    std::vector<Partition> basis;
    DenseMatrix<Rational> coeffs;  // coeffs(nu index, column)
    std::vector<std::size_t> held_out_failures;  // columns failing the fresh-point check
};

inline constexpr int kMaxResamples = 8;

/// Images of `columns` (each a polynomial over `basis`) under Hhat_l.
inline InterpolatedImages interpolate_images(int l, const std::vector<Partition>& basis,
                                             const std::vector<InvariantPolynomial>& columns,
                                             const ParamSet& p, std::uint64_t seed) {
    const std::size_t N = basis.size();
    const int n = basis.front().size();
    int max_deg = 0;
    for (const auto& b : basis) max_deg = std::max(max_deg, b[0]);
    std::vector<std::vector<std::vector<int>>> orbits;
    orbits.reserve(N);
    for (const auto& b : basis) orbits.push_back(orbit(b));

    // Column c as a dense vector over the basis.
    std::vector<std::vector<Rational>> col_vec(columns.size(), std::vector<Rational>(N));
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const auto& [mu, v] : columns[c].coeffs) {
            auto it = std::lower_bound(basis.begin(), basis.end(), mu, graded_less);
            if (it == basis.end() || *it != mu) throw std::invalid_argument("interpolate_images: column outside basis");
            col_vec[c][static_cast<std::size_t>(it - basis.begin())] = v;
        }

    auto monomials_at = [&](std::span<const Rational> w) {
        PowerTable<Rational> pw(w, max_deg);
        std::vector<Rational> m(N);
        for (std::size_t i = 0; i < N; ++i) m[i] = monomial_eval(orbits[i], pw);
        return m;
    };
    // (Hhat_l column)(z) for every column, or nullopt at a pole.
    auto images_at = [&](std::span<const Rational> z) -> std::optional<std::vector<Rational>> {
        std::vector<DualTerm<Rational>> terms;
        try {
            terms = dual_terms(l, z, p);
        } catch (const PoleError&) {
            return std::nullopt;
        }
        std::vector<Rational> acc(columns.size());
        for (const auto& term : terms) {
            if (sgn(term.coefficient) == 0) continue;
            const auto w = shifted_point(z, term.shift, p);
            const auto m = monomials_at(w);
            for (std::size_t c = 0; c < columns.size(); ++c) {
                Rational v(0);
                for (std::size_t i = 0; i < N; ++i)
                    if (sgn(col_vec[c][i]) != 0) v += col_vec[c][i] * m[i];
                acc[c] += term.coefficient * v;
            }
        }
        return acc;
    };

    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        GenericPointSampler sampler(seed + static_cast<std::uint64_t>(attempt));
        DenseMatrix<Rational> A(N, N), B(N, columns.size());
        std::size_t row = 0;
        while (row < N) {
            const auto z = sampler.next(n);
            auto vals = images_at(z);
            if (!vals) continue;
            const auto m = monomials_at(z);
            for (std::size_t i = 0; i < N; ++i) A(row, i) = m[i];
            for (std::size_t c = 0; c < columns.size(); ++c) B(row, c) = (*vals)[c];
            ++row;
        }
        DenseMatrix<Rational> X;
        try {
            X = solve_exact(A, B);
        } catch (const SingularMatrixError&) {
            continue;
        }

        InterpolatedImages out{basis, std::move(X), {}};
        std::optional<std::vector<Rational>> check;
        std::vector<Rational> zc;
        do {
            zc = sampler.next(n);
            check = images_at(zc);
        } while (!check);
        const auto m = monomials_at(zc);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            Rational v(0);
            for (std::size_t i = 0; i < N; ++i) v += out.coeffs(i, c) * m[i];
            if (v != (*check)[c]) out.held_out_failures.push_back(c);
        }
        return out;
    }
    throw SingularMatrixError("interpolate_images: evaluation matrix singular after " +
                              std::to_string(kMaxResamples) + " resamplings");
}

/// Union of the dominance ideals of the support, graded-lex ordered.
inline std::vector<Partition> candidate_support(const InvariantPolynomial& poly) {
    std::set<Partition> all;
    for (const auto& [mu, c] : poly.coeffs)
        if (sgn(c) != 0)
            for (auto& nu : ideal(mu).members) all.insert(nu);
    std::vector<Partition> basis(all.begin(), all.end());
    std::sort(basis.begin(), basis.end(), graded_less);
    return basis;
}

}  // namespace detail

/// Raised when an interpolated image fails the fresh-point re-evaluation,
/// i.e. the image is not in the span of the candidate monomials.
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hhat_l p as an invariant polynomial. The image is interpolated over the
/// union of the ideals of p's support and re-checked at a held-out point.
inline InvariantPolynomial apply_Hhat_l(int l, const InvariantPolynomial& poly, const ParamSet& p,
                                        std::uint64_t seed = 0) {
    detail::require_degree(l, poly.n, "apply_Hhat_l");
    InvariantPolynomial cleaned = poly;
    cleaned.prune();
    if (cleaned.coeffs.empty()) return InvariantPolynomial(poly.n);
    const auto basis = detail::candidate_support(cleaned);
    const auto res = detail::interpolate_images(l, basis, {cleaned}, p, seed);
    if (!res.held_out_failures.empty())
        throw StructureError("apply_Hhat_l: image fails held-out-point check");
    InvariantPolynomial image(poly.n);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (sgn(res.coeffs(i, 0)) != 0) image.coeffs.emplace(basis[i], res.coeffs(i, 0));
    return image;
}

/// c^{(l)}_{mu nu} with Hhat_l m_mu = sum_nu c_{mu nu} m_nu, for mu, nu in the
/// ideal of root. Row = mu, column = nu.
struct TriangularMatrix {
    int l = 1;
    Partition root;
    std::vector<Partition> basis;
    DenseMatrix<Rational> entries;
    /// Nonzero entries with nu not <= mu.
    std::vector<std::pair<Partition, Partition>> violations;
    /// Rows whose interpolated image failed the fresh-point check.
    std::vector<Partition> held_out_failures;

    bool structurally_sound() const { return violations.empty() && held_out_failures.empty(); }

    std::size_t index_of(const Partition& mu) const {
        auto it = std::lower_bound(basis.begin(), basis.end(), mu, graded_less);
        if (it == basis.end() || *it != mu) throw std::out_of_range("TriangularMatrix: " + mu.str() + " not in ideal");
        return static_cast<std::size_t>(it - basis.begin());
    }
    const Rational& at(const Partition& mu, const Partition& nu) const {
        return entries(index_of(mu), index_of(nu));
    }
    Rational diagonal(const Partition& mu) const { return at(mu, mu); }
};

inline TriangularMatrix matrix_in_monomial_basis(int l, const Partition& root, const ParamSet& p,
                                                 std::uint64_t seed = 0) {
    detail::require_degree(l, root.size(), "matrix_in_monomial_basis");
    TriangularMatrix M;
    M.l = l;
    M.root = root;
    M.basis = ideal(root).members;
    const std::size_t N = M.basis.size();

    std::vector<InvariantPolynomial> columns;
    columns.reserve(N);
    for (const auto& mu : M.basis) columns.push_back(InvariantPolynomial::monomial(mu));
    auto res = detail::interpolate_images(l, M.basis, columns, p, seed);

    M.entries = DenseMatrix<Rational>(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            M.entries(r, c) = res.coeffs(c, r);
            if (sgn(M.entries(r, c)) != 0 && !dominance_leq(M.basis[c], M.basis[r]))
                M.violations.emplace_back(M.basis[r], M.basis[c]);
        }
    for (auto c : res.held_out_failures) M.held_out_failures.push_back(M.basis[c]);
    return M;
}

}  // namespace rsmorse
