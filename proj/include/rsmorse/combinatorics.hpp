#pragma once

// Partitions, dominance order, the hyperoctahedral group and its monomials,
// e_k / h_k, and the closed-form eigenvalues on both sides of the duality.

#include "rsmorse/qcore.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsmorse {

/// Weakly decreasing tuple of nonnegative integers, one part per particle.
///
/// The lattice site rho + lambda is never materialised; formulas use
/// q^{rho_j + lambda_j} = t^{n-j} q^{lambda_j} instead.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        if (!is_partition(parts_))
            throw std::invalid_argument("not a partition: " + to_string_raw(parts_));
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    static Partition zero(int n) { return Partition(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    static bool is_partition(std::span<const int> parts) {
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (parts[j] < 0) return false;
            if (j > 0 && parts[j - 1] < parts[j]) return false;
        }
        return true;
    }

    int size() const noexcept { return static_cast<int>(parts_.size()); }
    int operator[](int j) const { return parts_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& parts() const noexcept { return parts_; }
    int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    bool is_zero() const {
        return std::all_of(parts_.begin(), parts_.end(), [](int p) { return p == 0; });
    }

    std::string str() const { return to_string_raw(parts_); }

    auto operator<=>(const Partition&) const = default;
    bool operator==(const Partition&) const = default;

    static std::string to_string_raw(std::span<const int> parts) {
        std::string s = "[";
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(parts[j]);
        }
        return s + "]";
    }

private:
    std::vector<int> parts_;
};

/// Graded lexicographic order: weight first, then lexicographic. A linear
/// extension of dominance.
inline bool graded_less(const Partition& a, const Partition& b) {
    const int wa = a.weight(), wb = b.weight();
    if (wa != wb) return wa < wb;
    return a.parts() < b.parts();
}

inline bool dominance_leq(const Partition& mu, const Partition& lambda) {
    if (mu.size() != lambda.size())
        throw std::invalid_argument("dominance_leq: particle numbers differ (" + mu.str() + " vs " +
                                    lambda.str() + ")");
    long sm = 0, sl = 0;
    for (int k = 0; k < mu.size(); ++k) {
        sm += mu[k];
        sl += lambda[k];
        if (sm > sl) return false;
    }
    return true;
}

/// All partitions with n parts and weight <= max_weight, in graded-lex order.
inline std::vector<Partition> partitions_up_to(int n, int max_weight) {
    if (n < 1) throw std::invalid_argument("partitions_up_to: n must be positive");
    std::vector<Partition> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int cap, int remaining) -> void {
        if (pos == n) {
            out.emplace_back(cur);
            return;
        }
        for (int v = 0; v <= std::min(cap, remaining); ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, v, remaining - v);
        }
    };
    rec(rec, 0, max_weight, max_weight);
    std::sort(out.begin(), out.end(), graded_less);
    return out;
}

/// {mu : mu <= root} ordered graded-lexicographically.
struct DominanceIdeal {
    Partition root;
    std::vector<Partition> members;

    std::size_t size() const noexcept { return members.size(); }

    /// Position of mu in members, or -1.
    std::ptrdiff_t index_of(const Partition& mu) const {
        auto it = std::lower_bound(members.begin(), members.end(), mu, graded_less);
        if (it == members.end() || *it != mu) return -1;
        return it - members.begin();
    }
    bool contains(const Partition& mu) const { return index_of(mu) >= 0; }
};

inline DominanceIdeal ideal(const Partition& lambda) {
    const int n = lambda.size();
    std::vector<long> bound(static_cast<std::size_t>(n));
    std::partial_sum(lambda.parts().begin(), lambda.parts().end(), bound.begin());

    // Grow mu part by part keeping every partial sum under lambda's.
    DominanceIdeal id{lambda, {}};
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int cap, long sum) -> void {
        if (pos == n) {
            id.members.emplace_back(cur);
            return;
        }
        const long room = bound[static_cast<std::size_t>(pos)] - sum;
        for (int v = 0; v <= cap && v <= room; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, v, sum + v);
        }
    };
    rec(rec, 0, lambda.size() ? lambda[0] : 0, 0);
    std::sort(id.members.begin(), id.members.end(), graded_less);
    return id;
}

// ---------------------------------------------------------------------------
// Hyperoctahedral group W = S_n x| {1,-1}^n

/// w = (sigma, eps) acting by (w v)_i = eps_i v_{sigma(i)}.
struct SignedPermutation {
    std::vector<int> perm;
    std::vector<int> signs;

    int size() const noexcept { return static_cast<int>(perm.size()); }

    /// eps_1 ... eps_n sign(sigma).
    int sign() const {
        int s = 1;
        for (int e : signs) s *= e;
        std::vector<bool> seen(perm.size(), false);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            if (seen[i]) continue;
            std::size_t len = 0;
            for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
                seen[j] = true;
                ++len;
            }
            if (len % 2 == 0) s = -s;
        }
        return s;
    }

    template <class T>
    std::vector<T> apply(std::span<const T> v) const {
        if (v.size() != perm.size()) throw std::invalid_argument("SignedPermutation::apply: size mismatch");
        std::vector<T> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const T& x = v[static_cast<std::size_t>(perm[i])];
            out[i] = signs[i] > 0 ? x : T(-x);
        }
        return out;
    }

    static SignedPermutation identity(int n) {
        SignedPermutation w;
        w.perm.resize(static_cast<std::size_t>(n));
        std::iota(w.perm.begin(), w.perm.end(), 0);
        w.signs.assign(static_cast<std::size_t>(n), 1);
        return w;
    }
};

/// All 2^n n! elements.
inline std::vector<SignedPermutation> hyperoctahedral_group(int n) {
    std::vector<SignedPermutation> group;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            SignedPermutation w;
            w.perm = perm;
            w.signs.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) w.signs[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? -1 : 1;
            group.push_back(std::move(w));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return group;
}

/// The orbit W lambda as a set: distinct arrangements of the parts, with
/// signs only on the nonzero entries.
inline std::vector<std::vector<int>> orbit(const Partition& lambda) {
    std::vector<int> arrangement = lambda.parts();
    std::sort(arrangement.begin(), arrangement.end());
    std::vector<std::vector<int>> out;
    do {
        std::vector<int> nonzero;
        for (int i = 0; i < lambda.size(); ++i)
            if (arrangement[static_cast<std::size_t>(i)] != 0) nonzero.push_back(i);
        const std::uint32_t count = 1u << nonzero.size();
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            std::vector<int> nu = arrangement;
            for (std::size_t b = 0; b < nonzero.size(); ++b)
                if ((mask >> b) & 1u) nu[static_cast<std::size_t>(nonzero[b])] *= -1;
            out.push_back(std::move(nu));
        }
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    return out;
}

/// Integer powers z_j^e for |e| <= max_degree, tabulated once per point.
template <class T>
class PowerTable {
public:
    PowerTable(std::span<const T> z, int max_degree) : n_(static_cast<int>(z.size())), d_(max_degree) {
        table_.resize(static_cast<std::size_t>(n_ * (2 * d_ + 1)));
        for (int j = 0; j < n_; ++j) {
            if (is_exact_zero(z[static_cast<std::size_t>(j)]))
                throw DomainError("monomial evaluation at a zero coordinate");
            const T inv = T(1) / z[static_cast<std::size_t>(j)];
            at(j, 0) = T(1);
            for (int e = 1; e <= d_; ++e) {
                at(j, e) = at(j, e - 1) * z[static_cast<std::size_t>(j)];
                at(j, -e) = at(j, -e + 1) * inv;
            }
        }
    }

    const T& operator()(int j, int e) const {
        return table_[static_cast<std::size_t>(j * (2 * d_ + 1) + e + d_)];
    }
    int max_degree() const noexcept { return d_; }

private:
    T& at(int j, int e) { return table_[static_cast<std::size_t>(j * (2 * d_ + 1) + e + d_)]; }
    int n_, d_;
    std::vector<T> table_;
};

template <class T>
T monomial_eval(const std::vector<std::vector<int>>& orb, const PowerTable<T>& pw) {
    T total(0);
    for (const auto& nu : orb) {
        T term(1);
        for (std::size_t j = 0; j < nu.size(); ++j) term *= pw(static_cast<int>(j), nu[j]);
        total += term;
    }
    return total;
}

/// m_lambda(z) = sum over the orbit W lambda of z^nu.
template <class T>
T monomial_eval(const Partition& lambda, std::span<const T> z) {
    if (static_cast<int>(z.size()) != lambda.size())
        throw std::invalid_argument("monomial_eval: point has wrong dimension");
    PowerTable<T> pw(z, lambda.size() ? lambda[0] : 0);
    return monomial_eval(orbit(lambda), pw);
}

template <class T>
T monomial_eval(const Partition& lambda, const std::vector<T>& z) {
    return monomial_eval(lambda, std::span<const T>(z));
}

// ---------------------------------------------------------------------------
// Symmetric functions

template <class T>
T elem_sym(int k, std::span<const T> z) {
    if (k < 0) throw std::invalid_argument("elem_sym: negative degree");
    if (k > static_cast<int>(z.size())) return T(0);
    std::vector<T> e(static_cast<std::size_t>(k + 1), T(0));
    e[0] = T(1);
    for (const T& x : z)
        for (int i = k; i >= 1; --i) e[static_cast<std::size_t>(i)] += x * e[static_cast<std::size_t>(i - 1)];
    return e[static_cast<std::size_t>(k)];
}

template <class T>
T complete_sym(int k, std::span<const T> y) {
    if (k < 0) throw std::invalid_argument("complete_sym: negative degree");
    std::vector<T> h(static_cast<std::size_t>(k + 1), T(0));
    h[0] = T(1);
    for (const T& x : y)
        for (int i = 1; i <= k; ++i) h[static_cast<std::size_t>(i)] += x * h[static_cast<std::size_t>(i - 1)];
    return h[static_cast<std::size_t>(k)];
}

/// E_{l,n}(z; y) = sum_{k<=l} (-1)^{l+k} e_k(z) h_{l-k}(y), with #y = n-l+1.
template <class T>
T eval_Eln(int l, std::span<const T> z, std::span<const T> y) {
    const int n = static_cast<int>(z.size());
    if (l < 0 || l > n) throw std::invalid_argument("eval_Eln: degree out of range");
    if (static_cast<int>(y.size()) != n - l + 1)
        throw std::invalid_argument("eval_Eln: expected n-l+1 = " + std::to_string(n - l + 1) +
                                    " y-variables, got " + std::to_string(y.size()));
    T total(0);
    for (int k = 0; k <= l; ++k) {
        T term = elem_sym(k, z) * complete_sym(l - k, y);
        if ((l + k) % 2) total -= term;
        else total += term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Eigenvalues

namespace detail {
/// Calls f(J) for every increasing l-subset J of {0..n-1}.
template <class F>
void for_each_subset(int n, int l, F&& f) {
    std::vector<int> J(static_cast<std::size_t>(l));
    auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == l) {
            f(std::span<const int>(J));
            return;
        }
        for (int j = start; j <= n - (l - pos); ++j) {
            J[static_cast<std::size_t>(pos)] = j;
            self(self, pos + 1, j + 1);
        }
    };
    rec(rec, 0, 0);
}

inline void require_degree(int l, int n, const char* who) {
    if (l < 1 || l > n)
        throw std::invalid_argument(std::string(who) + ": l=" + std::to_string(l) +
                                    " outside 1.." + std::to_string(n));
}
}  // namespace detail

/// Ehat_l from the values c_j = cos(xi_j):
///   sum_{j_1<...<j_l} prod_r (2c_{j_r} - t^{j_r-r} that_0 - t^{-(j_r-r)} / that_0)
/// (indices 1-based in the formula). T = Rational gives the exact value.
template <class T>
T eval_Ehat_l_from_cos(int l, std::span<const T> cos_xi, const ParamSet& p) {
    const int n = static_cast<int>(cos_xi.size());
    detail::require_degree(l, n, "eval_Ehat_l");
    std::vector<T> shift_plus(static_cast<std::size_t>(n)), shift_minus(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        shift_plus[static_cast<std::size_t>(s)] = scalar_from<T>(rpow(p.t(), s) * p.that(0));
        shift_minus[static_cast<std::size_t>(s)] = scalar_from<T>(rpow(p.t(), -s) / p.that(0));
    }
    T total(0);
    detail::for_each_subset(n, l, [&](std::span<const int> J) {
        T term(1);
        for (int r = 0; r < l; ++r) {
            const int j = J[static_cast<std::size_t>(r)];
            const auto s = static_cast<std::size_t>(j - r);  // (j+1) - (r+1)
            term *= T(2) * cos_xi[static_cast<std::size_t>(j)] - shift_plus[s] - shift_minus[s];
        }
        total += term;
    });
    return total;
}

template <class T>
T eval_Ehat_from_cos(std::span<const T> cos_xi, const ParamSet& p) {
    const int n = static_cast<int>(cos_xi.size());
    T total(0);
    for (int j = 1; j <= n; ++j) {
        total += T(2) * cos_xi[static_cast<std::size_t>(j - 1)] -
                 scalar_from<T>(rpow(p.t(), n - j) * p.that(0)) -
                 scalar_from<T>(rpow(p.t(), j - n) / p.that(0));
    }
    return total;
}

inline double eval_Ehat(std::span<const double> xi, const ParamSet& p) {
    std::vector<double> c(xi.size());
    std::transform(xi.begin(), xi.end(), c.begin(), [](double x) { return std::cos(x); });
    return eval_Ehat_from_cos<double>(c, p);
}

inline double eval_Ehat_l(int l, std::span<const double> xi, const ParamSet& p) {
    std::vector<double> c(xi.size());
    std::transform(xi.begin(), xi.end(), c.begin(), [](double x) { return std::cos(x); });
    return eval_Ehat_l_from_cos<double>(l, c, p);
}

/// E_lambda = sum_j t^{j-1} (q^{-lambda_j} - 1).
inline Rational eval_E(const Partition& lambda, const ParamSet& p) {
    Rational total(0);
    for (int j = 0; j < lambda.size(); ++j) total += rpow(p.t(), j) * (rpow(p.q(), -lambda[j]) - 1);
    return total;
}

/// E_{lambda,l} = t^{-l(l-1)/2} sum_{j_1<...<j_l} prod_r (t^{j_r-1} q^{-lambda_{j_r}} - t^{n+r-j_r-1}).
inline Rational eval_E_l(const Partition& lambda, int l, const ParamSet& p) {
    const int n = lambda.size();
    detail::require_degree(l, n, "eval_E_l");
    Rational total(0);
    detail::for_each_subset(n, l, [&](std::span<const int> J) {
        Rational term(1);
        for (int r = 1; r <= l; ++r) {
            const int j = J[static_cast<std::size_t>(r - 1)] + 1;
            term *= rpow(p.t(), j - 1) * rpow(p.q(), -lambda[j - 1]) - rpow(p.t(), n + r - j - 1);
        }
        total += term;
    });
    return total * rpow(p.t(), -static_cast<long>(l) * (l - 1) / 2);
}

}  // namespace rsmorse
