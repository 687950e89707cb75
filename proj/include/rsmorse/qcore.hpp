#pragma once

// Scalars, q-Pochhammer symbols and the model parameters.
//
// Exact arithmetic goes through GMP rationals; everything transcendental
// (infinite products, phases, weights) lives in double / std::complex<double>.

#include <gmpxx.h>

#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace rsmorse {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A parameter outside q,t in (0,1), that_r in (-1,1)\{0}.
class ParameterError : public DomainError {
public:
    ParameterError(std::string name, const std::string& what)
        : DomainError(what), name_(std::move(name)) {}
    const std::string& parameter() const noexcept { return name_; }

private:
    std::string name_;
};

/// Non-generic parameters: a vanishing denominator or an eigenvalue collision.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A rational function was evaluated exactly at (or numerically near) a pole.
class PoleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rationals

/// Parses "p/q", an integer, or a finite decimal such as "-0.125" (exactly,
/// as a power-of-ten fraction).
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    s = s.substr(b);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto digits_only = [](std::string_view d) {
        if (d.empty()) return false;
        for (char c : d)
            if (c < '0' || c > '9') return false;
        return true;
    };

    bool negative = false;
    std::string body = s;
    if (body[0] == '+' || body[0] == '-') {
        negative = body[0] == '-';
        body = body.substr(1);
    }

    Rational r;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string num = body.substr(0, slash), den = body.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den))
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        Integer d(den, 10);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        r = Rational(Integer(num, 10), d);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!digits_only(ip) || (!fp.empty() && !digits_only(fp)))
            throw std::invalid_argument("malformed decimal literal '" + s + "'");
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        r = Rational(Integer(ip + fp, 10), scale);
    } else {
        if (!digits_only(body)) throw std::invalid_argument("malformed rational literal '" + s + "'");
        r = Rational(Integer(body, 10));
    }
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// x^k for any integer k; throws on 0^k with k < 0.
inline Rational rpow(const Rational& x, long k) {
    if (k == 0) return Rational(1);
    if (k < 0) {
        if (x == 0) throw DomainError("rpow: zero to a negative power");
        return Rational(1) / rpow(x, -k);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(k));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Lifts an exact rational into the scalar type used by a generic routine.
template <class T>
T scalar_from(const Rational& r) {
    if constexpr (std::is_same_v<T, Rational>) {
        return r;
    } else {
        return T(r.get_d());
    }
}

template <class T>
bool is_exact_zero(const T& x) {
    if constexpr (std::is_same_v<T, Rational>) {
        return sgn(x) == 0;
    } else {
        return x == T(0);
    }
}

// ---------------------------------------------------------------------------
// q-Pochhammer symbols

/// (x; q)_m = prod_{l<m} (1 - x q^l).
template <class T>
T qpoch_finite(const std::type_identity_t<T>& x, int m, const T& q) {
    if (m < 0) throw std::invalid_argument("qpoch_finite: negative length");
    T result(1);
    T term = x;
    for (int l = 0; l < m; ++l) {
        result *= T(1) - term;
        term *= q;
    }
    return result;
}

inline constexpr double kDefaultTol = 1e-16;
inline constexpr std::size_t kMaxProductTerms = 1'000'000;

/// (x; q)_infinity, truncated at the first N with |x||q|^N < tol.
///
/// The discarded tail prod_{l>=N}(1 - x q^l) differs from 1 by at most
/// tol / (1 - |q|) to first order, so that bounds the relative error.
inline Complex qpoch_infinite(Complex x, Complex q, double tol = kDefaultTol) {
    const double aq = std::abs(q);
    if (!(aq < 1.0)) throw DomainError("qpoch_infinite: |q| >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("qpoch_infinite: tol must be positive");
    Complex result(1.0, 0.0);
    Complex term = x;
    std::size_t l = 0;
    while (std::abs(term) >= tol) {
        if (l == kMaxProductTerms)
            throw std::runtime_error("qpoch_infinite: truncation cap of 1e6 factors reached");
        result *= 1.0 - term;
        term *= q;
        ++l;
    }
    return result;
}

inline double qpoch_infinite(double x, double q, double tol = kDefaultTol) {
    return qpoch_infinite(Complex(x), Complex(q), tol).real();
}

// ---------------------------------------------------------------------------
// Parameters

/// (q, t, that_0, that_1, that_2) together with the derived Morse couplings
///   t0 = that_1 that_2 / q,  t1 = that_0 that_2,  t2 = that_0 that_1
/// and t3 = 1.
///
/// With this parametrisation sqrt(q t0 / (t1 t2)) = 1/that_0 and
/// sqrt(t1 t2 / (q t0)) = that_0, so every lattice coefficient is rational.
class ParamSet {
public:
    const Rational& q() const noexcept { return q_; }
    const Rational& t() const noexcept { return t_; }
    const Rational& that(int r) const { return that_.at(static_cast<std::size_t>(r)); }
    const std::array<Rational, 3>& that() const noexcept { return that_; }
    const Rational& t0() const noexcept { return t0_; }
    const Rational& t1() const noexcept { return t1_; }
    const Rational& t2() const noexcept { return t2_; }

    double qd() const { return q_.get_d(); }
    double td() const { return t_.get_d(); }
    double thatd(int r) const { return that(r).get_d(); }

    /// True for the that_2 -> 0 degeneration, which lies outside the domain.
    bool morse_vanishing() const noexcept { return morse_vanishing_; }

    std::string describe() const {
        return "q=" + to_string(q_) + " t=" + to_string(t_) + " that=(" + to_string(that_[0]) +
               "," + to_string(that_[1]) + "," + to_string(that_[2]) + ")";
    }

    friend bool operator==(const ParamSet& a, const ParamSet& b) {
        return a.q_ == b.q_ && a.t_ == b.t_ && a.that_ == b.that_ &&
               a.morse_vanishing_ == b.morse_vanishing_;
    }

private:
    friend ParamSet params_from_hat(const Rational&, const Rational&, const std::array<Rational, 3>&);
    friend ParamSet params_morse_vanishing(const Rational&, const Rational&, const Rational&,
                                           const Rational&);

    ParamSet(Rational q, Rational t, std::array<Rational, 3> that, bool vanishing)
        : q_(std::move(q)), t_(std::move(t)), that_(std::move(that)), morse_vanishing_(vanishing) {
        t0_ = that_[1] * that_[2] / q_;
        t1_ = that_[0] * that_[2];
        t2_ = that_[0] * that_[1];
    }

    Rational q_, t_;
    std::array<Rational, 3> that_;
    Rational t0_, t1_, t2_;
    bool morse_vanishing_ = false;
};

namespace detail {
inline void require_unit_interval(const Rational& x, const char* name) {
    if (!(x > 0 && x < 1))
        throw ParameterError(name, std::string("parameter ") + name + "=" + to_string(x) +
                                       " must lie in (0,1)");
}
inline void require_hat(const Rational& x, const char* name) {
    if (!(x > -1 && x < 1) || x == 0)
        throw ParameterError(name, std::string("parameter ") + name + "=" + to_string(x) +
                                       " must lie in (-1,1)\\{0}");
}
}  // namespace detail

inline ParamSet params_from_hat(const Rational& q, const Rational& t,
                                const std::array<Rational, 3>& that) {
    detail::require_unit_interval(q, "q");
    detail::require_unit_interval(t, "t");
    detail::require_hat(that[0], "that0");
    detail::require_hat(that[1], "that1");
    detail::require_hat(that[2], "that2");
    return ParamSet(q, t, that, false);
}

/// that_2 = 0: the parameter point where the Hamiltonian loses one Morse
/// coupling. Only the lattice-side limit checks accept it.
inline ParamSet params_morse_vanishing(const Rational& q, const Rational& t, const Rational& that0,
                                       const Rational& that1) {
    detail::require_unit_interval(q, "q");
    detail::require_unit_interval(t, "t");
    detail::require_hat(that0, "that0");
    detail::require_hat(that1, "that1");
    return ParamSet(q, t, {that0, that1, Rational(0)}, true);
}

}  // namespace rsmorse
