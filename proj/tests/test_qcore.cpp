#include "rsmorse/qcore.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rsmorse;

namespace {

Rational R(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

// Plain loop to a fixed depth, no truncation rule.
Complex long_product(Complex x, Complex q, int terms) {
    Complex p(1);
    Complex xq = x;
    for (int l = 0; l < terms; ++l, xq *= q) p *= 1.0 - xq;
    return p;
}

ParamSet reference_params() { return params_from_hat(R(1, 3), R(1, 2), {R(1, 2), R(1, 3), R(1, 5)}); }

}  // namespace

TEST(QPochFinite, EmptyAndSingleFactor) {
    EXPECT_EQ(qpoch_finite(R(3, 7), 0, R(1, 3)), 1);
    EXPECT_EQ(qpoch_finite(R(3, 7), 1, R(1, 3)), R(4, 7));
}

TEST(QPochFinite, TwoFactorValue) { EXPECT_EQ(qpoch_finite(R(1, 2), 2, R(1, 3)), R(5, 12)); }

TEST(QPochFinite, StepRecurrence) {
    const Rational q = R(2, 5);
    for (int num = -4; num <= 4; ++num) {
        const Rational x = R(num, 3);
        for (int m = 0; m < 7; ++m)
            EXPECT_EQ(qpoch_finite(x, m + 1, q), qpoch_finite(x, m, q) * (1 - x * rpow(q, m)));
    }
}

TEST(QPochFinite, NegativeLengthRejected) { EXPECT_THROW(qpoch_finite(R(1, 2), -1, R(1, 2)), std::invalid_argument); }

TEST(QPochInfinite, ZeroArgument) { EXPECT_EQ(qpoch_infinite(Complex(0), Complex(0.4)), Complex(1)); }

TEST(QPochInfinite, ReferenceConstants) {
    // (1/2; 1/2)_inf and (0.3; 0.3)_inf to 30 digits (computed with mpmath.qp).
    EXPECT_NEAR(qpoch_infinite(0.5, 0.5), 0.288788095086602421278899721929, 1e-15);
    EXPECT_NEAR(qpoch_infinite(0.3, 0.3), 0.61264815421325654137516943258, 1e-15);
}

TEST(QPochInfinite, MatchesLongProduct) {
    EXPECT_NEAR(qpoch_infinite(0.3, 0.3), long_product(0.3, 0.3, 50).real(), 1e-14);
    EXPECT_NEAR(qpoch_infinite(0.5, 0.5), long_product(0.5, 0.5, 200).real(), 1e-15);
    const Complex x = std::polar(0.9, 1.3), q(0.7, 0);
    EXPECT_LT(std::abs(qpoch_infinite(x, q) - long_product(x, q, 400)), 1e-14);
}

TEST(QPochInfinite, FunctionalEquation) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int k = 0; k < 200; ++k) {
        const Complex x(u(rng), u(rng));
        const Complex q = std::polar(std::abs(u(rng)), u(rng));
        const Complex lhs = qpoch_infinite(x, q);
        EXPECT_LT(std::abs(lhs - (1.0 - x) * qpoch_infinite(x * q, q)), 1e-13 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(QPochInfinite, RejectsUnitModulusBase) {
    EXPECT_THROW(qpoch_infinite(Complex(0.5), Complex(1.0)), DomainError);
    EXPECT_THROW(qpoch_infinite(Complex(0.5), Complex(0, -1.2)), DomainError);
}

TEST(QPochInfinite, TruncationCapReported) {
    EXPECT_THROW(qpoch_infinite(Complex(0.5), Complex(1 - 1e-7), 1e-300), std::runtime_error);
}

TEST(ParseRational, Formats) {
    EXPECT_EQ(parse_rational("3/9"), R(1, 3));
    EXPECT_EQ(parse_rational("-2/4"), R(-1, 2));
    EXPECT_EQ(parse_rational("7"), 7);
    EXPECT_EQ(parse_rational("0.125"), R(1, 8));
    EXPECT_EQ(parse_rational("-.5"), R(-1, 2));
    EXPECT_EQ(parse_rational(" 1/5 "), R(1, 5));
    EXPECT_EQ(parse_rational("010/012"), R(5, 6));
    EXPECT_EQ(parse_rational("0.0625"), R(1, 16));
}

TEST(ParseRational, Malformed) {
    for (const char* s : {"", "1/0", "a/2", "1.2.3", "1/-2", "--1"}) EXPECT_THROW(parse_rational(s), std::invalid_argument) << s;
}

TEST(Rpow, NegativeExponents) {
    EXPECT_EQ(rpow(R(2, 3), -2), R(9, 4));
    EXPECT_EQ(rpow(R(-1, 2), 3), R(-1, 8));
    EXPECT_THROW(rpow(R(0), -1), DomainError);
}

TEST(ParamSet, DerivedCouplings) {
    const ParamSet p = reference_params();
    EXPECT_EQ(p.t0(), R(1, 5));
    EXPECT_EQ(p.t1(), R(1, 10));
    EXPECT_EQ(p.t2(), R(1, 6));
}

TEST(ParamSet, SymmetricHats) {
    const ParamSet p = params_from_hat(R(1, 3), R(1, 2), {R(1, 2), R(-2, 7), R(-2, 7)});
    EXPECT_EQ(p.t1(), p.t2());
}

TEST(ParamSet, RecoversThatZeroSquared) {
    for (const auto& h : {std::array{R(1, 2), R(1, 3), R(1, 5)}, std::array{R(-3, 4), R(2, 9), R(-1, 7)}}) {
        const ParamSet p = params_from_hat(R(2, 7), R(3, 5), h);
        EXPECT_EQ(p.that(0) * p.that(0), p.t1() * p.t2() / (p.q() * p.t0()));
    }
}

TEST(ParamSet, DomainViolationsNameTheParameter) {
    auto name_of = [](auto&& f) {
        try {
            f();
        } catch (const ParameterError& e) {
            return e.parameter();
        }
        return std::string("none");
    };
    EXPECT_EQ(name_of([] { params_from_hat(R(2), R(1, 2), {R(1, 2), R(1, 3), R(1, 5)}); }), "q");
    EXPECT_EQ(name_of([] { params_from_hat(R(1, 2), R(1), {R(1, 2), R(1, 3), R(1, 5)}); }), "t");
    EXPECT_EQ(name_of([] { params_from_hat(R(1, 2), R(1, 2), {R(0), R(1, 3), R(1, 5)}); }), "that0");
    EXPECT_EQ(name_of([] { params_from_hat(R(1, 2), R(1, 2), {R(1, 2), R(-1), R(1, 5)}); }), "that1");
    EXPECT_EQ(name_of([] { params_from_hat(R(1, 2), R(1, 2), {R(1, 2), R(1, 3), R(3, 2)}); }), "that2");
}

TEST(ParamSet, NegativeHatsAccepted) {
    const ParamSet p = params_from_hat(R(1, 3), R(1, 2), {R(-1, 2), R(-1, 3), R(1, 5)});
    EXPECT_EQ(p.t2(), R(1, 6));
    EXPECT_EQ(p.t1(), R(-1, 10));
}
