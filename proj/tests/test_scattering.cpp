#include "rsmorse/scattering.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace rsmorse;

namespace {

Rational R(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

FloatParams reference() { return FloatParams::from(params_from_hat(R(1, 3), R(1, 2), {R(1, 2), R(1, 3), R(1, 5)})); }
FloatParams signed_set() { return FloatParams::from(params_from_hat(R(2, 7), R(3, 5), {R(-2, 3), R(1, 4), R(-3, 7)})); }

Complex poch_terms(Complex x, double q, int terms) {
    Complex p(1);
    for (int l = 0; l < terms; ++l) p *= 1.0 - x * std::pow(q, l);
    return p;
}

Complex literal_s(double x, const FloatParams& p) {
    auto e = [](double a) { return std::polar(1.0, a); };
    return poch_terms(p.q * e(x), p.q, 200) * poch_terms(p.t * e(-x), p.q, 200) /
           (poch_terms(p.q * e(-x), p.q, 200) * poch_terms(p.t * e(x), p.q, 200));
}

Complex literal_s0(double x, const FloatParams& p) {
    auto e = [](double a) { return std::polar(1.0, a); };
    Complex v = poch_terms(p.q * e(2 * x), p.q, 200) / poch_terms(p.q * e(-2 * x), p.q, 200);
    for (double h : p.that) v *= poch_terms(h * e(-x), p.q, 200) / poch_terms(h * e(x), p.q, 200);
    return v;
}

// chi by explicit enumeration of signs and permutations, written independently of the group helper.
Complex literal_chi(const std::vector<double>& xi, const Partition& lambda) {
    const int n = lambda.size();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Complex total(0);
    do {
        int inversions = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) inversions += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            double phase = 0;
            int sign = inversions % 2 ? -1 : 1;
            for (int i = 0; i < n; ++i) {
                const int src = perm[static_cast<std::size_t>(i)];
                const double v = n - src + lambda[src];
                const int eps = (mask >> i) & 1u ? -1 : 1;
                sign *= eps;
                phase += eps * v * xi[static_cast<std::size_t>(i)];
            }
            total += static_cast<double>(sign) * std::polar(1.0, phase);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total * std::pow(2 * std::numbers::pi, -n / 2.0) / std::pow(Complex(0, 1), n * n);
}

}  // namespace

TEST(PairFactor, ValueAtZero) { EXPECT_NEAR(std::abs(s_pair(0.0, reference()) - 1.0), 0.0, 1e-15); }

TEST(PairFactor, ConjugateReciprocal) {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-6, 6);
    for (const FloatParams& p : {reference(), signed_set()})
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng);
            const Complex s = s_pair(x, p);
            EXPECT_NEAR(std::abs(s_pair(-x, p) - std::conj(s)), 0.0, 1e-13);
            EXPECT_NEAR(std::abs(s_pair(-x, p) * s - 1.0), 0.0, 1e-13);
        }
}

TEST(PairFactor, TrivialWhenQEqualsT) {
    FloatParams p = reference();
    p.t = p.q;
    for (double x : {0.1, 1.3, 2.9}) EXPECT_NEAR(std::abs(s_pair(x, p) - 1.0), 0.0, 1e-14);
}

TEST(PairFactor, MatchesLongProducts) {
    for (const FloatParams& p : {reference(), signed_set()})
        for (double x : {0.4, 1.7, -2.2}) {
            EXPECT_NEAR(std::abs(s_pair(x, p) - literal_s(x, p)), 0.0, 1e-13);
            EXPECT_NEAR(std::abs(s_one(x, p) - literal_s0(x, p)), 0.0, 1e-13);
        }
}

TEST(ScatteringMatrix, Unimodular) {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    for (const FloatParams& p : {reference(), signed_set()})
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            EXPECT_NEAR(std::abs(s_pair(x, p)), 1.0, 1e-12);
            EXPECT_NEAR(std::abs(s_one(x, p)), 1.0, 1e-12);
            const std::vector<double> xi{u(rng), u(rng), u(rng)};
            EXPECT_NEAR(std::abs(S_hat(xi, p)), 1.0, 1e-12);
        }
}

TEST(ScatteringMatrix, FactorizesIntoPairAndOneBodyFactors) {
    const FloatParams p = signed_set();
    const AlcovePoint one({1.9});
    EXPECT_NEAR(std::abs(S_hat(one, p) - s_one(1.9, p)), 0.0, 1e-15);
    const std::vector<double> xi{2.3, 0.8};
    const Complex expected = literal_s(xi[0] - xi[1], p) * literal_s(xi[0] + xi[1], p) * literal_s0(xi[0], p) * literal_s0(xi[1], p);
    EXPECT_NEAR(std::abs(S_hat(AlcovePoint(xi), p) - expected), 0.0, 1e-12);
}

TEST(ScatteringMatrix, OneBodyFactorTrivialWithoutCouplings) {
    const FloatParams p{0.0, 0.5, {0.0, 0.0, 0.0}};
    for (double x : {0.3, 1.4, 2.8}) EXPECT_NEAR(std::abs(s_one(x, p) - 1.0), 0.0, 1e-15);
}

TEST(ScatteringMatrix, ReducesToPairPartWithoutCouplings) {
    const FloatParams p{1e-300, 0.4, {1e-300, 1e-300, 1e-300}};
    const std::vector<double> xi{2.1, 0.6};
    const Complex pair = s_pair(xi[0] - xi[1], p) * s_pair(xi[0] + xi[1], p);
    EXPECT_NEAR(std::abs(S_hat(xi, p) - pair), 0.0, 1e-14);
}

TEST(Branches, SquaresReproduceFactors) {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    for (const FloatParams& p : {reference(), signed_set()}) {
        EXPECT_NEAR(std::abs(sqrt_branch_s(0.0, p) - 1.0), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(sqrt_branch_s0(0.0, p) - 1.0), 0.0, 1e-15);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const Complex a = sqrt_branch_s(x, p), b = sqrt_branch_s0(x, p);
            EXPECT_NEAR(std::abs(a), 1.0, 1e-12);
            EXPECT_NEAR(std::abs(b), 1.0, 1e-12);
            EXPECT_NEAR(std::abs(a * a - s_pair(x, p)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(b * b - s_one(x, p)), 0.0, 1e-12);
        }
    }
}

TEST(FreeKernel, OneParticleSine) {
    for (int lam = 0; lam <= 5; ++lam)
        for (double xi : {0.3, 1.7, 2.9}) {
            const Complex c = chi(std::vector{xi}, Partition{lam});
            EXPECT_NEAR(c.real(), std::sqrt(2 / std::numbers::pi) * std::sin((lam + 1) * xi), 1e-14);
            EXPECT_NEAR(c.imag(), 0.0, 1e-14);
        }
}

TEST(FreeKernel, DeterminantMatchesGroupSum) {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int n = 1; n <= 4; ++n)
        for (const auto& lambda : partitions_up_to(n, 3)) {
            std::vector<double> xi(static_cast<std::size_t>(n));
            for (auto& x : xi) x = u(rng);
            const Complex d = chi(xi, lambda);
            EXPECT_NEAR(std::abs(d - chi_group_sum(xi, lambda)), 0.0, 1e-11);
            EXPECT_NEAR(std::abs(d - literal_chi(xi, lambda)), 0.0, 1e-11);
        }
}

TEST(FreeKernel, AntiInvariant) {
    const std::vector<double> xi{2.1, 1.2, 0.4};
    for (const auto& w : hyperoctahedral_group(3)) {
        const auto wxi = w.apply<double>(xi);
        EXPECT_NEAR(std::abs(chi(wxi, Partition{2, 1, 0}) - static_cast<double>(w.sign()) * chi(xi, Partition{2, 1, 0})),
                    0.0, 1e-12);
    }
}

TEST(FreeKernel, VanishesOnTheWalls) {
    EXPECT_NEAR(std::abs(chi(std::vector{0.0, 1.0}, Partition{1, 0})), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(chi(std::vector{std::numbers::pi, 1.0}, Partition{1, 0})), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(chi(std::vector{1.0, 1.0}, Partition{2, 1})), 0.0, 1e-13);
}

TEST(Laplacian, OneParticleOrigin) {
    const auto out = apply_H0(LatticeFunction<Rational>::delta(Partition{0}));
    ASSERT_EQ(out.values.size(), 1u);
    EXPECT_EQ(out.at(Partition{1}), 1);
}

TEST(Laplacian, Linear) {
    LatticeFunction<Rational> f(2), g(2), h(2);
    f.add(Partition{1, 0}, R(2));
    g.add(Partition{2, 2}, R(-3, 4));
    h = f;
    h.add(Partition{2, 2}, R(-3, 4));
    auto a = apply_H0(f);
    for (const auto& [k, v] : apply_H0(g).values) a.add(k, v);
    a.prune();
    EXPECT_EQ(apply_H0(h).values, a.values);
}

TEST(Laplacian, FreeKernelIsAnEigenfunction) {
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> u(0.01, std::numbers::pi - 0.01);
    int checked = 0;
    for (int n = 1; n <= 3; ++n) {
        const auto sites = partitions_up_to(n, 6);
        for (int trial = 0; trial < 17; ++trial, ++checked) {
            std::vector<double> xi(static_cast<std::size_t>(n));
            for (auto& x : xi) x = u(rng);
            double energy = 0;
            for (double x : xi) energy += 2 * std::cos(x);
            LatticeFunction<Complex> f(n);
            for (const auto& lambda : sites) f.add(lambda, chi(xi, lambda));
            const auto Hf = apply_H0(f);
            // Rows whose neighbours all lie inside the sampled set.
            for (const auto& lambda : partitions_up_to(n, 5))
                EXPECT_NEAR(std::abs(Hf.at(lambda) - energy * chi(xi, lambda)), 0.0, 1e-12) << lambda.str();
        }
    }
    EXPECT_GE(checked, 50);
}

TEST(Sorting, OneParticleFlipsSign) {
    const auto sp = sorting_permutation(AlcovePoint({1.0}));
    ASSERT_TRUE(sp.regular);
    EXPECT_EQ(sp.w.signs, std::vector<int>{-1});
    EXPECT_NEAR(sp.w_xi[0], -1.0, 0.0);
}

TEST(Sorting, TieIsIrregular) {
    const auto sp = sorting_permutation(AlcovePoint({2 * std::numbers::pi / 3, std::numbers::pi / 3}));
    EXPECT_FALSE(sp.regular);
    EXPECT_THROW(scattering_symbol(sp, reference()), DomainError);
}

TEST(Sorting, OrdersGradientDescending) {
    const auto sp = sorting_permutation(AlcovePoint({2.5, 0.5}));
    ASSERT_TRUE(sp.regular);
    // |2 sin 2.5| = 1.197 > |2 sin 0.5| = 0.959
    EXPECT_EQ(sp.w.perm, (std::vector<int>{0, 1}));
    EXPECT_EQ(sp.w.signs, (std::vector<int>{-1, -1}));
    const auto b = sorting_permutation(AlcovePoint({2.9, 1.2}));
    ASSERT_TRUE(b.regular);
    EXPECT_EQ(b.w.perm, (std::vector<int>{1, 0}));
    std::vector<double> grad;
    for (double x : b.w_xi) grad.push_back(-2 * std::sin(x));
    EXPECT_GT(grad[0], grad[1]);
    EXPECT_GT(grad[1], 0);
    EXPECT_NEAR(std::abs(scattering_symbol(b, reference())), 1.0, 1e-12);
}
