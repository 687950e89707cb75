#include "rsmorse/combinatorics.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <set>

using namespace rsmorse;

namespace {

Rational R(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

ParamSet reference_params() { return params_from_hat(R(1, 3), R(1, 2), {R(1, 2), R(1, 3), R(1, 5)}); }

// Every weakly decreasing nonnegative vector of length n with weight <= w, by
// brute force over the box [0, w]^n.
std::vector<Partition> brute_partitions(int n, int w) {
    std::vector<Partition> out;
    std::vector<int> v(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            int sum = 0;
            for (int x : v) sum += x;
            if (sum <= w && std::is_sorted(v.rbegin(), v.rend())) out.emplace_back(v);
            return;
        }
        for (int x = 0; x <= w; ++x) {
            v[static_cast<std::size_t>(pos)] = x;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

bool partial_sums_leq(const Partition& a, const Partition& b) {
    int sa = 0, sb = 0;
    for (int k = 0; k < a.size(); ++k) {
        sa += a[k];
        sb += b[k];
        if (sa > sb) return false;
    }
    return true;
}

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    long a = num(rng);
    if (a == 0) a = 1;
    return R(a, den(rng));
}

}  // namespace

TEST(Partition, RejectsIncreasingOrNegative) {
    EXPECT_THROW(Partition({1, 2}), std::invalid_argument);
    EXPECT_THROW(Partition({0, -1}), std::invalid_argument);
    EXPECT_NO_THROW(Partition({3, 3, 0}));
}

TEST(Dominance, Examples) {
    EXPECT_TRUE(dominance_leq(Partition{1, 1}, Partition{2, 0}));
    EXPECT_FALSE(dominance_leq(Partition{2, 0}, Partition{1, 1}));
    EXPECT_TRUE(dominance_leq(Partition{1, 0, 0}, Partition{2, 2, 2}));
    EXPECT_THROW(dominance_leq(Partition{1}, Partition{1, 0}), std::invalid_argument);
}

TEST(Dominance, IsPartialOrder) {
    for (int n = 1; n <= 4; ++n) {
        const auto all = partitions_up_to(n, 6);
        for (const auto& a : all) {
            EXPECT_TRUE(dominance_leq(a, a));
            for (const auto& b : all) {
                const bool ab = dominance_leq(a, b);
                EXPECT_EQ(ab, partial_sums_leq(a, b));
                if (ab && dominance_leq(b, a)) {
                    EXPECT_EQ(a, b);
                }
                if (!ab) continue;
                for (const auto& c : all) {
                    if (dominance_leq(b, c)) {
                        EXPECT_TRUE(dominance_leq(a, c));
                    }
                }
            }
        }
    }
}

TEST(Partitions, EnumerationMatchesBruteForce) {
    for (int n = 1; n <= 4; ++n)
        for (int w = 0; w <= 5; ++w) {
            auto a = partitions_up_to(n, w);
            auto b = brute_partitions(n, w);
            EXPECT_EQ(std::set<Partition>(a.begin(), a.end()), std::set<Partition>(b.begin(), b.end()));
            EXPECT_EQ(a.size(), b.size());
        }
}

TEST(Ideal, SmallExamples) {
    EXPECT_EQ(ideal(Partition{0, 0}).members, (std::vector<Partition>{{0, 0}}));
    EXPECT_EQ(ideal(Partition{1, 0}).members, (std::vector<Partition>{{0, 0}, {1, 0}}));
    const auto id = ideal(Partition{2, 0});
    EXPECT_EQ(std::set<Partition>(id.members.begin(), id.members.end()),
              (std::set<Partition>{{0, 0}, {1, 0}, {1, 1}, {2, 0}}));
}

TEST(Ideal, MatchesFilteredEnumeration) {
    for (int n = 1; n <= 4; ++n)
        for (const auto& lambda : partitions_up_to(n, 5)) {
            std::set<Partition> expected;
            for (const auto& mu : brute_partitions(n, lambda.weight()))
                if (partial_sums_leq(mu, lambda)) expected.insert(mu);
            const auto id = ideal(lambda);
            EXPECT_EQ(std::set<Partition>(id.members.begin(), id.members.end()), expected) << lambda.str();
            EXPECT_EQ(id.members.size(), expected.size());
            for (std::size_t i = 0; i < id.size(); ++i)
                for (std::size_t j = i + 1; j < id.size(); ++j)
                    EXPECT_FALSE(dominance_leq(id.members[j], id.members[i]) && id.members[i] != id.members[j]);
        }
}

TEST(SignedPermutation, GroupOrderAndSigns) {
    for (int n = 1; n <= 4; ++n) {
        const auto group = hyperoctahedral_group(n);
        long order = 1;
        for (int k = 1; k <= n; ++k) order *= 2 * k;
        EXPECT_EQ(static_cast<long>(group.size()), order);
        int total = 0;
        for (const auto& w : group) total += w.sign();
        EXPECT_EQ(total, 0);
    }
}

TEST(SignedPermutation, TranspositionIsOdd) {
    SignedPermutation w{{1, 0, 2}, {1, 1, 1}};
    EXPECT_EQ(w.sign(), -1);
    SignedPermutation flip{{0, 1, 2}, {1, -1, 1}};
    EXPECT_EQ(flip.sign(), -1);
    const std::vector<int> v{5, 6, 7};
    EXPECT_EQ(w.apply<int>(v), (std::vector<int>{6, 5, 7}));
    EXPECT_EQ(flip.apply<int>(v), (std::vector<int>{5, -6, 7}));
}

TEST(Orbit, MatchesGroupImage) {
    for (int n = 1; n <= 3; ++n)
        for (const auto& lambda : partitions_up_to(n, 4)) {
            std::set<std::vector<int>> image;
            for (const auto& w : hyperoctahedral_group(n)) image.insert(w.apply<int>(lambda.parts()));
            const auto orb = orbit(lambda);
            EXPECT_EQ(orb.size(), image.size()) << lambda.str();
            EXPECT_EQ(std::set<std::vector<int>>(orb.begin(), orb.end()), image);
        }
}

TEST(Monomial, Examples) {
    EXPECT_EQ(monomial_eval<Rational>(Partition{0, 0}, std::vector{R(2), R(3)}), 1);
    EXPECT_EQ(monomial_eval<Rational>(Partition{1}, std::vector{R(4, 5)}), R(4, 5) + R(5, 4));
    EXPECT_EQ(monomial_eval<Rational>(Partition{1, 1}, std::vector{R(2), R(3)}), R(50, 6));
}

TEST(Monomial, ZeroCoordinateRejected) {
    EXPECT_THROW(monomial_eval<Rational>(Partition{1, 0}, std::vector{R(0), R(3)}), std::exception);
}

TEST(Monomial, InvariantUnderSignedPermutations) {
    std::mt19937_64 rng(11);
    const auto group = hyperoctahedral_group(3);
    std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
    for (const auto& lambda : partitions_up_to(3, 4)) {
        std::vector<Rational> z{random_rational(rng), random_rational(rng), random_rational(rng)};
        const Rational ref = monomial_eval<Rational>(lambda, z);
        for (int trial = 0; trial < 5; ++trial) {
            const auto& w = group[pick(rng)];
            // Signs act on exponents, which on the multiplicative torus means inversion.
            std::vector<Rational> wz(3);
            for (int i = 0; i < 3; ++i) {
                const Rational& x = z[static_cast<std::size_t>(w.perm[static_cast<std::size_t>(i)])];
                wz[static_cast<std::size_t>(i)] = w.signs[static_cast<std::size_t>(i)] > 0 ? x : Rational(1 / x);
            }
            EXPECT_EQ(monomial_eval<Rational>(lambda, wz), ref);
        }
    }
}

TEST(SymmetricFunctions, SmallValues) {
    const std::vector<Rational> z{R(2), R(3)};
    const std::vector<Rational> x{R(5, 7)};
    EXPECT_EQ(elem_sym<Rational>(0, z), 1);
    EXPECT_EQ(complete_sym<Rational>(0, z), 1);
    EXPECT_EQ(elem_sym<Rational>(1, z), 5);
    EXPECT_EQ(elem_sym<Rational>(2, z), 6);
    EXPECT_EQ(elem_sym<Rational>(3, z), 0);
    EXPECT_EQ(complete_sym<Rational>(2, x), R(25, 49));
    EXPECT_EQ(complete_sym<Rational>(2, z), 4 + 6 + 9);
}

TEST(SymmetricFunctions, GeneratingFunctionDuality) {
    // sum_k (-1)^k e_k h_{m-k} = 0 for m >= 1 over the same alphabet.
    const std::vector<Rational> z{R(1, 2), R(-3, 5), R(7, 4)};
    for (int m = 1; m <= 5; ++m) {
        Rational s(0);
        for (int k = 0; k <= m; ++k)
            s += (k % 2 ? -1 : 1) * elem_sym<Rational>(k, z) * complete_sym<Rational>(m - k, z);
        EXPECT_EQ(s, 0) << m;
    }
}

TEST(Eln, DegreeZeroAndSizeCheck) {
    const std::vector<Rational> z{R(2), R(3)};
    EXPECT_EQ(eval_Eln<Rational>(0, z, std::vector{R(1), R(1, 2), R(1, 3)}), 1);
    EXPECT_THROW(eval_Eln<Rational>(1, z, std::vector{R(1)}), std::invalid_argument);
    EXPECT_THROW(eval_Eln<Rational>(3, z, std::vector<Rational>{}), std::invalid_argument);
}

TEST(Eln, RecurrenceAtGeneralInputs) {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 5; ++n)
        for (int l = 1; l <= n; ++l)
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<Rational> z(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n - l + 1));
                for (auto& v : z) v = random_rational(rng);
                for (auto& v : y) v = random_rational(rng);
                const std::span<const Rational> tail(z.data() + 1, z.size() - 1);
                const std::span<const Rational> ytail(y.data() + 1, y.size() - 1);
                Rational rhs = (z[0] - y[0]) * eval_Eln<Rational>(l - 1, tail, y);
                if (l < n) rhs += eval_Eln<Rational>(l, tail, ytail);
                EXPECT_EQ(eval_Eln<Rational>(l, z, y), rhs) << n << ' ' << l;
            }
}

TEST(Eln, Homogeneity) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 4; ++n)
        for (int l = 0; l <= n; ++l) {
            const Rational s = random_rational(rng);
            std::vector<Rational> z(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n - l + 1));
            for (auto& v : z) v = random_rational(rng);
            for (auto& v : y) v = random_rational(rng);
            auto sz = z, sy = y;
            for (auto& v : sz) v *= s;
            for (auto& v : sy) v *= s;
            EXPECT_EQ(eval_Eln<Rational>(l, sz, sy), rpow(s, l) * eval_Eln<Rational>(l, z, y));
        }
}

TEST(Eigenvalues, OneParticle) {
    const ParamSet p = params_from_hat(R(1, 2), R(1, 2), {R(1, 2), R(1, 3), R(1, 5)});
    EXPECT_EQ(eval_E(Partition{2}, p), 3);
    EXPECT_EQ(eval_E(Partition{0}, p), 0);
    const double xi = std::numbers::pi / 2;
    EXPECT_NEAR(eval_Ehat(std::span<const double>(&xi, 1), p), -2.5, 1e-15);
    EXPECT_NEAR(eval_Ehat_l(1, std::span<const double>(&xi, 1), p), -2.5, 1e-15);
}

TEST(Eigenvalues, TwoParticleTopDegree) {
    const ParamSet p = reference_params();
    const Rational q = p.q(), t = p.t();
    EXPECT_EQ(eval_E_l(Partition{1, 1}, 2, p), (1 / t) * (1 / q - t) * (t / q - t));
    EXPECT_EQ(eval_E_l(Partition{0, 0}, 2, p), 0);

    const std::vector<Rational> c{R(1, 2), R(1, 3)};
    const Rational h = p.that(0);
    EXPECT_EQ(eval_Ehat_l_from_cos<Rational>(2, c, p), (2 * c[0] - h - 1 / h) * (2 * c[1] - h - 1 / h));
    EXPECT_EQ(eval_Ehat_l_from_cos<Rational>(1, c, p),
              (2 * c[0] - t * h - 1 / (t * h)) + (2 * c[1] - h - 1 / h));
}

TEST(Eigenvalues, DegreeOneReducesToSum) {
    const ParamSet p = reference_params();
    for (int n = 1; n <= 4; ++n)
        for (const auto& lambda : partitions_up_to(n, 5)) EXPECT_EQ(eval_E_l(lambda, 1, p), eval_E(lambda, p));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, std::numbers::pi);
    for (int n = 1; n <= 4; ++n) {
        std::vector<double> xi(static_cast<std::size_t>(n));
        for (auto& x : xi) x = u(rng);
        EXPECT_NEAR(eval_Ehat_l(1, xi, p), eval_Ehat(xi, p), 1e-13);
    }
}

TEST(Eigenvalues, SymmetricFunctionForm) {
    const ParamSet p = reference_params();
    const Rational t = p.t();
    for (int n = 1; n <= 4; ++n)
        for (const auto& lambda : partitions_up_to(n, 5))
            for (int l = 1; l <= n; ++l) {
                std::vector<Rational> z, y;
                for (int j = 0; j < n; ++j) z.push_back(rpow(t, j) * rpow(p.q(), -lambda[j]));
                for (int k = l - 1; k <= n - 1; ++k) y.push_back(rpow(t, k));
                const Rational expected = rpow(t, -static_cast<long>(l) * (l - 1) / 2) * eval_Eln<Rational>(l, z, y);
                EXPECT_EQ(eval_E_l(lambda, l, p), expected) << lambda.str() << " l=" << l;
            }
}

TEST(Eigenvalues, NonnegativeOnLattice) {
    const ParamSet p = reference_params();
    for (int n = 1; n <= 4; ++n)
        for (const auto& lambda : partitions_up_to(n, 8))
            for (int l = 1; l <= n; ++l) EXPECT_GE(eval_E_l(lambda, l, p), 0) << lambda.str();
}

TEST(Eigenvalues, DegreeOutOfRange) {
    const ParamSet p = reference_params();
    EXPECT_THROW(eval_E_l(Partition{1, 0}, 3, p), std::invalid_argument);
    EXPECT_THROW(eval_E_l(Partition{1, 0}, 0, p), std::invalid_argument);
    const std::vector<double> xi{0.3};
    EXPECT_THROW(eval_Ehat_l(2, xi, p), std::invalid_argument);
}
