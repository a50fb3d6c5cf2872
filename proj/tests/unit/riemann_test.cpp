#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/riemann.hpp"
#include "test_support.hpp"

namespace {

finsler::AlphaBetaBundle bundle_at(const finsler::MetricSpec& spec, std::vector<double> x) {
    return finsler::build_bundle(spec, x);
}

}  // namespace

TEST(Bundle, EuclideanIsFlat) {
    const auto spec = test_support::shipped("euclid_flat");
    const auto B = bundle_at(spec, {0.1, -0.3, 0.5});
    EXPECT_EQ(B.gamma.max_abs(), 0.0);
    EXPECT_EQ(B.riemann.max_abs(), 0.0);
    EXPECT_EQ(B.ricci.max_abs(), 0.0);
    const std::vector<double> y{0.3, 1.0, -2.0};
    for (double g : B.gbar(y)) EXPECT_EQ(g, 0.0);
    EXPECT_EQ(B.ricbar(y), 0.0);
}

TEST(Bundle, ExampleAlphaIsRicciFlatButNotFlat) {
    const auto spec = test_support::shipped("matsumoto_example");
    const auto B = bundle_at(spec, {0.2, -0.1, 0.4, 1.0, 0.3});
    std::mt19937_64 rng(5);
    double max_rbar = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto y = test_support::gaussian_vector(5, rng);
        double ysq = 0.0;
        for (double v : y) ysq += v * v;
        EXPECT_LE(std::abs(B.ricbar(y)), 1e-9 * ysq);
        max_rbar = std::max(max_rbar, B.rbar(y).max_abs());
    }
    EXPECT_GT(max_rbar, 1e-2);
}

TEST(Bundle, RoundSphereHasRicciEqualToAlphaSquared) {
    const auto spec = finsler::parse_metric("dim = 2\ndomain x1 = [0.5, 2.5]\na 1 1 = 1\na 2 2 = sin(x1)^2\n");
    const auto B = bundle_at(spec, {1.1, 0.2});
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const auto y = test_support::gaussian_vector(2, rng);
        const double a = B.alpha(y);
        EXPECT_NEAR(B.ricbar(y), a * a, 1e-9 * a * a);
    }
}

TEST(Bundle, ChristoffelsMatchFiniteDifferences) {
    const auto spec = test_support::random_spec(3, 4);
    std::mt19937_64 rng(2);
    const auto x = test_support::interior_point(spec, rng);
    const auto B = finsler::build_bundle(spec, x);
    const int n = 3;
    auto a_entry = [&](int i, int j) {
        return [&spec, i, j, n](std::span<const double> p) {
            return finsler::evaluate_a(spec, p)[static_cast<std::size_t>(i * n + j)];
        };
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double g = 0.0;
                for (int l = 0; l < n; ++l) {
                    const double d = finsler::fd_oracle(a_entry(l, j), x, k, 1e-5) +
                                     finsler::fd_oracle(a_entry(l, k), x, j, 1e-5) -
                                     finsler::fd_oracle(a_entry(j, k), x, l, 1e-5);
                    g += 0.5 * B.a_inv(i, l) * d;
                }
                EXPECT_NEAR(B.gamma(i, j, k), g, 1e-6 * std::max(1.0, std::abs(g)));
                EXPECT_EQ(B.gamma(i, j, k), B.gamma(i, k, j));
            }
}

TEST(Bundle, InverseMetric) {
    const auto spec = test_support::random_spec(4, 8);
    std::mt19937_64 rng(1);
    const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += B.a(i, k) * B.a_inv(k, j);
            EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-12);
        }
}

TEST(CovariantB, ExampleBetaIsParallel) {
    const auto B = bundle_at(test_support::shipped("matsumoto_example"), {0.2, 0.0, -0.5, 1.7, 0.1});
    EXPECT_LE(B.Db.max_abs(), 1e-12);
    EXPECT_LE(B.D2b.max_abs(), 1e-12);
}

TEST(CovariantB, RotationIsKillingNotClosed) {
    const auto spec = finsler::parse_metric("dim = 2\na 1 1 = 1\na 2 2 = 1\nb 1 = 0.2*x2\nb 2 = -0.2*x1\n");
    const auto B = bundle_at(spec, {0.3, 0.4});
    EXPECT_EQ(B.r.max_abs(), 0.0);
    EXPECT_DOUBLE_EQ(B.s(0, 1), 0.2);
    EXPECT_DOUBLE_EQ(B.s(1, 0), -0.2);
}

TEST(CovariantB, GradientFormIsHomothetic) {
    const auto B = bundle_at(test_support::shipped("euclid_homothetic"), {0.3, -0.2, 0.6});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(B.r(i, j), i == j ? 0.1 : 0.0);
    EXPECT_EQ(B.s.max_abs(), 0.0);
    const std::vector<double> y{0.5, 1.5, -1.0};
    const auto c = finsler::contract_y(B, y);
    EXPECT_NEAR(c.r00, 0.1 * c.alpha * c.alpha, 1e-15);
    EXPECT_NEAR(c.r0, 0.1 * c.beta, 1e-15);
    EXPECT_EQ(c.s0, 0.0);
}

TEST(CovariantB, SymmetricPlusAntisymmetricIsExact) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto spec = test_support::random_spec(2 + static_cast<int>(seed % 4), seed);
        std::mt19937_64 rng(seed);
        const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
        for (int i = 0; i < B.n; ++i)
            for (int j = 0; j < B.n; ++j) {
                EXPECT_EQ(B.r(i, j), B.r(j, i));
                EXPECT_EQ(B.s(i, j), -B.s(j, i));
                EXPECT_NEAR(B.r(i, j) + B.s(i, j), B.Db(i, j), 1e-15 * std::max(1.0, std::abs(B.Db(i, j))));
            }
    }
}

TEST(Bianchi, VanishesOnShippedAndRandomMetrics) {
    for (const char* stem : {"euclid_homothetic", "euclid_rotation", "matsumoto_example", "sphere_closed",
                             "warped_poly"}) {
        const auto spec = test_support::shipped(stem);
        std::mt19937_64 rng(3);
        for (int t = 0; t < 5; ++t) {
            const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
            EXPECT_LE(finsler::bianchi_check(B), 1e-10) << stem;
        }
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto spec = test_support::random_spec(3, seed);
        std::mt19937_64 rng(seed);
        const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
        const double scale = std::max({1.0, B.D2b.max_abs(), B.riemann.max_abs()});
        EXPECT_LE(finsler::bianchi_check(B), 1e-8 * scale);
    }
}

TEST(Curvature, AnnihilatesFlagPoleAndIsQuadratic) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto spec = test_support::random_spec(2 + static_cast<int>(seed), seed);
        std::mt19937_64 rng(seed + 100);
        for (int t = 0; t < 25; ++t) {
            const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
            const auto y = test_support::gaussian_vector(B.n, rng);
            const auto R = B.rbar(y);
            const double scale = std::max(1.0, R.max_abs());
            for (int i = 0; i < B.n; ++i) {
                double v = 0.0;
                for (int k = 0; k < B.n; ++k) v += R(i, k) * y[static_cast<std::size_t>(k)];
                EXPECT_NEAR(v, 0.0, 1e-12 * scale);
            }
            std::vector<double> y3 = y;
            for (double& v : y3) v *= 3.0;
            EXPECT_NEAR(B.ricbar(y3), 9.0 * B.ricbar(y), 1e-12 * std::max(1.0, std::abs(9.0 * B.ricbar(y))));
        }
    }
}

TEST(Horizontal, IdentityFieldHasTrivialDerivatives) {
    const auto spec = test_support::random_spec(3, 2);
    std::mt19937_64 rng(4);
    const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
    const auto y = test_support::gaussian_vector(3, rng);
    const auto field = finsler::seed_y(y, 3);
    const auto d = finsler::horizontal_derivative(field, B, y);
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) {
            EXPECT_DOUBLE_EQ(d.vertical(k, j), k == j ? 1.0 : 0.0);
            EXPECT_NEAR(d.horizontal(k, j), 0.0, 1e-14);
        }
}
