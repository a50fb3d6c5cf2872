#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/jet.hpp"

using finsler::Jet;

TEST(Seed, SingleActiveDirectionGetsUnitGradient) {
    const std::vector<double> v{3.0};
    const std::vector<int> active{0};
    const auto j = finsler::seed(v, active);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0].value(), 3.0);
    EXPECT_EQ(j[0].grad(0), 1.0);
    EXPECT_EQ(j[0].hess(0, 0), 0.0);
}

TEST(Seed, InactiveInputIsConstant) {
    const std::vector<double> v{5.0, 2.0};
    const std::vector<int> active{1};
    const auto j = finsler::seed(v, active);
    EXPECT_EQ(j[0].value(), 5.0);
    EXPECT_EQ(j[0].grad(0), 0.0);
    EXPECT_EQ(j[0].hess(0, 0), 0.0);
    EXPECT_EQ(j[1].grad(0), 1.0);
}

TEST(Seed, DuplicateDirectionThrows) {
    const std::vector<double> v{1.0, 2.0};
    const std::vector<int> active{0, 0};
    EXPECT_THROW(finsler::seed(v, active), std::invalid_argument);
}

TEST(Arith, SquareAtThree) {
    const Jet x = Jet::variable(3.0, 0, 1);
    const Jet f = x * x;
    EXPECT_EQ(f.value(), 9.0);
    EXPECT_EQ(f.grad(0), 6.0);
    EXPECT_EQ(f.hess(0, 0), 2.0);
}

TEST(Arith, ProductOfSameJetAtTwo) {
    const Jet x = Jet::variable(2.0, 0, 1);
    const Jet f = x * x;
    EXPECT_EQ(f.value(), 4.0);
    EXPECT_EQ(f.grad(0), 4.0);
    EXPECT_EQ(f.hess(0, 0), 2.0);
}

TEST(Arith, ReciprocalAtTwo) {
    const Jet x = Jet::variable(2.0, 0, 1);
    const Jet f = 1.0 / x;
    EXPECT_DOUBLE_EQ(f.value(), 0.5);
    EXPECT_DOUBLE_EQ(f.grad(0), -0.25);
    EXPECT_DOUBLE_EQ(f.hess(0, 0), 0.25);
}

TEST(Arith, NegativePowerMatchesDivision) {
    const Jet x = Jet::variable(4.0, 0, 1);
    const Jet a = pow(x, -1.0);
    const Jet b = 1.0 / x;
    EXPECT_NEAR(a.value(), b.value(), 1e-15);
    EXPECT_NEAR(a.grad(0), b.grad(0), 1e-15);
    EXPECT_NEAR(a.hess(0, 0), b.hess(0, 0), 1e-15);
}

TEST(Arith, DivisionByZeroThrows) {
    const Jet x = Jet::variable(0.0, 0, 1);
    EXPECT_THROW(1.0 / x, finsler::DomainError);
}

TEST(Arith, FractionalPowerOfNegativeBaseThrows) {
    const Jet x = Jet::variable(-1.0, 0, 1);
    EXPECT_THROW(pow(x, 0.5), finsler::DomainError);
}

TEST(Elementary, SqrtAtFour) {
    const Jet f = sqrt(Jet::variable(4.0, 0, 1));
    EXPECT_DOUBLE_EQ(f.value(), 2.0);
    EXPECT_DOUBLE_EQ(f.grad(0), 0.25);
    EXPECT_DOUBLE_EQ(f.hess(0, 0), -1.0 / 32.0);
}

TEST(Elementary, ExpAtZero) {
    const Jet f = exp(Jet::variable(0.0, 0, 1));
    EXPECT_DOUBLE_EQ(f.value(), 1.0);
    EXPECT_DOUBLE_EQ(f.grad(0), 1.0);
    EXPECT_DOUBLE_EQ(f.hess(0, 0), 1.0);
}

TEST(Elementary, LogOfExpIsIdentity) {
    const Jet f = log(exp(Jet::variable(1.3, 0, 1)));
    EXPECT_NEAR(f.value(), 1.3, 1e-14);
    EXPECT_NEAR(f.grad(0), 1.0, 1e-14);
    EXPECT_NEAR(f.hess(0, 0), 0.0, 1e-14);
}

TEST(Elementary, LogOfNonPositiveThrows) {
    EXPECT_THROW(log(Jet::variable(0.0, 0, 1)), finsler::DomainError);
    EXPECT_THROW(sqrt(Jet::variable(-1.0, 0, 1)), finsler::DomainError);
}

TEST(FdOracle, SquareAndSine) {
    const std::vector<double> x{3.0};
    auto sq = [](std::span<const double> p) { return p[0] * p[0]; };
    EXPECT_NEAR(finsler::fd_oracle(sq, x, 0, 1e-5), 6.0, 1e-9);
    const std::vector<double> z{0.0};
    auto s = [](std::span<const double> p) { return std::sin(p[0]); };
    EXPECT_NEAR(finsler::fd_oracle(s, z, 0, 1e-5), 1.0, 1e-10);
}

// f(x, y, z) = sin(x) y^2 / (1 + z^2) + exp(x z) sqrt(2 + y)
template <class T>
T mixed(const T& x, const T& y, const T& z) {
    return sin(x) * y * y / (1.0 + z * z) + exp(x * z) * sqrt(2.0 + y);
}

TEST(Property, MixedFunctionMatchesFiniteDifferences) {
    const std::vector<double> p{0.7, -0.4, 1.1};
    const std::vector<int> active{0, 1, 2};
    const auto j = finsler::seed(p, active);
    const Jet f = mixed(j[0], j[1], j[2]);
    auto plain = [](std::span<const double> q) {
        using std::exp, std::sin, std::sqrt;
        return sin(q[0]) * q[1] * q[1] / (1.0 + q[2] * q[2]) + exp(q[0] * q[2]) * sqrt(2.0 + q[1]);
    };
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(f.grad(i), finsler::fd_oracle(plain, p, i, 1e-5), 1e-6 * std::max(1.0, std::abs(f.value())));
        for (int k = 0; k < 3; ++k)
            EXPECT_NEAR(f.hess(i, k), finsler::fd_oracle2(plain, p, i, k, 1e-4),
                        1e-4 * std::max(1.0, std::abs(f.value())));
    }
}

TEST(Property, LinearityIsExact) {
    const std::vector<double> p{0.3, 1.7};
    const std::vector<int> active{0, 1};
    const auto j = finsler::seed(p, active);
    const Jet f = sin(j[0]) * j[1];
    const Jet g = exp(j[1]) / (2.0 + j[0]);
    const Jet combo = 2.5 * f + (-1.5) * g;
    for (int i = 0; i < 2; ++i) {
        EXPECT_EQ(combo.grad(i), 2.5 * f.grad(i) + (-1.5) * g.grad(i));
        for (int k = 0; k < 2; ++k) EXPECT_EQ(combo.hess(i, k), 2.5 * f.hess(i, k) + (-1.5) * g.hess(i, k));
    }
}

TEST(Property, ProductRuleIsExactForGradient) {
    const std::vector<double> p{0.9, -0.2};
    const std::vector<int> active{0, 1};
    const auto j = finsler::seed(p, active);
    const Jet f = cos(j[0]) + j[1];
    const Jet g = j[0] * j[1] + 3.0;
    const Jet fg = f * g;
    for (int i = 0; i < 2; ++i)
        EXPECT_DOUBLE_EQ(fg.grad(i), f.value() * g.grad(i) + g.value() * f.grad(i));
}

TEST(Property, HessianIsSymmetricByStorage) {
    EXPECT_EQ(Jet::packed(2, 5), Jet::packed(5, 2));
    const std::vector<double> p{0.1, 0.2, 0.3};
    const std::vector<int> active{0, 1, 2};
    const auto j = finsler::seed(p, active);
    const Jet f = exp(j[0] * j[1]) * sin(j[2] - j[0]);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) EXPECT_EQ(f.hess(i, k), f.hess(k, i));
}
