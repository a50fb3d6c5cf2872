#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "finsler/quadrature.hpp"
#include "finsler/random_metric.hpp"

TEST(GaussLegendre, RuleIntegratesPolynomialsExactly) {
    const auto& rule = finsler::gauss_legendre_10();
    double w = 0.0;
    for (double v : rule.weights()) w += v;
    EXPECT_NEAR(w, 2.0, 1e-14);
    auto p = [](double x) { return std::pow(x, 18) + 3.0 * std::pow(x, 7) - x * x; };
    double sum = 0.0;
    for (int i = 0; i < rule.order(); ++i)
        sum += rule.weights()[static_cast<std::size_t>(i)] * p(rule.nodes()[static_cast<std::size_t>(i)]);
    EXPECT_NEAR(sum, 2.0 / 19.0 - 2.0 / 3.0, 1e-14);
}

TEST(Adaptive, SmoothIntegrals) {
    EXPECT_NEAR(finsler::integrate<double>([](double t) { return std::sin(t); }, 0.0, std::numbers::pi), 2.0, 1e-12);
    EXPECT_NEAR(finsler::integrate<double>([](double t) { return 1.0 / (1.0 - 0.45 * std::cos(t)); }, 0.0,
                                           std::numbers::pi),
                std::numbers::pi / std::sqrt(1.0 - 0.45 * 0.45), 1e-11);
}

TEST(Adaptive, JetIntegrandCarriesParameterDerivatives) {
    // I(b) = int_0^pi (1 - b cos t)^2 dt = pi (1 + b^2 / 2)
    const double b = 0.3;
    const finsler::Jet bj = finsler::Jet::variable(b, 0, 1);
    const auto I = finsler::integrate<finsler::Jet>(
        [&](double t) {
            const finsler::Jet u = 1.0 - bj * std::cos(t);
            return u * u;
        },
        0.0, std::numbers::pi);
    EXPECT_NEAR(I.value(), std::numbers::pi * (1.0 + b * b / 2.0), 1e-12);
    EXPECT_NEAR(I.grad(0), std::numbers::pi * b, 1e-12);
    EXPECT_NEAR(I.hess(0, 0), std::numbers::pi, 1e-12);
}

TEST(RandomMetric, DeterministicAndValid) {
    finsler::RandomMetricOptions opt;
    opt.dim = 4;
    opt.seed = 42;
    EXPECT_EQ(finsler::random_metric_text(opt), finsler::random_metric_text(opt));
    const auto spec = finsler::random_metric(opt);
    EXPECT_EQ(spec.name, "random-4-42");
    const auto rep = finsler::validate_spec(spec, 300, 5);
    EXPECT_TRUE(rep.valid());
    EXPECT_LE(rep.max_bsq, 0.2 + 1e-12);
    EXPECT_GT(rep.min_pivot, 0.0);
    opt.seed = 43;
    EXPECT_NE(finsler::random_metric_text(opt), finsler::random_metric_text({4, 42}));
}
