#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/finsler.hpp"
#include "finsler/scurvature.hpp"
#include "test_support.hpp"

using finsler::VolumeForm;

namespace {

constexpr VolumeForm kForms[] = {VolumeForm::BusemannHausdorff, VolumeForm::HolmesThompson};

}  // namespace

TEST(VolumeFactor, EqualsOneWithoutBeta) {
    for (int n = 2; n <= 8; ++n)
        for (auto form : kForms) EXPECT_NEAR(finsler::volume_factor(n, 0.0, form).f, 1.0, 1e-10) << n;
}

TEST(VolumeFactor, TwoDimensionalClosedForm) {
    EXPECT_NEAR(finsler::volume_factor(2, 0.3, VolumeForm::BusemannHausdorff).f, 1.0 / 1.045, 1e-8);
}

TEST(VolumeFactor, DerivativeMatchesFiniteDifference) {
    for (int n : {2, 3, 5})
        for (auto form : kForms)
            for (double b : {0.1, 0.25, 0.4}) {
                const auto vf = finsler::volume_factor(n, b, form);
                const double h = 1e-5;
                const double fd = (finsler::volume_factor(n, b + h, form).f -
                                   finsler::volume_factor(n, b - h, form).f) / (2.0 * h);
                EXPECT_NEAR(vf.fprime, fd, 1e-7);
                EXPECT_GT(vf.f, 0.0);
            }
}

TEST(VolumeFactor, LambdaIsContinuousThroughZero) {
    for (auto form : kForms) {
        const double near0 = finsler::volume_factor(4, 5e-5, form).lambda;
        const double small = finsler::volume_factor(4, 2e-3, form).lambda;
        EXPECT_TRUE(std::isfinite(near0));
        EXPECT_NEAR(near0, small, 1e-4 * std::max(1.0, std::abs(small)));
    }
}

TEST(VolumeFactor, RejectsOutOfRange) {
    EXPECT_THROW(finsler::volume_factor(3, 0.5, VolumeForm::BusemannHausdorff), std::domain_error);
    EXPECT_THROW(finsler::volume_factor(3, -0.1, VolumeForm::HolmesThompson), std::domain_error);
    EXPECT_THROW(finsler::volume_factor(1, 0.1, VolumeForm::HolmesThompson), std::domain_error);
}

TEST(VolumeFactor, ConcurrentLookupsAgree) {
    std::vector<double> results(8);
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([t, &results] {
            results[static_cast<std::size_t>(t)] = finsler::volume_factor(6, 0.3125, VolumeForm::HolmesThompson).f;
        });
    for (auto& th : pool) th.join();
    for (double r : results) EXPECT_EQ(r, results.front());
}

TEST(SCurvature, ConstantKillingExampleVanishes) {
    const auto spec = test_support::shipped("matsumoto_example");
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
        const auto y = test_support::gaussian_vector(5, rng);
        for (auto form : kForms) {
            EXPECT_LE(std::abs(finsler::s_curvature_closed(B, y, form)), 1e-10);
            EXPECT_LE(std::abs(finsler::s_curvature_def(B, y, form)), 1e-9);
        }
    }
}

TEST(SCurvature, EuclideanWithoutBetaVanishes) {
    const auto B = finsler::build_bundle(test_support::shipped("euclid_flat"), std::vector<double>{0.1, 0.2, 0.3});
    const std::vector<double> y{1.0, 2.0, -1.0};
    EXPECT_EQ(finsler::s_curvature_def(B, y, VolumeForm::BusemannHausdorff), 0.0);
    EXPECT_EQ(finsler::s_curvature_closed(B, y, VolumeForm::BusemannHausdorff), 0.0);
}

TEST(SCurvature, HomotheticBetaHasNonzeroS) {
    const auto spec = test_support::shipped("euclid_homothetic");
    std::mt19937_64 rng(2);
    double max_s = 0.0;
    for (int t = 0; t < 10; ++t) {
        const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
        const auto y = test_support::gaussian_vector(3, rng);
        const double sc = finsler::s_curvature_closed(B, y, VolumeForm::BusemannHausdorff);
        const double sd = finsler::s_curvature_def(B, y, VolumeForm::BusemannHausdorff);
        EXPECT_LE(std::abs(sc - sd), 1e-7 * std::max(1.0, std::abs(sc)));
        max_s = std::max(max_s, std::abs(sc));
    }
    EXPECT_GT(max_s, 1e-3);
}

TEST(SCurvature, ClosedFormAndDefinitionAgreeEverywhere) {
    std::vector<finsler::MetricSpec> specs;
    for (const char* stem : {"euclid_rotation", "sphere_closed", "warped_poly"})
        specs.push_back(test_support::shipped(stem));
    for (std::uint64_t seed = 1; seed <= 4; ++seed) specs.push_back(test_support::random_spec(1 + static_cast<int>(seed), seed));
    for (const auto& spec : specs) {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 10; ++t) {
            const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
            const auto y = test_support::gaussian_vector(B.n, rng);
            for (auto form : kForms) {
                const double sc = finsler::s_curvature_closed(B, y, form);
                const double sd = finsler::s_curvature_def(B, y, form);
                EXPECT_LE(std::abs(sc - sd), 1e-7 * std::max(1.0, std::abs(sc))) << spec.name;
            }
        }
    }
}

TEST(SCurvature, PrintedVariantDisagreesWithDefinition) {
    const auto spec = test_support::shipped("euclid_homothetic");
    std::mt19937_64 rng(4);
    double gap = 0.0;
    for (int t = 0; t < 10; ++t) {
        const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
        const auto y = test_support::gaussian_vector(3, rng);
        const double printed =
            finsler::s_curvature_closed(B, y, VolumeForm::BusemannHausdorff, finsler::ClosedFormVariant::AsPrinted);
        gap = std::max(gap, std::abs(printed - finsler::s_curvature_def(B, y, VolumeForm::BusemannHausdorff)));
    }
    EXPECT_GT(gap, 1e-3);
}

TEST(SCurvature, HomogeneousOfDegreeOne) {
    const auto spec = test_support::shipped("warped_poly");
    std::mt19937_64 rng(5);
    const auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
    const auto y = test_support::gaussian_vector(3, rng);
    std::vector<double> y2 = y;
    for (double& v : y2) v *= 1.7;
    for (auto form : kForms) {
        EXPECT_LE(test_support::rel_diff(finsler::s_curvature_closed(B, y2, form),
                                         1.7 * finsler::s_curvature_closed(B, y, form)),
                  1e-13);
        EXPECT_LE(test_support::rel_diff(finsler::s_curvature_def(B, y2, form),
                                         1.7 * finsler::s_curvature_def(B, y, form)),
                  1e-11);
    }
}

TEST(ConstantKilling, Verdicts) {
    auto verdict = [](const char* stem) {
        const auto spec = test_support::shipped(stem);
        std::mt19937_64 rng(6);
        std::vector<finsler::AlphaBetaBundle> bundles;
        for (int t = 0; t < 5; ++t) bundles.push_back(finsler::build_bundle(spec, test_support::interior_point(spec, rng)));
        return finsler::constant_killing_verdict(bundles, 1e-10);
    };
    EXPECT_TRUE(verdict("matsumoto_example").constant_killing);
    EXPECT_TRUE(verdict("euclid_constant").constant_killing);
    const auto hom = verdict("euclid_homothetic");
    EXPECT_FALSE(hom.constant_killing);
    EXPECT_NEAR(hom.max_r, 0.1, 1e-15);
    const auto rot = verdict("euclid_rotation");
    EXPECT_FALSE(rot.constant_killing);
    EXPECT_EQ(rot.max_r, 0.0);
    EXPECT_GT(rot.max_s_i, 1e-3);
    EXPECT_THROW(finsler::constant_killing_verdict({}, 1e-10), std::invalid_argument);
}
