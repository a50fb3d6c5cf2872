#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/appendix.hpp"
#include "finsler/finsler.hpp"
#include "test_support.hpp"

namespace {

struct Sample {
    finsler::AlphaBetaBundle B;
    std::vector<double> y;
};

std::vector<Sample> samples(const finsler::MetricSpec& spec, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Sample> out;
    for (int t = 0; t < count; ++t) {
        auto B = finsler::build_bundle(spec, test_support::interior_point(spec, rng));
        auto y = finsler::random_unit_directions(B, 1, rng).front();
        out.push_back({std::move(B), std::move(y)});
    }
    return out;
}

}  // namespace

TEST(Contractions, ParallelBetaLeavesOnlyAlphaData) {
    for (const auto& s : samples(test_support::shipped("matsumoto_example"), 5, 1)) {
        const auto cs = finsler::contraction_set(s.B, s.y, 0.0);
        const auto v = cs.values();
        // sigma, alpha, beta, bsq, ricbar lead the list; everything after is r/s data.
        for (std::size_t i = 5; i < v.size(); ++i) EXPECT_LE(std::abs(v[i]), 1e-12) << i;
        EXPECT_GT(cs.alpha, 0.0);
        EXPECT_NEAR(cs.bsq, 0.16, 1e-15);
    }
}

TEST(Contractions, HomotheticGradientForm) {
    for (const auto& s : samples(test_support::shipped("euclid_homothetic"), 5, 2)) {
        const auto cs = finsler::contraction_set(s.B, s.y, 0.0);
        EXPECT_NEAR(cs.r00, 0.1 * cs.alpha * cs.alpha, 1e-15);
        EXPECT_NEAR(cs.r0, 0.1 * cs.beta, 1e-15);
        EXPECT_NEAR(cs.r, 0.1 * cs.bsq, 1e-15);
        EXPECT_NEAR(cs.rkk, 0.3, 1e-15);
        EXPECT_EQ(cs.s0, 0.0);
        EXPECT_EQ(cs.sjk_skj, 0.0);
        EXPECT_EQ(cs.sk_sk, 0.0);
    }
}

TEST(Contractions, OptimizedAndNaiveRoutesAgree) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto spec = test_support::random_spec(2 + static_cast<int>(seed % 4), seed);
        for (const auto& s : samples(spec, 10, seed)) {
            const auto a = finsler::contraction_set(s.B, s.y, 0.3);
            const auto b = finsler::contraction_set_naive(s.B, s.y, 0.3);
            EXPECT_LE(finsler::contraction_mismatch(a, b), 1e-12);
        }
    }
}

TEST(Contractions, ParityUnderReflection) {
    const auto spec = test_support::random_spec(4, 3);
    for (const auto& s : samples(spec, 5, 3)) {
        std::vector<double> ym = s.y;
        for (double& v : ym) v = -v;
        const auto p = finsler::contraction_set(s.B, s.y, 0.0);
        const auto m = finsler::contraction_set(s.B, ym, 0.0);
        EXPECT_EQ(m.alpha, p.alpha);
        EXPECT_NEAR(m.beta, -p.beta, 1e-15);
        EXPECT_NEAR(m.r00, p.r00, 1e-15);
        EXPECT_NEAR(m.r0, -p.r0, 1e-15);
        EXPECT_NEAR(m.s0, -p.s0, 1e-15);
        EXPECT_NEAR(m.s0k_sk0, p.s0k_sk0, 1e-15);
        EXPECT_NEAR(m.s0_0, p.s0_0, 1e-15);
    }
}

TEST(Terms, LeadingCoefficientExample) {
    finsler::ContractionSet cs;
    cs.n = 3;
    cs.beta = 1.0;
    cs.r00 = 2.0;
    const auto t = finsler::appendix_terms(cs);
    EXPECT_DOUBLE_EQ(t[0], 7488.0);
}

TEST(Terms, LastCoefficientSlices) {
    finsler::ContractionSet cs;
    cs.n = 4;
    cs.alpha = 1.0;
    cs.beta = 0.2;
    cs.bsq = 0.13;
    cs.r00 = 0.7;
    cs.r0 = 0.1;
    EXPECT_EQ(finsler::appendix_terms(cs)[14], 0.0);

    finsler::ContractionSet sigma_only;
    sigma_only.n = 3;
    sigma_only.sigma = 1.0;
    EXPECT_DOUBLE_EQ(finsler::appendix_terms(sigma_only)[14], -1.0);
}

TEST(Terms, AffineInSigmaAndRicci) {
    const auto spec = test_support::random_spec(3, 5);
    for (const auto& s : samples(spec, 5, 5)) {
        const auto t0 = finsler::appendix_terms(finsler::contraction_set(s.B, s.y, 0.0));
        const auto t1 = finsler::appendix_terms(finsler::contraction_set(s.B, s.y, 1.0));
        const auto th = finsler::appendix_terms(finsler::contraction_set(s.B, s.y, 0.5));
        for (int m = 0; m < 15; ++m) {
            const double mid = 0.5 * (t0[static_cast<std::size_t>(m)] + t1[static_cast<std::size_t>(m)]);
            EXPECT_LE(test_support::rel_diff(mid, th[static_cast<std::size_t>(m)]), 1e-12) << m;
        }
        const double L0 = finsler::verify_identity(s.B, s.y, 0.0).lhs;
        const double L1 = finsler::verify_identity(s.B, s.y, 1.0).lhs;
        const double Lh = finsler::verify_identity(s.B, s.y, 0.5).lhs;
        EXPECT_LE(test_support::rel_diff(0.5 * (L0 + L1), Lh), 1e-12);
    }
}

TEST(Terms, HomogeneousOfComplementaryDegree) {
    const auto spec = test_support::random_spec(4, 7);
    for (const auto& s : samples(spec, 3, 7)) {
        std::vector<double> y2 = s.y;
        for (double& v : y2) v *= 1.3;
        const auto a = finsler::appendix_terms(finsler::contraction_set(s.B, s.y, 0.4));
        const auto b = finsler::appendix_terms(finsler::contraction_set(s.B, y2, 0.4));
        for (int m = 0; m < 15; ++m)
            EXPECT_LE(test_support::rel_diff(b[static_cast<std::size_t>(m)],
                                             std::pow(1.3, 14 - m) * a[static_cast<std::size_t>(m)]),
                      1e-12)
                << m;
    }
}

TEST(Terms, OddTermsFlipUnderReflection) {
    const auto spec = test_support::random_spec(3, 8);
    for (const auto& s : samples(spec, 5, 8)) EXPECT_LE(finsler::parity_check(s.B, s.y, 0.2).term_parity, 1e-10);
}

TEST(Identity, ClearingFactorMatchesRationalForm) {
    const double a = 1.3, be = 0.2, b2 = 0.1;
    const double s = be / a;
    const double rational =
        std::pow(a, 12) * std::pow(s - 1, 2) * std::pow(2 * s - 1, 4) * std::pow(3 * s - 2 * b2 - 1, 4);
    EXPECT_LE(test_support::rel_diff(finsler::clearing_factor(a, be, b2), rational), 1e-14);
}

TEST(Identity, RicciFlatParallelCaseVanishes) {
    for (const auto& s : samples(test_support::shipped("matsumoto_example"), 5, 9)) {
        const auto d = finsler::verify_identity(s.B, s.y, 0.0);
        EXPECT_LE(std::abs(d.lhs), 1e-10);
        EXPECT_LE(std::abs(d.rhs), 1e-10);
    }
}

TEST(Identity, HoldsForClosedBeta) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> sigma(-1.0, 1.0);
    for (const char* stem : {"euclid_homothetic", "sphere_closed"}) {
        for (const auto& s : samples(test_support::shipped(stem), 20, 10)) {
            const double sg = sigma(rng);
            const auto d = finsler::verify_identity(s.B, s.y, sg);
            EXPECT_LE(d.deviation, 1e-6) << stem;
            const auto p = finsler::parity_check(s.B, s.y, sg);
            EXPECT_LE(p.even_deviation, 1e-6) << stem;
            EXPECT_LE(p.odd_deviation, 1e-6) << stem;
        }
    }
}

// The transcribed coefficients reproduce the cleared residual exactly when
// s_ij = 0; with a skew part the mismatch is reported and localized.
TEST(Identity, MismatchIsConfinedToTheSkewPart) {
    const auto spec = test_support::shipped("euclid_rotation");
    int reported = 0;
    for (const auto& s : samples(spec, 10, 11)) {
        const auto d = finsler::verify_identity(s.B, s.y, 0.0);
        if (d.deviation > 1e-6) {
            ++reported;
            // A suspect is named only when dropping that single term helps.
            if (d.suspect_term >= 0) {
                EXPECT_LT(d.suspect_term, 15);
                EXPECT_LT(d.without_term[static_cast<std::size_t>(d.suspect_term)], d.deviation);
            }
        } else {
            EXPECT_EQ(d.suspect_term, -1);
        }
    }
    EXPECT_GT(reported, 0);
}
