#pragma once

#include <array>
#include <span>
#include <vector>

#include "finsler/riemann.hpp"

namespace finsler {

/// Every y-contracted scalar consumed by the coefficient polynomials t_0..t_14.
/// Index 0 means contraction with y, e.g. r0k_sk0 = r_{0k} s^k_0 and
/// sk0_k = s^k_{0|k}; a trailing _0 or _k after a name means a horizontal
/// covariant derivative contracted with y or b (r00_0 = r_{00|0},
/// bk_r00k = b^k r_{00|k}).
struct ContractionSet {
    int n = 0;
    double sigma = 0.0;
    double alpha = 0.0, beta = 0.0, bsq = 0.0;
    double ricbar = 0.0;
    double r00 = 0.0, r0 = 0.0, r = 0.0, s0 = 0.0;
    double rkk = 0.0;        // r^k_k
    double r0k_sk0 = 0.0;    // r_{0k} s^k_0
    double s0k_sk0 = 0.0;    // s_{0k} s^k_0
    double sjk_skj = 0.0;    // s^j_k s^k_j
    double sk_sk = 0.0;      // s^k s_k
    double bk_r00k = 0.0;    // b^k r_{00|k}
    double r00_0 = 0.0;      // r_{00|0}
    double r0_0 = 0.0;       // r_{0|0}
    double s0_0 = 0.0;       // s_{0|0}
    double sk0_k = 0.0;      // s^k_{0|k}
    double bk_s0k = 0.0;     // b^k s_{0|k}
    double rk_sk0 = 0.0;     // r_k s^k_0
    double r0k_sk = 0.0;     // r_{0k} s^k
    double sk0_sk = 0.0;     // s^k_0 s_k

    /// The fields above in declaration order (excluding n), for comparisons.
    std::vector<double> values() const;
};

/// Contractions from the bundle's precomputed vectors and matrices.
ContractionSet contraction_set(const AlphaBetaBundle& bundle, std::span<const double> y, double sigma);

/// The same scalars from the raw tensors only (a^ij, b_i|j, r_ij, s_ij and
/// their covariant derivatives), with explicit index loops and the
/// derivatives of r_i, s_i rebuilt by the Leibniz rule.
ContractionSet contraction_set_naive(const AlphaBetaBundle& bundle, std::span<const double> y, double sigma);

/// Largest relative difference between two contraction sets, each entry
/// scaled by max(1, |a|, |b|).
double contraction_mismatch(const ContractionSet& a, const ContractionSet& b);

using AppendixTerms = std::array<double, 15>;

/// t_0..t_14 evaluated from the contraction scalars.
AppendixTerms appendix_terms(const ContractionSet& cs);

/// The clearing factor alpha^2 (beta - alpha)^2 (2 beta - alpha)^4 (3 beta - (2b^2 + 1) alpha)^4.
double clearing_factor(double alpha, double beta, double bsq);

struct IdentityDiagnostics {
    double lhs = 0.0;   // (Ric - sigma F^2) * clearing factor
    double rhs = 0.0;   // sum t_m alpha^m
    double deviation = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|, 1)
    AppendixTerms terms{};
    /// deviation recomputed with t_m removed from the sum; only filled when
    /// `deviation` exceeds the tolerance passed to verify_identity.
    std::array<double, 15> without_term{};
    int suspect_term = -1;  // m whose removal reduces the deviation most
};

IdentityDiagnostics verify_identity(const AlphaBetaBundle& bundle, std::span<const double> y, double sigma,
                                    double tol = 1e-6);

struct ParityReport {
    /// max over m of |t_m(-y) - (-1)^m t_m(y)| / max(1, |t_m(y)|)
    double term_parity = 0.0;
    /// even line: (L(y) + L(-y))/2 against t_0 + t_2 alpha^2 + ... + t_14 alpha^14
    double even_lhs = 0.0, even_rhs = 0.0, even_deviation = 0.0;
    /// odd line: (L(y) - L(-y))/(2 alpha) against t_1 + t_3 alpha^2 + ... + t_13 alpha^12
    double odd_lhs = 0.0, odd_rhs = 0.0, odd_deviation = 0.0;
};

ParityReport parity_check(const AlphaBetaBundle& bundle, std::span<const double> y, double sigma);

}  // namespace finsler
