#include "finsler/appendix.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/finsler.hpp"

namespace finsler {

std::vector<double> ContractionSet::values() const {
    return {sigma,  alpha,   beta,    bsq,   ricbar, r00,   r0,    r,      s0,     rkk,    r0k_sk0, s0k_sk0,
            sjk_skj, sk_sk,  bk_r00k, r00_0, r0_0,   s0_0,  sk0_k, bk_s0k, rk_sk0, r0k_sk, sk0_sk};
}

namespace {

double dot(const Vec& v, std::span<const double> y) {
    double acc = 0.0;
    for (int i = 0; i < v.dim(); ++i) acc += v(i) * y[static_cast<std::size_t>(i)];
    return acc;
}

Vec mat_vec(const Mat& m, std::span<const double> y) {
    const int n = m.dim();
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += m(i, j) * y[static_cast<std::size_t>(j)];
        out(i) = acc;
    }
    return out;
}

double dot(const Vec& u, const Vec& v) {
    double acc = 0.0;
    for (int i = 0; i < u.dim(); ++i) acc += u(i) * v(i);
    return acc;
}

}  // namespace

ContractionSet contraction_set(const AlphaBetaBundle& B, std::span<const double> y, double sigma) {
    const int n = B.n;
    ContractionSet c;
    c.n = n;
    c.sigma = sigma;
    c.alpha = B.alpha(y);
    c.beta = B.beta(y);
    c.bsq = B.bsq;
    c.ricbar = B.ricbar(y);

    const Vec r_i0 = mat_vec(B.r, y);  // r_{i0}
    const Vec s_i0 = mat_vec(B.s, y);  // s_{i0}
    const Vec s_up0 = mat_vec(B.s_mixed, y);  // s^i_0

    c.r00 = dot(r_i0, y);
    c.r0 = dot(B.r_vec, y);
    c.r = B.r_scalar;
    c.s0 = dot(B.s_vec, y);
    for (int k = 0; k < n; ++k) c.rkk += B.r_mixed(k, k);
    c.r0k_sk0 = dot(r_i0, s_up0);
    c.s0k_sk0 = -dot(s_i0, s_up0);  // s_{0k} = -s_{k0}
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) c.sjk_skj += B.s_mixed(j, k) * B.s_mixed(k, j);
    c.sk_sk = dot(B.s_up, B.s_vec);

    const Vec r_i0_0 = mat_vec(B.D_r_vec, y);  // r_{i|0}
    const Vec s_i0_0 = mat_vec(B.D_s_vec, y);  // s_{i|0}
    c.r0_0 = dot(r_i0_0, y);
    c.s0_0 = dot(s_i0_0, y);
    c.sk0_k = dot(B.div_s, y);
    for (int i = 0; i < n; ++i) {
        double bk_s_ik = 0.0;
        for (int k = 0; k < n; ++k) bk_s_ik += B.D_s_vec(i, k) * B.bup(k);
        c.bk_s0k += bk_s_ik * y[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double yk = 0.0, bk = 0.0;
            for (int k = 0; k < n; ++k) {
                yk += B.Dr(i, j, k) * y[static_cast<std::size_t>(k)];
                bk += B.Dr(i, j, k) * B.bup(k);
            }
            const double yy = y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
            c.r00_0 += yk * yy;
            c.bk_r00k += bk * yy;
        }
    }
    c.rk_sk0 = dot(B.r_vec, s_up0);
    c.r0k_sk = dot(r_i0, B.s_up);
    c.sk0_sk = dot(s_up0, B.s_vec);
    return c;
}

ContractionSet contraction_set_naive(const AlphaBetaBundle& B, std::span<const double> yspan, double sigma) {
    const int n = B.n;
    auto y = [&](int i) { return yspan[static_cast<std::size_t>(i)]; };
    ContractionSet c;
    c.n = n;
    c.sigma = sigma;

    // alpha, beta, b^i, b^2 straight from a, a^-1 and b.
    double a00 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a00 += B.a(i, j) * y(i) * y(j);
    c.alpha = std::sqrt(a00);
    std::vector<double> bup(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        c.beta += B.b(i) * y(i);
        for (int j = 0; j < n; ++j) bup[static_cast<std::size_t>(i)] += B.a_inv(i, j) * B.b(j);
    }
    auto bu = [&](int i) { return bup[static_cast<std::size_t>(i)]; };
    for (int i = 0; i < n; ++i) c.bsq += bu(i) * B.b(i);

    // Ricbar = R^k_{jkl} y^j y^l from the full curvature tensor.
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) c.ricbar += B.riemann(k, j, k, l) * y(j) * y(l);

    // r_i = b^j r_ji, s_i = b^j s_ji, raised versions.
    std::vector<double> rv(static_cast<std::size_t>(n), 0.0), sv(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rv[static_cast<std::size_t>(i)] += bu(j) * B.r(j, i);
            sv[static_cast<std::size_t>(i)] += bu(j) * B.s(j, i);
        }
    std::vector<double> sup(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sup[static_cast<std::size_t>(i)] += B.a_inv(i, j) * sv[static_cast<std::size_t>(j)];

    for (int i = 0; i < n; ++i) {
        c.r0 += rv[static_cast<std::size_t>(i)] * y(i);
        c.s0 += sv[static_cast<std::size_t>(i)] * y(i);
        c.r += rv[static_cast<std::size_t>(i)] * bu(i);
        c.sk_sk += sup[static_cast<std::size_t>(i)] * sv[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            c.r00 += B.r(i, j) * y(i) * y(j);
            c.rkk += B.a_inv(i, j) * B.r(j, i);
        }
    }

    // Products through a^{km}.
    for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
            const double akm = B.a_inv(k, m);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double yy = y(i) * y(j);
                    c.r0k_sk0 += B.r(i, k) * akm * B.s(m, j) * yy;  // r_{ik} y^i a^{km} s_{mj} y^j
                    c.s0k_sk0 += B.s(i, k) * akm * B.s(m, j) * yy;
                }
                c.rk_sk0 += rv[static_cast<std::size_t>(k)] * akm * B.s(m, i) * y(i);
                c.r0k_sk += B.r(i, k) * y(i) * akm * sv[static_cast<std::size_t>(m)];
                c.sk0_sk += akm * B.s(m, i) * y(i) * sv[static_cast<std::size_t>(k)];
            }
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) c.sjk_skj += B.a_inv(j, l) * B.s(l, k) * akm * B.s(m, j);
        }
    }

    // Covariant derivatives from partial derivatives and Christoffel symbols:
    //   T_{ij|k} = d_k T_ij - Gamma^m_ik T_mj - Gamma^m_jk T_im.
    auto cov2 = [&](const Mat& T, const Tensor3& dT, int i, int j, int k) {
        double v = dT(i, j, k);
        for (int m = 0; m < n; ++m) v -= B.gamma(m, i, k) * T(m, j) + B.gamma(m, j, k) * T(i, m);
        return v;
    };
    // d_k b^j from d_k a^{jl} and d_k b_l.
    auto d_bup = [&](int j, int k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += B.d_a_inv(j, l, k) * B.b(l) + B.a_inv(j, l) * B.db(l, k);
        return v;
    };
    // V_{i|k} for V_i = b^j T_ji.
    auto cov_contracted = [&](const Mat& T, const Tensor3& dT, const std::vector<double>& V, int i, int k) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += d_bup(j, k) * T(j, i) + bu(j) * dT(j, i, k);
        for (int m = 0; m < n; ++m) v -= B.gamma(m, i, k) * V[static_cast<std::size_t>(m)];
        return v;
    };

    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double r_ik = cov_contracted(B.r, B.dr, rv, i, k);
            const double s_ik = cov_contracted(B.s, B.ds, sv, i, k);
            c.r0_0 += r_ik * y(i) * y(k);
            c.s0_0 += s_ik * y(i) * y(k);
            c.bk_s0k += s_ik * y(i) * bu(k);
            for (int j = 0; j < n; ++j) {
                const double rijk = cov2(B.r, B.dr, i, j, k);
                c.r00_0 += rijk * y(i) * y(j) * y(k);
                c.bk_r00k += rijk * y(i) * y(j) * bu(k);
            }
            for (int m = 0; m < n; ++m) c.sk0_k += B.a_inv(k, m) * cov2(B.s, B.ds, m, i, k) * y(i);
        }
    }
    return c;
}

double contraction_mismatch(const ContractionSet& a, const ContractionSet& b) {
    const auto va = a.values(), vb = b.values();
    double worst = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double scale = std::max({1.0, std::abs(va[i]), std::abs(vb[i])});
        worst = std::max(worst, std::abs(va[i] - vb[i]) / scale);
    }
    return worst;
}

AppendixTerms appendix_terms(const ContractionSet& cs) {
    const double n = cs.n;
    const double b2 = cs.bsq, b4 = b2 * b2, b6 = b4 * b2, b8 = b4 * b4;
    std::array<double, 11> B{};
    B[0] = 1.0;
    for (std::size_t k = 1; k < B.size(); ++k) B[k] = B[k - 1] * cs.beta;
    const double e = 1.0 + 2.0 * b2;  // recurring (1 + 2b^2)
    const double e2 = e * e, e3 = e2 * e, e4 = e3 * e;

    const double Ric = cs.ricbar, sigma = cs.sigma;
    const double r00 = cs.r00, r0 = cs.r0, r = cs.r, s0 = cs.s0, rkk = cs.rkk;
    const double r00sq = r00 * r00;
    const double r0k_sk0 = cs.r0k_sk0, s0k_sk0 = cs.s0k_sk0, ss = cs.sjk_skj, sksk = cs.sk_sk;
    const double bk_r00k = cs.bk_r00k, r00_0 = cs.r00_0, r0_0 = cs.r0_0, s0_0 = cs.s0_0;
    const double sk0_k = cs.sk0_k, bk_s0k = cs.bk_s0k;
    const double rk_sk0 = cs.rk_sk0, r0k_sk = cs.r0k_sk, sk0_sk = cs.sk0_sk;

    AppendixTerms t{};

    t[0] = 144 * (8 * n - 11) * B[10] * r00sq;

    t[1] = -96 * (61 * n - 82 + (20 * n - 26) * b2) * B[9] * r00sq
           - 432 * (2 * n - 3) * B[10] * r00_0;

    t[2] = 12 * (1085 * n - 1439 + (792 * n - 1032) * b2 + 64 * (n - 1) * b4) * B[8] * r00sq
           + 1296 * B[10] * Ric
           - 288 * (8 * n - 14) * B[9] * r0 * r00
           + 864 * B[9] * s0 * r00
           + 72 * (63 * n - 91 + (24 * n - 32) * b2) * B[9] * r00_0;

    t[3] = -864 * (2 * n - 1) * B[9] * r0k_sk0
           - 24 * (697 * n - 926 + (852 * n - 1144) * b2 + (152 * n - 144) * b4) * B[7] * r00sq
           - 3456 * (2 + b2) * B[9] * Ric
           + 96 * (118 * n - 205 + (32 * n - 44) * b2) * B[8] * r00 * r0
           - 864 * B[9] * r00 * rkk
           - 48 * (-16 * n + 97 + 16 * (n - 1) * b2) * B[8] * r00 * s0
           - 864 * B[9] * bk_r00k
           - 24 * (435 * n - 602 + (354 * n - 440) * b2 + (48 * n - 56) * b4) * B[8] * r00_0
           + 864 * B[9] * r0_0
           - 432 * (2 * n - 5) * B[9] * s0_0;

    t[4] = 144 * (57 * n - 22 + (24 * n - 8) * b2) * B[8] * r0k_sk0
           + 3 * (4606 * n - 6255 + (8400 * n - 12080) * b2 + (2480 * n - 2272) * b4) * B[6] * r00sq
           + 216 * (15 + 4 * b2) * (5 + 4 * b2) * B[8] * Ric
           - 32 * (752 * n - 1301 + (440 * n - 566) * b2 + 32 * (n - 1) * b4) * B[7] * r00 * r0
           + 864 * (5 + 2 * b2) * B[8] * (r00 * rkk + bk_r00k)
           - 576 * B[8] * r * r00
           + 8 * (-413 * n + 1322 + (376 * n - 664) * b2 + 64 * (n - 1) * b4) * B[7] * r00 * s0
           + 4 * (3473 * n - 4583 + (4512 * n - 5136) * b2 + (1320 * n - 1368) * b4 + 64 * (n - 1) * b6) * B[7] * r00_0
           - 864 * (5 + 2 * b2) * B[8] * r0_0
           + 576 * B[8] * r0 * r0
           - 1152 * (2 * n - 3) * B[8] * r0 * s0
           + 72 * (57 * n - 142 + (24 * n - 56) * b2) * B[8] * s0_0
           - 144 * (8 * n - 21) * B[8] * s0 * s0
           - 1296 * B[9] * sk0_k;  // printed "s_0^k"; degree 10 requires s^k_{0|k}

    t[5] = -24 * (699 * n - 178 + (636 * n - 112) * b2 + (96 * n - 16) * b4) * B[7] * r0k_sk0
           - 12 * (643 * n - 911 + (1642 * n - 2645) * b2 + (712 * n - 656) * b4) * B[5] * r00sq
           - 24 * (917 + 1560 * b2 + 672 * b4 + 64 * b6) * B[7] * Ric
           + 16 * (1814 * n - 3143 + (1712 * n - 2024) * b2 + (272 * n - 224) * b4) * B[6] * r00 * r0
           - 144 * (65 + 56 * b2 + 8 * b4) * B[7] * (bk_r00k + r00 * rkk)
           + 384 * (7 + 2 * b2) * B[7] * r * r00
           - 4 * (-1487 * n + 3338 + (1240 * n - 3952) * b2 + (544 * n - 736) * b4) * B[6] * r00 * s0
           - (11854 * n - 14857 + (21768 * n - 22176) * b2 + (10272 * n - 9024) * b4 + (1088 * n - 896) * b6) * B[6] * r00_0
           + 144 * (65 + 56 * b2 + 8 * b4) * B[7] * r0_0
           - 384 * (7 + 2 * b2) * B[7] * r0 * r0
           + 48 * (212 * n - 321 + (64 * n - 72) * b2) * B[7] * r0 * s0
           - 12 * (699 * n - 1738 + (636 * n - 1456) * b2 + (96 * n - 208) * b4) * B[7] * s0_0
           - 324 * B[7] * s0k_sk0
           // printed "r_{0k} s_0^k" in the group; degree 9 requires r_{0k} s^k
           + 864 * B[8] * (rk_sk0 + r0k_sk - bk_s0k - rkk * s0)
           + 216 * (29 + 16 * b2) * B[8] * sk0_k  // printed "s_0^k"; read as s^k_{0|k}
           - 432 * (2 * n - 3) * B[8] * sk0_sk
           + 48 * (114 * n - 239 + (24 * n - 52) * b2) * B[7] * s0 * s0;

    t[6] = 4 * (4849 * n - 516 + (7116 * n + 96) * b2 + (2352 * n + 96) * b4 + 128 * n * b6) * B[6] * r0k_sk0
           + 0.75 * (3965 * n - 5929 + (13592 * n - 25576) * b2 + (8096 * n - 7936) * b4) * B[4] * r00sq
           + (19225 + 46208 * b2 + 32064 * b4 + 6656 * b6 + 256 * b8) * B[6] * Ric
           - 12 * (1828 * n - 3201 + (2464 * n - 2616) * b2 + (640 * n - 384) * b4) * B[5] * r00 * r0
           + 32 * (361 + 501 * b2 + 156 * b4 + 8 * b6) * B[6] * (rkk * r00 + bk_r00k)
           - 32 * (167 + 104 * b2 + 8 * b4) * B[6] * r00 * r
           + 6 * (-973 * n + 1745 + (776 * n - 4336) * b2 + (656 * n - 1216) * b4) * B[5] * r00 * s0
           + 1.5 * (4525 * n - 5373 + (10968 * n - 9696) * b2 + (7392 * n - 5088) * b4 + (1280 * n - 768) * b6) * B[5] * r00_0
           - 32 * (361 + 501 * b2 + 156 * b4 + 8 * b6) * B[6] * r0_0
           + 32 * (167 + 104 * b2 + 8 * b4) * B[6] * r0 * r0
           - 8 * (2372 * n - 3657 + (1568 * n - 1656) * b2 + (128 * n - 96) * b4) * B[6] * s0 * r0
           + 432 * (9 + 4 * b2) * B[7] * s0 * rkk
           + 2 * (4849 * n - 12068 + (7116 * n - 15936) * b2 + (2352 * n - 4896) * b4 + (128 * n - 256) * b6) * B[6] * s0_0
           + 432 * (9 + 4 * b2) * B[7] * (bk_s0k - r0k_sk - rk_sk0)
           - 108 * (121 + 144 * b2 + 32 * b4) * B[7] * sk0_k
           - 576 * B[7] * s0 * r
           + 54 * (23 + 16 * b2) * B[6] * s0k_sk0
           + 72 * (51 * n - 73 + (24 * n - 32) * b2) * B[7] * sk0_sk
           - 4 * (2737 * n - 4424 + (1240 * n - 1208) * b2 + (64 * n - 128) * b4) * B[6] * s0 * s0
           - 324 * B[8] * ss
           - 1296 * B[8] * sigma;

    t[7] = -2 * (401 + 3504 * b2 + 2400 * b4 + 256 * b6 + 7005 * n + 14652 * n * b2 + 7920 * n * b4 + 960 * n * b6) * B[5] * r0k_sk0
           - 3 * (-411 - 2650 * b2 - 1016 * b4 + 263 * n + 1170 * n * b2 + 916 * n * b4) * B[3] * r00sq
           - 2 * (5651 + 17932 * b2 + 17760 * b4 + 6016 * b6 + 512 * b8) * B[5] * Ric
           + 6 * (-3225 - 2988 * b2 - 384 * b4 + 1798 * n + 3232 * n * b2 + 1216 * n * b4) * B[4] * r00 * r0
           - 2 * (4483 + 8880 * b2 + 4512 * b4 + 512 * b6) * B[5] * (r00 * rkk + bk_r00k)
           + 32 * (37 + 8 * b2) * (5 + 4 * b2) * B[5] * r00 * r
           - 3 * (1817 - 8560 * b2 - 3328 * b4 - 1135 * n + 968 * n * b2 + 1328 * n * b4) * B[4] * r00 * s0
           - 1.5 * (-1983 - 3960 * b2 - 2232 * b4 - 384 * b6 + 1763 * n + 5394 * n * b2 + 4848 * n * b4 + 1216 * n * b6) * B[4] * r00_0
           + 2 * (4483 + 8880 * b2 + 4512 * b4 + 512 * b6) * B[5] * r0_0
           - 32 * (37 + 8 * b2) * (5 + 4 * b2) * B[5] * r0 * r0
           - 4 * (-7769 - 5144 * b2 - 560 * b4 + 4884 * n + 5280 * n * b2 + 960 * n * b4) * B[5] * s0 * r0
           - (-17531 - 32016 * b2 - 15648 * b4 - 1792 * b6 + 7005 * n + 14652 * n * b2 + 7920 * n * b4 + 960 * n * b6) * B[5] * s0_0
           + 72 * (103 + 100 * b2 + 16 * b4) * B[6] * (r0k_sk + rk_sk0 - s0 * rkk - bk_s0k)
           + 6 * (2579 + 4944 * b2 + 2400 * b4 + 256 * b6) * B[6] * sk0_k
           - 216 * (9 + 14 * b2 + 4 * b4) * B[5] * s0k_sk0
           - 12 * (-739 - 688 * b2 - 112 * b4 + 546 * n + 564 * n * b2 + 96 * n * b4) * B[6] * sk0_sk
           + 4 * (-3622 + 656 * b2 + 320 * b4 + 3003 * n + 2184 * n * b2 + 240 * n * b4) * B[5] * s0 * s0
           // the s_0 r_0 monomial appears twice in the printed coefficient
           + 8 * (-7769 - 5144 * b2 - 560 * b4 + 4884 * n + 5280 * n * b2 + 960 * n * b4) * B[5] * s0 * r0
           + 96 * (25 + 8 * b2) * B[6] * s0 * r
           + 108 * (13 + 8 * b2) * B[7] * ss
           + 864 * (5 + 4 * b2) * B[7] * sigma
           + 432 * B[7] * sksk;

    t[8] = 2 * (769 + 4596 * b2 + 4512 * b4 + 896 * b6 + 3285 * n + 9126 * n * b2 + 7128 * n * b4 + 1440 * n * b6) * B[4] * r0k_sk0
           + 1.5 * (-145 - 1436 * b2 - 684 * b4 + 93 * n + 520 * n * b2 + 518 * n * b4) * B[2] * r00sq
           + (4535 + 18184 * b2 + 24024 * b4 + 11776 * b6 + 1664 * b8) * B[4] * Ric
           - 12 * (-539 - 509 * b2 + 16 * b4 + 288 * n + 660 * n * b2 + 336 * n * b4) * B[3] * r00 * r0
           + 2 * (2273 + 6006 * b2 + 4416 * b4 + 832 * b6) * B[4] * (r00 * rkk + bk_r00k)
           - 4 * (1001 + 1472 * b2 + 416 * b4) * B[4] * r00 * r
           + 12 * (165 - 1293 * b2 - 672 * b4 - 100 * n + 110 * n * b2 + 206 * n * b4) * B[3] * r00 * s0
           + 3 * (-247 - 492 * b2 - 186 * b4 + 16 * b6 + 231 * n + 864 * n * b2 + 990 * n * b4 + 336 * n * b6) * B[3] * r00_0
           - 2 * (2273 + 6006 * b2 + 4416 * b4 + 832 * b6) * B[4] * r0_0
           + 4 * (1001 + 1472 * b2 + 416 * b4) * B[4] * r0 * r0
           - 2 * (-10175 - 8360 * b2 - 1040 * b4 + 6084 * n + 9504 * n * b2 + 2880 * n * b4) * B[4] * r0 * s0
           + 4 * (1961 + 3108 * b2 + 1104 * b4 + 64 * b6) * B[5] * (rkk * s0 + bk_s0k - r0k_sk - rk_sk0)
           + (-8323 - 19428 * b2 - 13152 * b4 - 2432 * b6 + 3285 * n + 9126 * n * b2 + 7128 * n * b4 + 1440 * n * b6) * B[4] * s0_0
           - 16 * (718 + 1961 * b2 + 1554 * b4 + 368 * b6 + 16 * b8) * B[5] * sk0_k
           + 6 * (269 + 696 * b2 + 456 * b4 + 64 * b6) * B[4] * s0k_sk0
           + 2 * (-4075 - 5856 * b2 - 2064 * b4 - 128 * b6 + 3211 * n + 5424 * n * b2 + 2064 * n * b4 + 128 * n * b6) * B[5] * sk0_sk
           - (-7009 + 13792 * b2 + 7744 * b4 + 512 * b6 + 7881 * n + 8088 * n * b2 + 1392 * n * b4) * B[4] * s0 * s0
           - 27 * (95 + 128 * b2 + 32 * b4) * B[6] * ss
           - 216 * (29 + 48 * b2 + 16 * b4) * B[6] * sigma
           - 864 * (2 + b2) * B[6] * sksk
           - 16 * (259 + 184 * b2 + 16 * b4) * B[5] * r * s0;

    t[9] = -4 * (211 + 1428 * b2 + 1938 * b4 + 608 * b6 + 501 * n + 1764 * n * b2 + 1854 * n * b4 + 552 * n * b6) * B[3] * r0k_sk0
           - 3 * (-7 - 114 * b2 - 68 * b4 + 5 * n + 34 * n * b2 + 42 * n * b4) * B[1] * r00sq
           - 4 * e * (307 + 894 * b2 + 756 * b4 + 176 * b6) * B[3] * Ric
           + 12 * (-116 - 99 * b2 + 56 * b4 + 58 * n + 164 * n * b2 + 108 * n * b4) * B[2] * r00 * r0
           - 4 * (377 + 1272 * b2 + 1266 * b4 + 352 * b6) * B[3] * (r00 * rkk + bk_r00k - r0_0)
           + 16 * (106 + 211 * b2 + 88 * b4) * B[3] * r * r00
           - 6 * (85 - 934 * b2 - 636 * b4 - 41 * n + 72 * n * b2 + 158 * n * b4) * B[2] * r00 * s0
           - 3 * (-40 - 68 * b2 + 34 * b4 + 56 * b6 + 39 * n + 174 * n * b2 + 246 * n * b4 + 108 * n * b6) * B[2] * r00_0
           - 16 * (106 + 211 * b2 + 88 * b4) * B[3] * r0 * r0
           + 16 * (-530 - 479 * b2 - 17 * b4 + 294 * n + 618 * n * b2 + 276 * n * b4) * B[3] * s0 * r0
           + 8 * (481 + 568 * b2 + 112 * b4) * B[4] * r * s0
           - 2 * (-1297 - 3660 * b2 - 3126 * b4 - 800 * b6 + 501 * n + 1764 * n * b2 + 1854 * n * b4 + 552 * n * b6) * B[3] * s0_0
           + 4 * (1261 + 2886 * b2 + 1704 * b4 + 224 * b6) * B[4] * (r0k_sk + rk_sk0 - rkk * s0 - bk_s0k)
           + 2 * (2779 + 10088 * b2 + 11544 * b4 + 4544 * b6 + 448 * b8) * B[4] * sk0_k
           - 4 * e * (193 + 342 * b2 + 132 * b4 + 8 * b6) * B[3] * s0k_sk0
           - 2 * (-2245 - 4200 * b2 - 2280 * b4 - 320 * b6 + 1897 * n + 4614 * n * b2 + 2928 * n * b4 + 416 * n * b6) * B[4] * sk0_sk
           + 4 * (-549 + 3536 * b2 + 2828 * b4 + 368 * b6 + 789 * n + 1050 * n * b2 + 240 * n * b4) * B[3] * s0 * s0
           + 6 * (431 + 948 * b2 + 528 * b4 + 64 * b6) * B[5] * ss
           + 24 * (5 + 4 * b2) * (43 + 76 * b2 + 16 * b4) * B[5] * sigma
           + 36 * (79 + 88 * b2 + 16 * b4) * B[5] * sksk;

    t[10] = 4 * (59 + 480 * b2 + 870 * b4 + 400 * b6 + 96 * n + 414 * n * b2 + 558 * n * b4 + 228 * n * b6) * B[2] * r0k_sk0
            + 0.75 * (n - 1 + (8 * n - 32) * b2 + (12 * n - 24) * b4) * r00sq
            + (215 + 404 * b2 + 164 * b4) * e2 * B[2] * Ric
            - 4 * (-44 - 29 * b2 + 64 * b4 + 20 * n + 68 * n * b2 + 56 * n * b4) * B[1] * r00 * r0
            - 8 * (55 + 142 * b2 + 82 * b4) * B[2] * r00 * r
            + 2 * (43 - 554 * b2 - 488 * b4 - 13 * n + 44 * n * b2 + 104 * n * b4) * B[1] * r00 * s0
            + 4 * e * (79 + 172 * b2 + 82 * b4) * B[2] * (bk_r00k + r00 * rkk)
            + 0.5 * e * (-23 + 22 * b2 + 64 * b4 + 23 * n + 74 * n * b2 + 56 * n * b4) * B[1] * r00_0
            - 4 * e * (79 + 172 * b2 + 82 * b4) * B[2] * r0_0
            + 8 * (55 + 142 * b2 + 82 * b4) * B[2] * r0 * r0
            - 4 * (-553 - 496 * b2 + 158 * b4 + 276 * n + 744 * n * b2 + 456 * n * b4) * B[2] * s0 * r0
            + 8 * (253 + 780 * b2 + 678 * b4 + 152 * b6) * B[3] * (s0 * rkk + bk_s0k - r0k_sk - rk_sk0)
            + 2 * (-257 - 840 * b2 - 834 * b4 - 256 * b6 + 96 * n + 414 * n * b2 + 558 * n * b4 + 228 * n * b6) * B[2] * s0_0
            - 4 * e * (439 + 1146 * b2 + 828 * b4 + 152 * b6) * B[3] * sk0_k
            - 32 * (65 + 113 * b2 + 38 * b4) * B[3] * s0 * r
            + 2 * (107 + 116 * b2 + 20 * b4) * e2 * B[2] * s0k_sk0
            - 4 * (625 + 1158 * b2 + 480 * b4 + 32 * b6) * B[4] * sksk
            + 4 * (-383 - 804 * b2 - 510 * b4 - 112 * b6 + 347 * n + 1128 * n * b2 + 1050 * n * b4 + 256 * n * b6) * B[3] * sk0_sk
            - 2 * (-255 + 3368 * b2 + 3668 * b4 + 752 * b6 + 375 * n + 600 * n * b2 + 150 * n * b4) * B[2] * s0 * s0
            - (1579 + 5000 * b2 + 4632 * b4 + 1280 * b6 + 64 * b8) * B[4] * ss
            - (2641 + 9344 * b2 + 10176 * b4 + 3584 * b6 + 256 * b8) * B[4] * sigma;

    t[11] = -2 * e * (17 + 134 * b2 + 128 * b4 + 21 * n + 66 * n * b2 + 48 * n * b4) * B[1] * r0k_sk0
            + 2 * e * (-5 + 8 * b2 + 2 * n + 4 * n * b2) * r00 * r0
            - 2 * (19 + 20 * b2) * e2 * B[1] * (r00 * rkk + bk_r00k)
            + 16 * (4 + 5 * b2) * e * B[1] * r * r00
            - (7 - 92 * b2 - 104 * b4 - n + 8 * n * b2 + 20 * n * b4) * r00 * s0
            - 2 * (11 + 10 * b2) * e3 * B[1] * Ric
            - 0.5 * e2 * (-1 + 4 * b2 + n + 2 * n * b2) * r00_0
            + 2 * (19 + 20 * b2) * e2 * B[1] * r0_0
            - 16 * (4 + 5 * b2) * e * B[1] * r0 * r0
            + 4 * (-83 - 68 * b2 + 88 * b4 + 36 * n + 120 * n * b2 + 96 * n * b4) * B[1] * r0 * s0
            + 16 * (41 + 98 * b2 + 50 * b4) * B[2] * r * s0
            - e * (-59 - 98 * b2 - 32 * b4 + 21 * n + 66 * n * b2 + 48 * n * b4) * B[1] * s0_0
            + 16 * e * (31 + 61 * b2 + 25 * b4) * B[2] * (r0k_sk + rk_sk0 - rkk * s0 - bk_s0k)
            + 2 * (175 + 292 * b2 + 100 * b4) * e2 * B[2] * sk0_k
            - 16 * (2 + b2) * e3 * B[1] * s0k_sk0
            - 4 * (-80 - 156 * b2 - 42 * b4 + 8 * b6 + 77 * n + 318 * n * b2 + 402 * n * b4 + 148 * n * b6) * B[2] * sk0_sk
            + 4 * (-23 + 392 * b2 + 560 * b4 + 160 * b6 + 24 * n + 42 * n * b2 + 6 * n * b4) * B[1] * s0 * s0
            + 24 * e * (25 + 56 * b2 + 32 * b4 + 4 * b6) * B[3] * ss
            + 4 * (5 + 4 * b2) * e * (43 + 76 * b2 + 16 * b4) * B[3] * sigma
            + 24 * (53 + 144 * b2 + 102 * b4 + 16 * b6) * B[3] * sksk;

    t[12] = 2 * e2 * (1 + 8 * b2 + n + 2 * n * b2) * r0k_sk0
            + e4 * Ric
            + 2 * e3 * (r00 * rkk + bk_r00k)
            - 4 * e2 * r * r00
            - 2 * e3 * r0_0
            + 4 * e2 * r0 * r0
            - 2 * e * (4 * n - 11 + (8 * n + 14) * b2) * r0 * s0
            + 4 * e2 * (17 + 16 * b2) * B[1] * (s0 * rkk + bk_s0k - r0k_sk - rk_sk0)
            - 8 * (5 + 4 * b2) * e3 * B[1] * sk0_k
            - 16 * e * (7 + 8 * b2) * B[1] * s0 * r
            + e2 * (-3 + n + 2 * n * b2) * s0_0
            + 2 * e4 * s0k_sk0
            + 2 * e * (19 * n - 19 + (58 * n + 14) * b2 + (40 * n + 32) * b4) * B[1] * sk0_sk
            + (-5 * n + 9 - (8 * n + 14) * b2 + (4 * n - 264) * b4 - 96 * b6) * s0 * s0
            - 8 * e * (47 + 80 * b2 + 26 * b4) * B[2] * sksk
            - (139 + 196 * b2 + 52 * b4) * e2 * B[2] * ss
            - 6 * (29 + 48 * b2 + 16 * b4) * e2 * B[2] * sigma;

    t[13] = 8 * e2 * r * s0
            + 4 * e3 * (r0k_sk + rk_sk0 - s0 * rkk - bk_s0k)
            + 2 * e4 * sk0_k
            - 2 * e2 * (-1 + 4 * b2 + n + 2 * n * b2) * sk0_sk
            + 6 * e3 * (3 + 2 * b2) * B[1] * ss
            + 4 * (5 + 4 * b2) * e3 * B[1] * sigma
            + 12 * e2 * (5 + 4 * b2) * B[1] * sksk;

    t[14] = -e4 * ss - e4 * sigma - 4 * e3 * sksk;

    return t;
}

double clearing_factor(double alpha, double beta, double bsq) {
    const double u = beta - alpha;
    const double v = 2.0 * beta - alpha;
    const double w = 3.0 * beta - (2.0 * bsq + 1.0) * alpha;
    const double v2 = v * v, w2 = w * w;
    return alpha * alpha * u * u * v2 * v2 * w2 * w2;
}

namespace {

double cleared_residual(const AlphaBetaBundle& B, std::span<const double> y, double sigma) {
    const FinslerEval e = evaluate_finsler(B, y, sigma);
    return e.residual * clearing_factor(e.alpha, e.beta, B.bsq);
}

double series(const AppendixTerms& t, double alpha, int skip = -1) {
    double acc = 0.0, p = 1.0;
    for (int m = 0; m < 15; ++m) {
        if (m != skip) acc += t[static_cast<std::size_t>(m)] * p;
        p *= alpha;
    }
    return acc;
}

double relative(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

}  // namespace

IdentityDiagnostics verify_identity(const AlphaBetaBundle& B, std::span<const double> y, double sigma, double tol) {
    IdentityDiagnostics d;
    const ContractionSet cs = contraction_set(B, y, sigma);
    d.terms = appendix_terms(cs);
    d.lhs = cleared_residual(B, y, sigma);
    d.rhs = series(d.terms, cs.alpha);
    d.deviation = relative(d.lhs, d.rhs);
    if (d.deviation > tol) {
        double best = d.deviation;
        for (int m = 0; m < 15; ++m) {
            const double dev = relative(d.lhs, series(d.terms, cs.alpha, m));
            d.without_term[static_cast<std::size_t>(m)] = dev;
            if (dev < best) {
                best = dev;
                d.suspect_term = m;
            }
        }
    }
    return d;
}

ParityReport parity_check(const AlphaBetaBundle& B, std::span<const double> y, double sigma) {
    std::vector<double> ym(y.begin(), y.end());
    for (double& v : ym) v = -v;
    const ContractionSet cp = contraction_set(B, y, sigma);
    const ContractionSet cm = contraction_set(B, ym, sigma);
    const AppendixTerms tp = appendix_terms(cp);
    const AppendixTerms tm = appendix_terms(cm);

    ParityReport rep;
    for (int m = 0; m < 15; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double a = tp[static_cast<std::size_t>(m)], b = tm[static_cast<std::size_t>(m)];
        rep.term_parity = std::max(rep.term_parity, std::abs(b - sign * a) / std::max(1.0, std::abs(a)));
    }

    const double alpha = cp.alpha;
    const double lp = cleared_residual(B, y, sigma);
    const double lm = cleared_residual(B, ym, sigma);
    rep.even_lhs = 0.5 * (lp + lm);
    rep.odd_lhs = 0.5 * (lp - lm) / alpha;
    double p = 1.0;
    for (int m = 0; m < 15; m += 2) {
        rep.even_rhs += tp[static_cast<std::size_t>(m)] * p;
        if (m + 1 < 15) rep.odd_rhs += tp[static_cast<std::size_t>(m + 1)] * p;
        p *= alpha * alpha;
    }
    rep.even_deviation = relative(rep.even_lhs, rep.even_rhs);
    rep.odd_deviation = relative(rep.odd_lhs, rep.odd_rhs);
    return rep;
}

}  // namespace finsler
