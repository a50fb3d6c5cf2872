#include "finsler/finsler.hpp"

#include <cmath>
#include <string>

#include "finsler/metric_spec.hpp"

namespace finsler {

PhiData phi_data(double s, double bsq, PhiMode mode) {
    if (!(bsq >= 0.0) || !(bsq < kMatsumotoBound * kMatsumotoBound))
        throw ValidityError("Matsumoto validity requires b < 1/2 (b^2 = " + std::to_string(bsq) + ")");
    const double b = std::sqrt(bsq);
    if (std::abs(s) > b + 1e-12) throw ValidityError("|s| exceeds b");
    PhiData p;
    p.s = s;
    p.bsq = bsq;
    p.phi = MatsumotoPhi::phi(s);
    p.dphi = MatsumotoPhi::dphi(s);
    p.d2phi = MatsumotoPhi::d2phi(s);
    if (mode == PhiMode::Generic) {
        p.Delta = p.phi - s * p.dphi + (bsq - s * s) * p.d2phi;
        p.Q = p.dphi / (p.phi - s * p.dphi);
        p.Psi = p.d2phi / (2.0 * p.Delta);
        p.Theta = (p.phi * p.dphi - s * (p.phi * p.d2phi + p.dphi * p.dphi)) / (2.0 * p.phi * p.Delta);
    } else {
        const double one_minus = 1.0 - s;
        p.Delta = (1.0 - 3.0 * s + 2.0 * bsq) / (one_minus * one_minus * one_minus);
        p.Q = 1.0 / (1.0 - 2.0 * s);
        p.Psi = 1.0 / (1.0 + 2.0 * bsq - 3.0 * s);
        p.Theta = (1.0 - 4.0 * s) / (2.0 * (1.0 + 2.0 * bsq - 3.0 * s));
    }
    return p;
}

namespace {

struct LiftedFields {
    std::vector<Jet> y;
    Jet alpha2, alpha, beta, bsq, r00, s0;
    std::vector<Jet> s_up0;  // s^i_0
    std::vector<Jet> bup;
};

LiftedFields lift_fields(const AlphaBetaBundle& B, std::span<const double> y) {
    const int n = B.n;
    LiftedFields L;
    L.y = seed_y(y, n);
    std::vector<double> dx(static_cast<std::size_t>(n));
    auto grad3 = [&](const Tensor3& t, int i, int j) -> std::span<const double> {
        for (int k = 0; k < n; ++k) dx[static_cast<std::size_t>(k)] = t(i, j, k);
        return dx;
    };
    auto grad2 = [&](const Mat& t, int i) -> std::span<const double> {
        for (int k = 0; k < n; ++k) dx[static_cast<std::size_t>(k)] = t(i, k);
        return dx;
    };

    L.alpha2 = lift_constant(0.0, n);
    L.r00 = lift_constant(0.0, n);
    L.beta = lift_constant(0.0, n);
    L.s0 = lift_constant(0.0, n);
    L.s_up0.assign(static_cast<std::size_t>(n), lift_constant(0.0, n));
    L.bup.clear();
    for (int i = 0; i < n; ++i) {
        Jet arow = lift_constant(0.0, n), rrow = lift_constant(0.0, n);
        for (int j = 0; j < n; ++j) {
            const Jet& yj = L.y[static_cast<std::size_t>(j)];
            arow += lift(B.a(i, j), grad3(B.dA, i, j), n) * yj;
            rrow += lift(B.r(i, j), grad3(B.dr, i, j), n) * yj;
            L.s_up0[static_cast<std::size_t>(i)] += lift(B.s_mixed(i, j), grad3(B.d_s_mixed, i, j), n) * yj;
        }
        const Jet& yi = L.y[static_cast<std::size_t>(i)];
        L.alpha2 += arow * yi;
        L.r00 += rrow * yi;
        L.beta += lift(B.b(i), grad2(B.db, i), n) * yi;
        L.s0 += lift(B.s_vec(i), grad2(B.d_s_vec, i), n) * yi;
        L.bup.push_back(lift(B.bup(i), grad2(B.d_bup, i), n));
    }
    L.alpha = sqrt(L.alpha2);
    for (int k = 0; k < n; ++k) dx[static_cast<std::size_t>(k)] = B.d_bsq(k);
    L.bsq = lift(B.bsq, dx, n);
    return L;
}

std::vector<Jet> gbar_jets(const AlphaBetaBundle& B, std::span<const Jet> y) {
    const int n = B.n;
    std::vector<double> dx(static_cast<std::size_t>(n));
    std::vector<Jet> G(static_cast<std::size_t>(n), lift_constant(0.0, n));
    for (int i = 0; i < n; ++i) {
        Jet gi = lift_constant(0.0, n);
        for (int j = 0; j < n; ++j) {
            Jet row = lift_constant(0.0, n);
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) dx[static_cast<std::size_t>(l)] = B.dgamma(i, j, k, l);
                row += lift(B.gamma(i, j, k), dx, n) * y[static_cast<std::size_t>(k)];
            }
            gi += row * y[static_cast<std::size_t>(j)];
        }
        G[static_cast<std::size_t>(i)] = 0.5 * gi;
    }
    return G;
}

}  // namespace

SprayJets spray(const AlphaBetaBundle& B, std::span<const double> y, SprayMode mode, bool with_beta) {
    const int n = B.n;
    if (static_cast<int>(y.size()) != n) throw std::invalid_argument("spray: direction dimension mismatch");
    bool nonzero = false;
    for (double v : y) nonzero = nonzero || v != 0.0;
    if (!nonzero) throw std::invalid_argument("spray: y = 0");
    if (with_beta && !(B.bsq < kMatsumotoBound * kMatsumotoBound))
        throw ValidityError("Matsumoto validity requires b < 1/2 (b^2 = " + std::to_string(B.bsq) + ")");

    const LiftedFields L = lift_fields(B, y);
    SprayJets S;
    S.n = n;
    S.alpha = L.alpha;
    S.beta = L.beta;
    S.Gbar = gbar_jets(B, L.y);
    S.T.assign(static_cast<std::size_t>(n), lift_constant(0.0, n));

    if (with_beta) {
        S.F = L.alpha2 / (L.alpha - L.beta);
        const Jet s = L.beta / L.alpha;
        if (mode == SprayMode::Matsumoto) {
            const Jet inv1 = 1.0 / (2.0 * s - 1.0);
            const Jet inv2 = 1.0 / (3.0 * s - 2.0 * L.bsq - 1.0);
            const Jet P = 2.0 * L.alpha * inv1 * L.s0 + L.r00;
            const Jet c_b = -(inv2 * P);
            const Jet c_y = 0.5 * (4.0 * s - 1.0) * inv2 * P / L.alpha;
            const Jet c_s = -(L.alpha * inv1);
            for (int i = 0; i < n; ++i)
                S.T[static_cast<std::size_t>(i)] = c_s * L.s_up0[static_cast<std::size_t>(i)] +
                                                   c_b * L.bup[static_cast<std::size_t>(i)] +
                                                   c_y * L.y[static_cast<std::size_t>(i)];
        } else {
            const Jet phi = MatsumotoPhi::phi(s);
            const Jet dphi = MatsumotoPhi::dphi(s);
            const Jet d2phi = MatsumotoPhi::d2phi(s);
            const Jet delta = phi - s * dphi + (L.bsq - s * s) * d2phi;
            const Jet Q = dphi / (phi - s * dphi);
            const Jet Psi = d2phi / (2.0 * delta);
            const Jet Theta = (phi * dphi - s * (phi * d2phi + dphi * dphi)) / (2.0 * phi * delta);
            const Jet P = L.r00 - 2.0 * L.alpha * Q * L.s0;
            const Jet c_s = L.alpha * Q;
            const Jet c_b = Psi * P;
            const Jet c_y = Theta * P / L.alpha;
            for (int i = 0; i < n; ++i)
                S.T[static_cast<std::size_t>(i)] = c_s * L.s_up0[static_cast<std::size_t>(i)] +
                                                   c_b * L.bup[static_cast<std::size_t>(i)] +
                                                   c_y * L.y[static_cast<std::size_t>(i)];
        }
    } else {
        S.F = L.alpha;
    }
    S.G.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) S.G.push_back(S.Gbar[static_cast<std::size_t>(i)] + S.T[static_cast<std::size_t>(i)]);
    return S;
}

Curvature riemann_curvature(std::span<const Jet> G, std::span<const double> y) {
    const int n = static_cast<int>(G.size());
    Curvature out{Mat(n), 0.0};
    for (int i = 0; i < n; ++i) {
        const Jet& Gi = G[static_cast<std::size_t>(i)];
        for (int k = 0; k < n; ++k) {
            double v = 2.0 * Gi.grad(k);
            for (int j = 0; j < n; ++j) {
                const Jet& Gj = G[static_cast<std::size_t>(j)];
                v -= y[static_cast<std::size_t>(j)] * Gi.hess(j, n + k);
                v += 2.0 * Gj.value() * Gi.hess(n + j, n + k);
                v -= Gi.grad(n + j) * Gj.grad(n + k);
            }
            out.R(i, k) = v;
        }
    }
    for (int k = 0; k < n; ++k) out.ric += out.R(k, k);
    return out;
}

double ricci_via_T(const AlphaBetaBundle& B, std::span<const double> y, const SprayJets& S) {
    const int n = B.n;
    const auto cov = horizontal_derivative(S.T, B, y);
    double div_h = 0.0, trace_term = 0.0, second = 0.0, quad = 0.0;
    for (int k = 0; k < n; ++k) div_h += cov.horizontal(k, k);
    for (int j = 0; j < n; ++j) trace_term += y[static_cast<std::size_t>(j)] * cov.trace_horizontal(j);
    for (int j = 0; j < n; ++j) {
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) d2 += S.T[static_cast<std::size_t>(k)].hess(n + j, n + k);
        second += S.T[static_cast<std::size_t>(j)].value() * d2;
        for (int k = 0; k < n; ++k) quad += cov.vertical(k, j) * cov.vertical(j, k);
    }
    return B.ricbar(y) + 2.0 * div_h - trace_term + 2.0 * second - quad;
}

Mat fundamental_tensor(const SprayJets& S) {
    const int n = S.n;
    const Jet F2 = S.F * S.F;
    Mat g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = 0.5 * F2.hess(n + i, n + j);
    return g;
}

FinslerEval evaluate_finsler(const AlphaBetaBundle& B, std::span<const double> y, double sigma) {
    const SprayJets S = spray(B, y, SprayMode::Matsumoto, true);
    const Curvature C = riemann_curvature(S.G, y);
    FinslerEval ev;
    ev.F = S.F.value();
    ev.alpha = S.alpha.value();
    ev.beta = S.beta.value();
    for (int i = 0; i < B.n; ++i) {
        ev.G.push_back(S.G[static_cast<std::size_t>(i)].value());
        ev.T.push_back(S.T[static_cast<std::size_t>(i)].value());
    }
    ev.g = fundamental_tensor(S);
    ev.R = C.R;
    ev.ric = C.ric;
    ev.ric_via_T = ricci_via_T(B, y, S);
    ev.residual = ev.ric - sigma * ev.F * ev.F;
    return ev;
}

double einstein_residual(const AlphaBetaBundle& B, std::span<const double> y, double sigma) {
    const SprayJets S = spray(B, y);
    const double F = S.F.value();
    return riemann_curvature(S.G, y).ric - sigma * F * F;
}

namespace {

std::vector<double> normalized(const AlphaBetaBundle& B, std::span<const double> y) {
    const double a = B.alpha(y);
    if (!(a > 0.0)) throw std::invalid_argument("direction with alpha = 0");
    std::vector<double> out(y.begin(), y.end());
    for (double& v : out) v /= a;
    return out;
}

}  // namespace

ScalarFit extract_scalars(const AlphaBetaBundle& B, std::span<const std::vector<double>> ys) {
    if (ys.size() < 8) throw std::invalid_argument("extract_scalars: need at least 8 y-samples");
    std::vector<double> ricbar, r00, ric, F2;
    for (const auto& raw : ys) {
        const auto y = normalized(B, raw);
        ricbar.push_back(B.ricbar(y));
        r00.push_back(contract_y(B, y).r00);
        const SprayJets S = spray(B, y);
        const double F = S.F.value();
        F2.push_back(F * F);
        ric.push_back(riemann_curvature(S.G, y).ric);
    }
    ScalarFit fit;
    // alpha = 1 on every sample: lambda and c are plain means.
    double sl = 0.0, sc = 0.0, num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        sl += ricbar[i];
        sc += r00[i];
        num += ric[i] * F2[i];
        den += F2[i] * F2[i];
    }
    const double m = static_cast<double>(ys.size());
    fit.lambda = sl / m;
    fit.c = sc / m;
    fit.sigma = num / den;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        fit.lambda_residual = std::max(fit.lambda_residual, std::abs(ricbar[i] - fit.lambda));
        fit.c_residual = std::max(fit.c_residual, std::abs(r00[i] - fit.c));
        fit.sigma_residual = std::max(fit.sigma_residual, std::abs(ric[i] - fit.sigma * F2[i]));
        fit.ricbar_scale = std::max(fit.ricbar_scale, std::abs(ricbar[i]));
        fit.r00_scale = std::max(fit.r00_scale, std::abs(r00[i]));
        fit.ric_scale = std::max(fit.ric_scale, std::abs(ric[i]));
    }
    return fit;
}

FlagFit flag_curvature_fit(const AlphaBetaBundle& B, std::span<const double> y) {
    const int n = B.n;
    const SprayJets S = spray(B, y);
    const Curvature C = riemann_curvature(S.G, y);
    const Mat g = fundamental_tensor(S);
    const double F2 = S.F.value() * S.F.value();
    std::vector<double> ylow(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) ylow[static_cast<std::size_t>(k)] += g(k, j) * y[static_cast<std::size_t>(j)];
    Mat h(n);
    double rh = 0.0, hh = 0.0;
    FlagFit fit;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            h(i, k) = (i == k ? F2 : 0.0) - y[static_cast<std::size_t>(i)] * ylow[static_cast<std::size_t>(k)];
            rh += C.R(i, k) * h(i, k);
            hh += h(i, k) * h(i, k);
            fit.scale = std::max({fit.scale, std::abs(C.R(i, k)), std::abs(h(i, k))});
        }
    if (!(hh > 1e-300)) throw std::invalid_argument("flag_curvature_fit: degenerate direction");
    fit.K = rh / hh;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) fit.residual = std::max(fit.residual, std::abs(C.R(i, k) - fit.K * h(i, k)));
    return fit;
}

std::vector<std::vector<double>> random_unit_directions(const AlphaBetaBundle& B, int count, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) {
        std::vector<double> y(static_cast<std::size_t>(B.n));
        for (double& v : y) v = gauss(rng);
        out.push_back(normalized(B, y));
    }
    return out;
}

std::vector<std::vector<double>> y_sample_design(const AlphaBetaBundle& B, int random_count, std::mt19937_64& rng) {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < B.n; ++i)
        for (double sign : {1.0, -1.0}) {
            std::vector<double> y(static_cast<std::size_t>(B.n), 0.0);
            y[static_cast<std::size_t>(i)] = sign;
            out.push_back(normalized(B, y));
        }
    for (auto& y : random_unit_directions(B, random_count, rng)) out.push_back(std::move(y));
    return out;
}

}  // namespace finsler
