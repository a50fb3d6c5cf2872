#include "finsler/scurvature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "finsler/finsler.hpp"
#include "finsler/quadrature.hpp"

namespace finsler {

const char* to_string(VolumeForm form) {
    return form == VolumeForm::BusemannHausdorff ? "bh" : "ht";
}

namespace {

constexpr double kQuadTol = 1e-12;
constexpr double kSmallB = 1e-4;

// f(b) as a one-direction jet in b.
Jet volume_factor_jet(int n, double b, VolumeForm form) {
    const Jet bj = Jet::variable(b, 0, 1);
    const double sin_weight_total = integrate<double>(
        [n](double t) { return std::pow(std::sin(t), n - 2); }, 0.0, std::numbers::pi, kQuadTol);
    if (form == VolumeForm::BusemannHausdorff) {
        const Jet den = integrate<Jet>(
            [&](double t) {
                const Jet u = bj * std::cos(t);
                return pow(MatsumotoPhi::phi(u), -static_cast<double>(n)) * std::pow(std::sin(t), n - 2);
            },
            0.0, std::numbers::pi, kQuadTol);
        return sin_weight_total / den;
    }
    const Jet bsq = bj * bj;
    const Jet num = integrate<Jet>(
        [&](double t) {
            const Jet s = bj * std::cos(t);
            const Jet phi = MatsumotoPhi::phi(s);
            const Jet dphi = MatsumotoPhi::dphi(s);
            const Jet d2phi = MatsumotoPhi::d2phi(s);
            const Jet core = phi - s * dphi;
            const Jet T = phi * pow(core, static_cast<double>(n - 2)) * (core + (bsq - s * s) * d2phi);
            return T * std::pow(std::sin(t), n - 2);
        },
        0.0, std::numbers::pi, kQuadTol);
    return num / sin_weight_total;
}

std::mutex memo_mutex;
std::map<std::tuple<int, long long, int>, VolumeFactor> memo;

}  // namespace

VolumeFactor volume_factor(int n, double b, VolumeForm form) {
    if (n < 2) throw std::domain_error("volume_factor: n must be >= 2");
    if (!(b >= 0.0) || !(b < kMatsumotoBound)) throw std::domain_error("volume_factor: b outside [0, 1/2)");
    const auto key = std::make_tuple(n, std::llround(b * 1e12), static_cast<int>(form));
    {
        std::lock_guard lock(memo_mutex);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const Jet f = volume_factor_jet(n, b, form);
    VolumeFactor vf;
    vf.form = form;
    vf.n = n;
    vf.b = b;
    vf.f = f.value();
    vf.fprime = f.grad(0);
    vf.fsecond = f.hess(0, 0);
    if (b >= kSmallB) {
        vf.lambda = vf.fprime / (b * vf.f);
    } else {
        // f is even in b, so f'(b)/b -> f''(0).
        const Jet f0 = volume_factor_jet(n, 0.0, form);
        vf.lambda = f0.hess(0, 0) / f0.value();
    }
    std::lock_guard lock(memo_mutex);
    memo[key] = vf;
    return vf;
}

double s_curvature_closed(const AlphaBetaBundle& B, std::span<const double> y, VolumeForm form,
                          ClosedFormVariant variant) {
    if (!(B.bsq < kMatsumotoBound * kMatsumotoBound)) throw ValidityError("Matsumoto validity requires b < 1/2");
    const YContractions c = contract_y(B, y);
    const double n = B.n;
    const double b2 = B.bsq;
    const double s = c.beta / c.alpha;
    const double A = 2.0 * s - 1.0;
    const double D = 3.0 * s - 2.0 * b2 - 1.0;
    const double w = b2 - s * s;
    const double lambda = volume_factor(B.n, std::sqrt(b2), form).lambda;

    double S = 2.0 * c.s0 / (A * A);
    S += 6.0 * w / (A * D * D) * c.s0;
    S -= 2.0 * s / (A * D) * c.s0;
    S += 4.0 * w / (A * A * D) * c.s0;
    S += (n + 1.0) * (4.0 * s - 1.0) / (A * D) * c.s0;
    S += 3.0 * w / (c.alpha * D * D) * c.r00;
    S += (n + 1.0) * (4.0 * s - 1.0) / (2.0 * c.alpha * D) * c.r00;
    if (variant == ClosedFormVariant::AsPrinted) {
        S -= 2.0 / (D * D) * c.r0;
        S += lambda * (c.r0 + c.s0);
    } else {
        S -= 2.0 / D * c.r0;
        S -= lambda * (c.r0 + c.s0);
    }
    return S;
}

namespace {

// Determinant and b^T a^{-1} b as n-direction jets, by Gaussian elimination
// with partial pivoting on jets rebuilt from the first derivatives of a and b.
void det_and_bsq_jets(const AlphaBetaBundle& B, Jet& det, Jet& bsq) {
    const int n = B.n;
    std::vector<Jet> m(static_cast<std::size_t>(n * (n + 1)));
    auto at = [&](int i, int j) -> Jet& { return m[static_cast<std::size_t>(i * (n + 1) + j)]; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Jet e(B.a(i, j), n);
            for (int k = 0; k < n; ++k) e.set_grad(k, B.dA(i, j, k));
            at(i, j) = e;
        }
        Jet e(B.b(i), n);
        for (int k = 0; k < n; ++k) e.set_grad(k, B.db(i, k));
        at(i, n) = e;
    }
    std::vector<Jet> bvec;
    for (int i = 0; i < n; ++i) bvec.push_back(at(i, n));
    det = Jet(1.0, n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col).value()) > std::abs(at(piv, col).value())) piv = r;
        if (piv != col) {
            for (int j = 0; j <= n; ++j) std::swap(at(col, j), at(piv, j));
            det = -det;
        }
        det *= at(col, col);
        const Jet inv = reciprocal(at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const Jet factor = at(r, col) * inv;
            for (int j = col; j <= n; ++j) at(r, j) -= factor * at(col, j);
        }
    }
    std::vector<Jet> z(static_cast<std::size_t>(n), Jet(0.0, n));
    for (int i = n - 1; i >= 0; --i) {
        Jet acc = at(i, n);
        for (int j = i + 1; j < n; ++j) acc -= at(i, j) * z[static_cast<std::size_t>(j)];
        z[static_cast<std::size_t>(i)] = acc / at(i, i);
    }
    bsq = Jet(0.0, n);
    for (int i = 0; i < n; ++i) bsq += bvec[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
}

}  // namespace

double s_curvature_def(const AlphaBetaBundle& B, std::span<const double> y, VolumeForm form) {
    const int n = B.n;
    const SprayJets S = spray(B, y);
    double divergence = 0.0;
    for (int i = 0; i < n; ++i) divergence += S.G[static_cast<std::size_t>(i)].grad(n + i);

    Jet det, bsq;
    det_and_bsq_jets(B, det, bsq);
    if (!(bsq.value() < kMatsumotoBound * kMatsumotoBound)) throw ValidityError("Matsumoto validity requires b < 1/2");
    const Jet log_sqrt_det = 0.5 * log(det);
    const double b = std::sqrt(std::max(bsq.value(), 0.0));
    const VolumeFactor vf = volume_factor(n, b, form);

    double drift = 0.0;
    for (int i = 0; i < n; ++i) {
        double dlog_f;
        if (b >= kSmallB) {
            const double db = bsq.grad(i) / (2.0 * b);
            dlog_f = vf.fprime / vf.f * db;
        } else {
            dlog_f = 0.5 * vf.lambda * bsq.grad(i);
        }
        drift += y[static_cast<std::size_t>(i)] * (log_sqrt_det.grad(i) + dlog_f);
    }
    return divergence - drift;
}

KillingVerdict constant_killing_verdict(std::span<const AlphaBetaBundle> bundles, double tol) {
    if (bundles.empty()) throw std::invalid_argument("constant_killing_verdict: no samples");
    KillingVerdict v;
    for (const auto& B : bundles) {
        v.max_r = std::max(v.max_r, B.r.max_abs());
        v.max_s_i = std::max(v.max_s_i, B.s_vec.max_abs());
    }
    v.constant_killing = v.max_r <= tol && v.max_s_i <= tol;
    return v;
}

}  // namespace finsler
