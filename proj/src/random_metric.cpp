#include "finsler/random_metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace finsler {

namespace {

// c0 + sum_k c_k x_k + sum_{k<=l} c_kl x_k x_l
struct Quadratic {
    double c0 = 0.0;
    std::vector<double> lin;
    std::vector<double> quad;  // packed k <= l

    double operator()(const std::vector<double>& x) const {
        const int n = static_cast<int>(x.size());
        double v = c0;
        std::size_t q = 0;
        for (int k = 0; k < n; ++k) {
            v += lin[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
            for (int l = k; l < n; ++l) v += quad[q++] * x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(l)];
        }
        return v;
    }

    void scale(double f) {
        c0 *= f;
        for (double& c : lin) c *= f;
        for (double& c : quad) c *= f;
    }

    std::string text(int n) const {
        std::ostringstream os;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c0);
        os << buf;
        std::size_t q = 0;
        for (int k = 0; k < n; ++k) {
            std::snprintf(buf, sizeof buf, " + (%.17g)*x%d", lin[static_cast<std::size_t>(k)], k + 1);
            os << buf;
            for (int l = k; l < n; ++l) {
                std::snprintf(buf, sizeof buf, " + (%.17g)*x%d*x%d", quad[q++], k + 1, l + 1);
                os << buf;
            }
        }
        return os.str();
    }
};

Quadratic random_quadratic(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Quadratic p;
    p.c0 = u(rng);
    for (int k = 0; k < n; ++k) p.lin.push_back(u(rng));
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) p.quad.push_back(u(rng));
    return p;
}

double b_squared(std::vector<double> a, std::vector<double> b, int n) {
    // Gaussian elimination on a z = b, then b.z.
    const std::vector<double> b0 = b;
    for (int c = 0; c < n; ++c) {
        const double piv = a[static_cast<std::size_t>(c * n + c)];
        for (int r = c + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r * n + c)] / piv;
            for (int j = c; j < n; ++j) a[static_cast<std::size_t>(r * n + j)] -= f * a[static_cast<std::size_t>(c * n + j)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
        }
    }
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= a[static_cast<std::size_t>(i * n + j)] * z[static_cast<std::size_t>(j)];
        z[static_cast<std::size_t>(i)] = acc / a[static_cast<std::size_t>(i * n + i)];
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += b0[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    return s;
}

}  // namespace

std::string random_metric_text(const RandomMetricOptions& opt) {
    const int n = opt.dim;
    if (n < 2 || n > 8) throw std::invalid_argument("random_metric: dim must be in 2..8");
    std::mt19937_64 rng(opt.seed);
    std::vector<Quadratic> pa;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) pa.push_back(random_quadratic(n, rng));
    std::vector<Quadratic> pb;
    for (int i = 0; i < n; ++i) pb.push_back(random_quadratic(n, rng));

    // Check points: random samples plus every corner of the box.
    std::vector<std::vector<double>> pts;
    std::uniform_real_distribution<double> ux(-opt.half_width, opt.half_width);
    for (int s = 0; s < opt.check_samples; ++s) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (double& v : x) v = ux(rng);
        pts.push_back(x);
    }
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = (mask >> k & 1) ? opt.half_width : -opt.half_width;
        pts.push_back(x);
    }

    auto a_at = [&](const std::vector<double>& x, double eps, double shift) {
        std::vector<double> a(static_cast<std::size_t>(n * n));
        std::size_t q = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = (i == j ? 1.0 - shift : 0.0) + eps * pa[q++](x);
                a[static_cast<std::size_t>(i * n + j)] = v;
                a[static_cast<std::size_t>(j * n + i)] = v;
            }
        return a;
    };

    double eps = 0.5;
    for (int attempt = 0;; ++attempt) {
        bool ok = true;
        for (const auto& x : pts) {
            if (!(cholesky_min_pivot(a_at(x, eps, opt.min_eigen), n) > 0.0)) {
                ok = false;
                break;
            }
        }
        if (ok) break;
        if (attempt > 60) throw std::runtime_error("random_metric: could not make a positive definite");
        eps *= 0.5;
    }

    if (opt.with_beta) {
        double max_bsq = 0.0;
        for (const auto& x : pts) {
            std::vector<double> b(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = pb[static_cast<std::size_t>(i)](x);
            max_bsq = std::max(max_bsq, b_squared(a_at(x, eps, 0.0), b, n));
        }
        const double f = std::sqrt(opt.max_bsq / max_bsq);
        for (auto& p : pb) p.scale(f);
    }

    std::ostringstream os;
    os << "# random metric, seed " << opt.seed << "\n";
    os << "dim = " << n << "\n";
    for (int k = 0; k < n; ++k) os << "domain x" << k + 1 << " = [" << -opt.half_width << ", " << opt.half_width << "]\n";
    std::size_t q = 0;
    char buf[64];
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Quadratic p = pa[q++];
            p.scale(eps);
            if (i == j) p.c0 += 1.0;
            std::snprintf(buf, sizeof buf, "a %d %d = ", i + 1, j + 1);
            os << buf << p.text(n) << "\n";
        }
    if (opt.with_beta)
        for (int i = 0; i < n; ++i) os << "b " << i + 1 << " = " << pb[static_cast<std::size_t>(i)].text(n) << "\n";
    return os.str();
}

MetricSpec random_metric(const RandomMetricOptions& opt) {
    return parse_metric(random_metric_text(opt), "random-" + std::to_string(opt.dim) + "-" + std::to_string(opt.seed));
}

}  // namespace finsler
