#include "finsler/quadrature.hpp"

#include <numbers>

namespace finsler {

GaussLegendreRule::GaussLegendreRule(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
    nodes_.resize(static_cast<std::size_t>(order));
    weights_.resize(static_cast<std::size_t>(order));
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = order * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= order; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        dp = order * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes_[static_cast<std::size_t>(i)] = -z;
        nodes_[static_cast<std::size_t>(order - 1 - i)] = z;
        weights_[static_cast<std::size_t>(i)] = w;
        weights_[static_cast<std::size_t>(order - 1 - i)] = w;
    }
}

const GaussLegendreRule& gauss_legendre_10() {
    static const GaussLegendreRule rule(10);
    return rule;
}

const GaussLegendreRule& gauss_legendre_20() {
    static const GaussLegendreRule rule(20);
    return rule;
}

double magnitude(const Jet& j) {
    double m = std::abs(j.value());
    for (int i = 0; i < j.directions(); ++i) {
        m = std::max(m, std::abs(j.grad(i)));
        for (int k = 0; k <= i; ++k) m = std::max(m, std::abs(j.hess(k, i)));
    }
    return m;
}

}  // namespace finsler
