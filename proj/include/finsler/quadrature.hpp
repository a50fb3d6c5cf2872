#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
class GaussLegendreRule {
public:
    explicit GaussLegendreRule(int order);
    int order() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

const GaussLegendreRule& gauss_legendre_10();
const GaussLegendreRule& gauss_legendre_20();

inline double magnitude(double v) { return std::abs(v); }
double magnitude(const Jet& j);

namespace detail {

template <class T, class F>
T apply_rule(const GaussLegendreRule& rule, F& f, double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    T sum = f(mid + half * rule.nodes()[0]) * rule.weights()[0];
    for (int i = 1; i < rule.order(); ++i) sum += f(mid + half * rule.nodes()[static_cast<std::size_t>(i)]) * rule.weights()[static_cast<std::size_t>(i)];
    return sum * half;
}

template <class T, class F>
T adapt(F& f, double a, double b, double tol, int depth) {
    const T coarse = apply_rule<T>(gauss_legendre_10(), f, a, b);
    const T fine = apply_rule<T>(gauss_legendre_20(), f, a, b);
    if (magnitude(fine - coarse) <= tol) return fine;
    if (depth <= 0) throw std::runtime_error("adaptive quadrature: recursion limit reached");
    const double m = 0.5 * (a + b);
    T left = adapt<T>(f, a, m, 0.5 * tol, depth - 1);
    left += adapt<T>(f, m, b, 0.5 * tol, depth - 1);
    return left;
}

}  // namespace detail

/// Adaptive Gauss-Legendre: compares the 10- and 20-point rules on each panel
/// and bisects until they agree to `tol` (absolute, split across panels).
/// T may be double or Jet; for Jet the value, gradient and Hessian are
/// integrated together.
template <class T, class F>
T integrate(F f, double a, double b, double tol = 1e-12, int max_depth = 30) {
    return detail::adapt<T>(f, a, b, tol, max_depth);
}

}  // namespace finsler
