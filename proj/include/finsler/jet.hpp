#pragma once

// Truncated Taylor expansion of total order 2 over a small set of seed
// directions. Every arithmetic operation propagates the exact value, gradient
// and Hessian of the composed function.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace finsler {

/// Raised when a jet operation leaves the domain of the underlying function
/// (division by ~0, sqrt/log of a non-positive value, fractional power of a
/// non-positive base).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class Jet {
public:
    static constexpr int kMaxDirections = 17;
    static constexpr int kHessSize = kMaxDirections * (kMaxDirections + 1) / 2;
    static constexpr double kTiny = 1e-300;

    constexpr Jet() = default;
    /// Constant jet over `directions` directions.
    explicit Jet(double value, int directions = 0);

    static Jet variable(double value, int direction, int directions);

    double value() const { return value_; }
    int directions() const { return dirs_; }
    double grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    double hess(int i, int j) const { return hess_[packed(i, j)]; }

    void set_value(double v) { value_ = v; }
    void set_grad(int i, double g);
    void set_hess(int i, int j, double h);

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double c) { value_ += c; return *this; }
    Jet& operator-=(double c) { value_ -= c; return *this; }
    Jet& operator*=(double c);
    Jet& operator/=(double c);

    /// Applies a scalar function given its value and first two derivatives at
    /// value(): the order-2 chain rule.
    Jet compose(double f, double df, double d2f) const;

    /// Index into packed upper-triangular storage; symmetric in (i, j).
    static constexpr std::size_t packed(int i, int j) {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(j * (j + 1) / 2 + i);
    }

private:
    int dirs_ = 0;
    double value_ = 0.0;
    std::array<double, kMaxDirections> grad_{};
    std::array<double, kHessSize> hess_{};

    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet reciprocal(const Jet& a);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

Jet reciprocal(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet square(const Jet& a);

/// Seeds the inputs listed in `active` as independent variables; the k-th
/// entry of `active` gets direction k. Remaining inputs become constants.
/// Throws std::invalid_argument on a duplicate or out-of-range index.
std::vector<Jet> seed(std::span<const double> values, std::span<const int> active);

/// Central difference (f(x + h e_i) - f(x - h e_i)) / 2h.
double fd_oracle(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> x, int i, double h);

/// Central second difference for d^2 f / dx_i dx_j.
double fd_oracle2(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> x, int i, int j, double h);

}  // namespace finsler
