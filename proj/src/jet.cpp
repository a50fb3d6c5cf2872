#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace finsler {

namespace {

int merged_dirs(int a, int b) {
    if (a != 0 && b != 0 && a != b)
        throw std::invalid_argument("jet direction count mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b));
    return std::max(a, b);
}

std::size_t hess_len(int d) { return static_cast<std::size_t>(d * (d + 1) / 2); }

void check_denominator(double v, const char* what) {
    if (!(std::abs(v) > Jet::kTiny)) throw DomainError(std::string(what) + ": denominator vanishes");
}

}  // namespace

Jet::Jet(double value, int directions) : dirs_(directions), value_(value) {
    if (directions < 0 || directions > kMaxDirections)
        throw std::invalid_argument("jet direction count out of range");
}

Jet Jet::variable(double value, int direction, int directions) {
    Jet j(value, directions);
    if (direction < 0 || direction >= directions)
        throw std::invalid_argument("seed direction out of range");
    j.grad_[static_cast<std::size_t>(direction)] = 1.0;
    return j;
}

void Jet::set_grad(int i, double g) {
    if (i < 0 || i >= dirs_) throw std::out_of_range("jet gradient index");
    grad_[static_cast<std::size_t>(i)] = g;
}

void Jet::set_hess(int i, int j, double h) {
    if (i < 0 || i >= dirs_ || j < 0 || j >= dirs_) throw std::out_of_range("jet hessian index");
    hess_[packed(i, j)] = h;
}

Jet Jet::operator-() const {
    Jet r(*this);
    r.value_ = -value_;
    for (int i = 0; i < dirs_; ++i) r.grad_[i] = -grad_[i];
    for (std::size_t k = 0; k < hess_len(dirs_); ++k) r.hess_[k] = -hess_[k];
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    dirs_ = merged_dirs(dirs_, o.dirs_);
    value_ += o.value_;
    for (int i = 0; i < o.dirs_; ++i) grad_[i] += o.grad_[i];
    for (std::size_t k = 0; k < hess_len(o.dirs_); ++k) hess_[k] += o.hess_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    dirs_ = merged_dirs(dirs_, o.dirs_);
    value_ -= o.value_;
    for (int i = 0; i < o.dirs_; ++i) grad_[i] -= o.grad_[i];
    for (std::size_t k = 0; k < hess_len(o.dirs_); ++k) hess_[k] -= o.hess_[k];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet& Jet::operator*=(double c) {
    value_ *= c;
    for (int i = 0; i < dirs_; ++i) grad_[i] *= c;
    for (std::size_t k = 0; k < hess_len(dirs_); ++k) hess_[k] *= c;
    return *this;
}

Jet& Jet::operator/=(double c) {
    check_denominator(c, "jet division by scalar");
    return *this *= (1.0 / c);
}

Jet Jet::compose(double f, double df, double d2f) const {
    Jet r(f, dirs_);
    for (int j = 0; j < dirs_; ++j) {
        r.grad_[j] = df * grad_[j];
        for (int i = 0; i <= j; ++i) {
            const std::size_t k = packed(i, j);
            r.hess_[k] = df * hess_[k] + d2f * grad_[i] * grad_[j];
        }
    }
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const int d = merged_dirs(a.dirs_, b.dirs_);
    Jet r(a.value_ * b.value_, d);
    for (int j = 0; j < d; ++j) {
        r.grad_[j] = a.value_ * b.grad_[j] + b.value_ * a.grad_[j];
        for (int i = 0; i <= j; ++i) {
            const std::size_t k = Jet::packed(i, j);
            r.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] +
                         a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
        }
    }
    return r;
}

Jet reciprocal(const Jet& a) {
    check_denominator(a.value_, "jet reciprocal");
    const double inv = 1.0 / a.value_;
    return a.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a -= c; }
Jet operator-(double c, const Jet& a) { return -a + c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a /= c; }
Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

Jet square(const Jet& a) { return a * a; }

Jet pow(const Jet& a, double p) {
    const double v = a.value();
    if (p == 0.0) return Jet(1.0, a.directions());
    const bool integral = std::floor(p) == p;
    if (!integral && !(v > 0.0))
        throw DomainError("jet pow: non-positive base with fractional exponent");
    if (p < 0.0) check_denominator(v, "jet pow");
    // Derivatives written as p v^{p-1} etc.; for small integral p and v == 0 the
    // terms with v^{negative} are multiplied by a zero coefficient.
    const double f = std::pow(v, p);
    const double df = (p == 1.0) ? 1.0 : p * std::pow(v, p - 1.0);
    const double d2f = (p == 1.0) ? 0.0 : (p == 2.0 ? 2.0 : p * (p - 1.0) * std::pow(v, p - 2.0));
    return a.compose(f, df, d2f);
}

Jet sqrt(const Jet& a) {
    const double v = a.value();
    if (!(v > Jet::kTiny)) throw DomainError("jet sqrt of non-positive value");
    const double s = std::sqrt(v);
    return a.compose(s, 0.5 / s, -0.25 / (s * v));
}

Jet sin(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(s, c, -s);
}

Jet cos(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(c, -s, -c);
}

Jet exp(const Jet& a) {
    const double e = std::exp(a.value());
    return a.compose(e, e, e);
}

Jet log(const Jet& a) {
    const double v = a.value();
    if (!(v > Jet::kTiny)) throw DomainError("jet log of non-positive value");
    return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}

std::vector<Jet> seed(std::span<const double> values, std::span<const int> active) {
    const int d = static_cast<int>(active.size());
    if (d < 1 || d > Jet::kMaxDirections) throw std::invalid_argument("seed: bad direction count");
    std::vector<int> slot(values.size(), -1);
    for (int k = 0; k < d; ++k) {
        const int idx = active[static_cast<std::size_t>(k)];
        if (idx < 0 || static_cast<std::size_t>(idx) >= values.size())
            throw std::invalid_argument("seed: input index out of range");
        if (slot[static_cast<std::size_t>(idx)] != -1)
            throw std::invalid_argument("seed: duplicate direction index");
        slot[static_cast<std::size_t>(idx)] = k;
    }
    std::vector<Jet> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back(slot[i] >= 0 ? Jet::variable(values[i], slot[i], d) : Jet(values[i], d));
    }
    return out;
}

double fd_oracle(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> x, int i, double h) {
    std::vector<double> p(x.begin(), x.end());
    const auto k = static_cast<std::size_t>(i);
    p[k] = x[k] + h;
    const double fp = f(p);
    p[k] = x[k] - h;
    const double fm = f(p);
    return (fp - fm) / (2.0 * h);
}

double fd_oracle2(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> x, int i, int j, double h) {
    std::vector<double> p(x.begin(), x.end());
    const auto ki = static_cast<std::size_t>(i), kj = static_cast<std::size_t>(j);
    if (i == j) {
        const double f0 = f(p);
        p[ki] = x[ki] + h;
        const double fp = f(p);
        p[ki] = x[ki] - h;
        const double fm = f(p);
        return (fp - 2.0 * f0 + fm) / (h * h);
    }
    auto at = [&](double si, double sj) {
        p[ki] = x[ki] + si * h;
        p[kj] = x[kj] + sj * h;
        return f(p);
    };
    return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
}

}  // namespace finsler
