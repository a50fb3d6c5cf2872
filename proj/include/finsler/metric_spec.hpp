#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"

namespace finsler {

/// Matsumoto metrics are Finsler exactly when ||beta||_alpha < 1/2.
inline constexpr double kMatsumotoBound = 0.5;

struct Interval {
    double lo = -1.0;
    double hi = 1.0;
};

/// Analytic definition of alpha = sqrt(a_ij(x) y^i y^j) and beta = b_i(x) y^i
/// on a coordinate box. Null expression pointers stand for identically zero
/// entries; `a` is stored row-major and always symmetric.
struct MetricSpec {
    int dim = 0;
    std::vector<ExprPtr> a;
    std::vector<ExprPtr> b;
    std::vector<Interval> domain;
    std::string name;

    const ExprPtr& a_entry(int i, int j) const { return a[static_cast<std::size_t>(i * dim + j)]; }
    const ExprPtr& b_entry(int i) const { return b[static_cast<std::size_t>(i)]; }
};

/// Parses the line-oriented metric file format:
///
///     dim = <n>
///     domain x<k> = [<lo>, <hi>]
///     a <i> <j> = <expression>
///     b <i> = <expression>
///
/// '#' starts a comment. Setting a_ij also sets a_ji; assigning a different
/// expression to an entry that is already set is an error.
MetricSpec parse_metric(std::string_view text, std::string name = {});
MetricSpec load_metric(const std::string& path);

/// Renders a spec back into the file format; parse_metric(print_metric(s))
/// evaluates bit-identically to s.
std::string print_metric(const MetricSpec& spec);

/// Order-2 jets of a_ij and b_i over the coordinates, seeded in all dim
/// directions. Row-major n*n and n.
struct MetricJets {
    std::vector<Jet> a;
    std::vector<Jet> b;
};
MetricJets evaluate_metric(const MetricSpec& spec, std::span<const double> x);
std::vector<double> evaluate_a(const MetricSpec& spec, std::span<const double> x);
std::vector<double> evaluate_b(const MetricSpec& spec, std::span<const double> x);

enum class ViolationKind { NotPositiveDefinite, BetaTooLong, EvaluationError };

struct Violation {
    std::vector<double> point;
    ViolationKind kind;
    double value;  // b^2 for BetaTooLong, smallest pivot for NotPositiveDefinite
    std::string detail;
};

struct ValidationReport {
    int samples = 0;
    double max_bsq = 0.0;
    double min_pivot = 0.0;
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
};

/// Samples the domain box and checks positive-definiteness of a(x) and the
/// Matsumoto bound b^2 < 1/4. Violations are returned as data.
ValidationReport validate_spec(const MetricSpec& spec, int samples, std::uint64_t seed);

/// Smallest Cholesky pivot of a symmetric matrix (non-positive when the
/// factorization breaks down).
double cholesky_min_pivot(std::span<const double> m, int n);

const char* to_string(ViolationKind k);

}  // namespace finsler
