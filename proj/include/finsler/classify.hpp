#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finsler/appendix.hpp"
#include "finsler/metric_spec.hpp"
#include "finsler/scurvature.hpp"

namespace finsler {

enum class OutputFormat { Text, Json, Csv };

const char* to_string(OutputFormat f);

/// Sampling and threshold settings shared by every batch run.
struct RunConfig {
    std::string metric_path;
    int points = 20;
    int y_per_point = 12;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    VolumeForm volume = VolumeForm::BusemannHausdorff;
    OutputFormat format = OutputFormat::Text;

    /// Throws std::invalid_argument on non-positive counts or tolerance.
    void check() const;
};

/// Verdict for one structural condition over all samples. `residual` is the
/// largest raw residual, `scale` the largest scale it was measured against;
/// the verdict holds when residual <= tol * max(1, scale) at every sample.
/// `value` carries the fitted scalar (lambda, c, sigma, K) when the
/// per-point fits agree within 10 * tol.
struct ConditionResult {
    std::string name;
    bool verdict = false;
    double residual = 0.0;
    double scale = 0.0;
    std::optional<double> value;
};

/// A logical relation between verdicts that every correct engine must
/// respect. `applicable` is false when the relation's hypotheses on the
/// dimension or on beta do not hold.
struct Implication {
    std::string rule;
    bool applicable = false;
    bool holds = true;
};

struct PointSummary {
    int index = 0;
    std::vector<double> x;
    double bsq = 0.0;
    double lambda = 0.0, c = 0.0, sigma = 0.0;
    double max_r = 0.0, max_s = 0.0, max_s_i = 0.0, max_Db = 0.0;
    double max_ricci = 0.0;
    double max_abs_S = 0.0;
    double K_min = 0.0, K_max = 0.0;
};

/// One (x, y) sample; y is on the unit alpha-sphere.
struct SampleRow {
    int point = 0;
    int y_index = 0;
    std::vector<double> x, y;
    double alpha = 0.0, beta = 0.0, F = 0.0;
    double ricbar = 0.0, ric = 0.0, ric_via_T = 0.0;
    double r00 = 0.0;
    double S = 0.0;
    double K = 0.0, flag_residual = 0.0;
};

struct ClassReport {
    std::string metric;
    int dim = 0;
    RunConfig config;
    bool beta_vanishes = false;
    std::vector<ConditionResult> conditions;
    std::vector<Implication> implications;
    std::vector<PointSummary> points;
    std::vector<SampleRow> rows;

    const ConditionResult& condition(const std::string& name) const;
    bool consistent() const;
};

/// Samples `points` chart points uniformly from the domain box shrunk by 5%
/// per side and `y_per_point` directions on the unit alpha-sphere at each,
/// evaluates every condition, and checks the implications. Deterministic for
/// a fixed (spec, config). Throws ValidityError / GeometryError when a sample
/// leaves the valid region.
ClassReport run_check(const MetricSpec& spec, const RunConfig& config);

std::string emit_report(const ClassReport& report, OutputFormat format);

enum class SigmaPolicy { Fixed, Random };

struct AppendixConfig {
    int points = 50;
    std::uint64_t seed = 1;
    SigmaPolicy sigma_policy = SigmaPolicy::Random;
    double sigma = 0.0;  // used when the policy is Fixed
    double tol = 1e-6;
};

struct AppendixSample {
    int point = 0;
    std::vector<double> x, y;
    double sigma = 0.0;
    double lhs = 0.0, rhs = 0.0, deviation = 0.0;
    double even_deviation = 0.0, odd_deviation = 0.0, term_parity = 0.0;
    double contraction_mismatch = 0.0;
    int suspect_term = -1;
};

struct AppendixSummary {
    std::string metric;
    int dim = 0;
    double tol = 0.0;
    double max_deviation = 0.0;
    double max_even_deviation = 0.0, max_odd_deviation = 0.0;
    double max_term_parity = 0.0;
    double max_contraction_mismatch = 0.0;
    int failures = 0;
    /// How often each m was the single term whose removal best reduced the
    /// deviation, over the failing samples.
    std::array<int, 15> suspect_counts{};
    std::vector<AppendixSample> samples;

    bool passed() const { return failures == 0; }
    std::vector<int> suspect_terms() const;
};

/// Cleared-residual identity and parity split over random (x, y, sigma).
AppendixSummary run_appendix(const MetricSpec& spec, const AppendixConfig& config);

std::string emit_appendix(const std::vector<AppendixSummary>& summaries, OutputFormat format);

}  // namespace finsler
