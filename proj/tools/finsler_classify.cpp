// Batch front end: classify a metric file, verify the cleared Einstein
// identity, and report S-curvature and flag-curvature samples.
//
// Exit status: 0 clean run, 1 usage or runtime error, 2 invalid metric,
// 3 engine inconsistency (an implication between verdicts was violated).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finsler/classify.hpp"
#include "finsler/expr.hpp"
#include "finsler/finsler.hpp"
#include "finsler/random_metric.hpp"
#include "finsler/riemann.hpp"
#include "finsler/scurvature.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitInvalidMetric = 2;
constexpr int kExitInconsistent = 3;
constexpr int kValidationSamples = 400;

struct InvalidMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};

finsler::MetricSpec load_valid(const std::string& path, std::uint64_t seed) {
    finsler::MetricSpec spec;
    try {
        spec = finsler::load_metric(path);
    } catch (const finsler::ParseError& e) {
        throw InvalidMetric(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                            e.what());
    } catch (const std::exception& e) {
        throw InvalidMetric(path + ": " + e.what());
    }
    const auto v = finsler::validate_spec(spec, kValidationSamples, seed);
    if (!v.valid()) {
        const auto& first = v.violations.front();
        throw InvalidMetric(path + ": " + std::to_string(v.violations.size()) + " invalid samples, first: " +
                            finsler::to_string(first.kind) + " (" + first.detail + ")");
    }
    return spec;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << text;
}

std::vector<double> shrunk_point(const finsler::MetricSpec& spec, std::mt19937_64& rng) {
    std::vector<double> x;
    for (const auto& d : spec.domain) {
        const double m = 0.05 * (d.hi - d.lo);
        x.push_back(std::uniform_real_distribution<double>(d.lo + m, d.hi - m)(rng));
    }
    return x;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "% .6e", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature classification of Matsumoto metrics F = alpha^2/(alpha - beta)"};
    app.require_subcommand(1);

    const std::map<std::string, finsler::VolumeForm> volumes{{"bh", finsler::VolumeForm::BusemannHausdorff},
                                                             {"ht", finsler::VolumeForm::HolmesThompson}};
    const std::map<std::string, finsler::OutputFormat> formats{{"text", finsler::OutputFormat::Text},
                                                               {"json", finsler::OutputFormat::Json},
                                                               {"csv", finsler::OutputFormat::Csv}};

    finsler::RunConfig cfg;
    std::string out_path;
    auto* check = app.add_subcommand("check", "classify beta, alpha and F at sampled points");
    check->add_option("metric", cfg.metric_path, "metric file")->required();
    check->add_option("--points", cfg.points, "chart points")->check(CLI::PositiveNumber);
    check->add_option("--y-per-point", cfg.y_per_point, "directions per point")->check(CLI::PositiveNumber);
    check->add_option("--seed", cfg.seed, "random seed");
    check->add_option("--tol", cfg.tol, "relative tolerance")->check(CLI::PositiveNumber);
    check->add_option("--volume", cfg.volume, "volume form (bh|ht)")->transform(CLI::CheckedTransformer(volumes));
    check->add_option("--format", cfg.format, "text|json|csv")->transform(CLI::CheckedTransformer(formats));
    check->add_option("--out", out_path, "write the report here instead of stdout");

    std::string app_metric;
    std::string sigma_arg = "random";
    std::vector<int> dim_sweep;
    finsler::AppendixConfig acfg;
    finsler::OutputFormat aformat = finsler::OutputFormat::Text;
    auto* appendix = app.add_subcommand("appendix", "verify the cleared Einstein identity and its parity split");
    appendix->add_option("metric", app_metric, "metric file (omit with --dim-sweep)");
    appendix->add_option("--sigma", sigma_arg, "Einstein scalar: a number or 'random'");
    appendix->add_option("--points", acfg.points, "samples per metric")->check(CLI::PositiveNumber);
    appendix->add_option("--seed", acfg.seed, "random seed");
    appendix->add_option("--tol", acfg.tol, "relative tolerance")->check(CLI::PositiveNumber);
    appendix->add_option("--dim-sweep", dim_sweep, "random metrics of these dimensions, e.g. 3,4,5")
        ->delimiter(',');
    appendix->add_option("--format", aformat, "text|json|csv")->transform(CLI::CheckedTransformer(formats));

    std::string s_metric;
    finsler::VolumeForm s_volume = finsler::VolumeForm::BusemannHausdorff;
    int s_points = 20;
    std::uint64_t s_seed = 1;
    auto* scurv = app.add_subcommand("scurv", "S-curvature by the closed form and by the definition");
    scurv->add_option("metric", s_metric, "metric file")->required();
    scurv->add_option("--volume", s_volume, "volume form (bh|ht)")->transform(CLI::CheckedTransformer(volumes));
    scurv->add_option("--points", s_points, "sample points")->check(CLI::PositiveNumber);
    scurv->add_option("--seed", s_seed, "random seed");

    std::string f_metric;
    int f_points = 20;
    std::uint64_t f_seed = 1;
    auto* flag = app.add_subcommand("flag", "flag-curvature fit R = K (F^2 delta - y y_low)");
    flag->add_option("metric", f_metric, "metric file")->required();
    flag->add_option("--points", f_points, "sample points")->check(CLI::PositiveNumber);
    flag->add_option("--seed", f_seed, "random seed");

    std::string v_metric;
    auto* validate = app.add_subcommand("validate", "parse and check positive-definiteness and b < 1/2");
    validate->add_option("metric", v_metric, "metric file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            const auto spec = load_valid(cfg.metric_path, cfg.seed);
            const auto report = finsler::run_check(spec, cfg);
            write_output(finsler::emit_report(report, cfg.format), out_path);
            if (!report.consistent()) {
                std::cerr << "engine inconsistency: a verdict implication was violated\n";
                return kExitInconsistent;
            }
            return 0;
        }
        if (*appendix) {
            if (sigma_arg == "random") {
                acfg.sigma_policy = finsler::SigmaPolicy::Random;
            } else {
                acfg.sigma_policy = finsler::SigmaPolicy::Fixed;
                try {
                    acfg.sigma = std::stod(sigma_arg);
                } catch (const std::exception&) {
                    std::cerr << "--sigma expects a number or 'random'\n";
                    return kExitError;
                }
            }
            std::vector<finsler::AppendixSummary> sums;
            if (!app_metric.empty()) sums.push_back(finsler::run_appendix(load_valid(app_metric, acfg.seed), acfg));
            for (int n : dim_sweep) {
                finsler::RandomMetricOptions opt;
                opt.dim = n;
                opt.seed = acfg.seed;
                sums.push_back(finsler::run_appendix(finsler::random_metric(opt), acfg));
            }
            if (sums.empty()) {
                std::cerr << "appendix: give a metric file or --dim-sweep\n";
                return kExitError;
            }
            std::cout << finsler::emit_appendix(sums, aformat);
            return 0;
        }
        if (*scurv) {
            const auto spec = load_valid(s_metric, s_seed);
            std::mt19937_64 rng(s_seed);
            std::cout << "# point  y  S_closed  S_definition  |difference|\n";
            double worst = 0.0, max_s = 0.0;
            std::vector<finsler::AlphaBetaBundle> bundles;
            for (int p = 0; p < s_points; ++p) {
                const auto B = finsler::build_bundle(spec, shrunk_point(spec, rng));
                const auto y = finsler::random_unit_directions(B, 1, rng).front();
                const double sc = finsler::s_curvature_closed(B, y, s_volume);
                const double sd = finsler::s_curvature_def(B, y, s_volume);
                worst = std::max(worst, std::abs(sc - sd) / std::max(1.0, std::abs(sc)));
                max_s = std::max(max_s, std::abs(sc));
                std::cout << p << "  0  " << fmt(sc) << "  " << fmt(sd) << "  " << fmt(std::abs(sc - sd)) << "\n";
                bundles.push_back(B);
            }
            const auto kv = finsler::constant_killing_verdict(bundles, 1e-9);
            std::cout << "volume " << finsler::to_string(s_volume) << ", max |S| " << fmt(max_s)
                      << ", max relative route difference " << fmt(worst) << "\n";
            std::cout << "constant Killing: " << (kv.constant_killing ? "yes" : "no") << " (max |r_ij| "
                      << fmt(kv.max_r) << ", max |s_i| " << fmt(kv.max_s_i) << ")\n";
            return 0;
        }
        if (*flag) {
            const auto spec = load_valid(f_metric, f_seed);
            std::mt19937_64 rng(f_seed);
            std::cout << "# point  K  residual  scale\n";
            double kmin = INFINITY, kmax = -INFINITY, worst = 0.0;
            for (int p = 0; p < f_points; ++p) {
                const auto B = finsler::build_bundle(spec, shrunk_point(spec, rng));
                const auto y = finsler::random_unit_directions(B, 1, rng).front();
                const auto fit = finsler::flag_curvature_fit(B, y);
                kmin = std::min(kmin, fit.K);
                kmax = std::max(kmax, fit.K);
                worst = std::max(worst, fit.residual / std::max(1.0, fit.scale));
                std::cout << p << "  " << fmt(fit.K) << "  " << fmt(fit.residual) << "  " << fmt(fit.scale) << "\n";
            }
            std::cout << "K range [" << fmt(kmin) << ", " << fmt(kmax) << "], max relative residual " << fmt(worst)
                      << "\n";
            return 0;
        }
        if (*validate) {
            finsler::MetricSpec spec;
            try {
                spec = finsler::load_metric(v_metric);
            } catch (const finsler::ParseError& e) {
                std::cerr << v_metric << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
                return kExitInvalidMetric;
            } catch (const std::exception& e) {
                std::cerr << v_metric << ": " << e.what() << "\n";
                return kExitInvalidMetric;
            }
            const auto v = finsler::validate_spec(spec, kValidationSamples, 1);
            std::cout << "dim " << spec.dim << ", " << v.samples << " samples, max b^2 " << fmt(v.max_bsq)
                      << ", min Cholesky pivot " << fmt(v.min_pivot) << "\n";
            for (const auto& viol : v.violations) {
                std::cout << "  " << finsler::to_string(viol.kind) << " at (";
                for (std::size_t k = 0; k < viol.point.size(); ++k) std::cout << (k ? ", " : "") << viol.point[k];
                std::cout << "): " << viol.detail << "\n";
            }
            std::cout << (v.valid() ? "valid\n" : "INVALID\n");
            return v.valid() ? 0 : kExitInvalidMetric;
        }
    } catch (const InvalidMetric& e) {
        std::cerr << "invalid metric: " << e.what() << "\n";
        return kExitInvalidMetric;
    } catch (const finsler::ValidityError& e) {
        std::cerr << "invalid metric: " << e.what() << "\n";
        return kExitInvalidMetric;
    } catch (const finsler::GeometryError& e) {
        std::cerr << "invalid metric: " << e.what() << "\n";
        return kExitInvalidMetric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
