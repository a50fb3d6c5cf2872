#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "finsler/metric_spec.hpp"
#include "finsler/random_metric.hpp"

namespace test_support {

inline finsler::MetricSpec shipped(const std::string& stem) {
    return finsler::load_metric(std::string(FINSLER_METRICS_DIR) + "/" + stem + ".metric");
}

inline finsler::MetricSpec random_spec(int dim, std::uint64_t seed, bool with_beta = true) {
    finsler::RandomMetricOptions opt;
    opt.dim = dim;
    opt.seed = seed;
    opt.with_beta = with_beta;
    return finsler::random_metric(opt);
}

/// Uniform point in the domain box shrunk by 5% per side.
inline std::vector<double> interior_point(const finsler::MetricSpec& spec, std::mt19937_64& rng) {
    std::vector<double> x;
    for (const auto& d : spec.domain) {
        const double m = 0.05 * (d.hi - d.lo);
        x.push_back(std::uniform_real_distribution<double>(d.lo + m, d.hi - m)(rng));
    }
    return x;
}

inline std::vector<double> gaussian_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y) v = g(rng);
    return y;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace test_support
