#pragma once

#include <cstdint>
#include <string>

#include "finsler/metric_spec.hpp"

namespace finsler {

struct RandomMetricOptions {
    int dim = 3;
    std::uint64_t seed = 1;
    double half_width = 0.5;     // domain box [-w, w]^n
    bool with_beta = true;
    double max_bsq = 0.2;        // target for max sampled b^2
    double min_eigen = 0.2;      // a - min_eigen * I must stay positive definite
    int check_samples = 200;
};

/// a = I + eps * (random symmetric quadratic polynomial matrix), with eps
/// halved until a - min_eigen I factors at every check sample and box corner;
/// b = random quadratic polynomials rescaled so the largest sampled b^2 equals
/// max_bsq. The metric is produced as text and parsed, so it is an ordinary
/// MetricSpec. Deterministic in the seed.
std::string random_metric_text(const RandomMetricOptions& opt);
MetricSpec random_metric(const RandomMetricOptions& opt);

}  // namespace finsler
