#pragma once

#include <span>
#include <vector>

#include "finsler/metric_spec.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

enum class VolumeForm { BusemannHausdorff, HolmesThompson };

const char* to_string(VolumeForm form);

/// dV = f(b) dV_alpha for the Matsumoto metric in dimension n.
/// lambda = f'(b) / (b f(b)), continued to b = 0 by f''(0)/f(0).
struct VolumeFactor {
    VolumeForm form = VolumeForm::BusemannHausdorff;
    int n = 0;
    double b = 0.0;
    double f = 0.0;
    double fprime = 0.0;
    double fsecond = 0.0;
    double lambda = 0.0;
};

/// Quadrature on [0, pi] with b carried as a jet direction. Results are
/// memoized per (n, b rounded to 1e-12, form); throws std::domain_error for
/// b outside [0, 1/2) or n < 2.
VolumeFactor volume_factor(int n, double b, VolumeForm form);

/// Which transcription of the closed form to evaluate. `AsPrinted` keeps the
/// printed r0 coefficient -2/(3s-2b^2-1)^2 and the +lambda(r0+s0) sign;
/// `Corrected` uses -2/(3s-2b^2-1) and -lambda(r0+s0), which is what
/// differentiating the spray gives (and what s_curvature_def reproduces).
enum class ClosedFormVariant { Corrected, AsPrinted };

/// S-curvature from the closed form in s = beta/alpha, r00, r0, s0 and lambda.
double s_curvature_closed(const AlphaBetaBundle& bundle, std::span<const double> y, VolumeForm form,
                          ClosedFormVariant variant = ClosedFormVariant::Corrected);

/// S-curvature from its definition dG^i/dy^i - y^i d(ln sigma_F)/dx^i with
/// sigma_F = f(b(x)) sqrt(det a(x)); the x-derivatives of b^2 and det a are
/// taken through jets of a(x) and b(x) rather than through the bundle's
/// covariant quantities.
double s_curvature_def(const AlphaBetaBundle& bundle, std::span<const double> y, VolumeForm form);

struct KillingVerdict {
    bool constant_killing = false;
    double max_r = 0.0;    // max |r_ij|
    double max_s_i = 0.0;  // max |s_i|
};

/// beta is constant Killing iff r_ij = 0 and s_i = 0 at every sample.
KillingVerdict constant_killing_verdict(std::span<const AlphaBetaBundle> bundles, double tol);

}  // namespace finsler
