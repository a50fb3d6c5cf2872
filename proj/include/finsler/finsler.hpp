#pragma once

#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/riemann.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// ||beta||_alpha >= 1/2: the Matsumoto metric is not Finsler there.
class ValidityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// phi(s) = 1/(1 - s) and its first two derivatives, for any scalar type
/// with the arithmetic of double (double or Jet).
struct MatsumotoPhi {
    template <class T>
    static T phi(const T& s) { return 1.0 / (1.0 - s); }
    template <class T>
    static T dphi(const T& s) { const T u = 1.0 / (1.0 - s); return u * u; }
    template <class T>
    static T d2phi(const T& s) { const T u = 1.0 / (1.0 - s); return 2.0 * u * u * u; }
};

struct PhiData {
    double s = 0.0;
    double phi = 0.0, dphi = 0.0, d2phi = 0.0;
    double Q = 0.0, Psi = 0.0, Theta = 0.0;
    double Delta = 0.0;  // phi - s phi' + (b^2 - s^2) phi''
    double bsq = 0.0;
};

enum class PhiMode { Generic, MatsumotoClosedForm };

/// Throws ValidityError when b^2 >= 1/4 or |s| > b.
PhiData phi_data(double s, double bsq, PhiMode mode);

enum class SprayMode { General, Matsumoto };

/// G^i = Gbar^i + T^i as 2n-direction jets in (x, y): value, first
/// derivatives, and the x-y and y-y second derivatives are exact.
struct SprayJets {
    int n = 0;
    std::vector<Jet> G;
    std::vector<Jet> Gbar;
    std::vector<Jet> T;
    Jet alpha, beta, F;
};

/// Spray of the Matsumoto metric F = alpha^2/(alpha - beta). With
/// `with_beta == false` the spray of alpha alone (T = 0) is returned.
SprayJets spray(const AlphaBetaBundle& bundle, std::span<const double> y, SprayMode mode = SprayMode::Matsumoto,
                bool with_beta = true);

/// R^i_k and Ric = R^k_k from any spray given as 2n-direction jets.
struct Curvature {
    Mat R;
    double ric = 0.0;
};
Curvature riemann_curvature(std::span<const Jet> G, std::span<const double> y);

/// Ric = Ricbar + 2 T^k_{|k} - y^j T^k_{.k|j} + 2 T^j T^k_{.j.k} - T^k_{.j} T^j_{.k}.
double ricci_via_T(const AlphaBetaBundle& bundle, std::span<const double> y, const SprayJets& spray);

/// g_ij = 1/2 [F^2]_{y^i y^j}.
Mat fundamental_tensor(const SprayJets& spray);

struct FinslerEval {
    double F = 0.0, alpha = 0.0, beta = 0.0;
    std::vector<double> G, T;
    Mat g;
    Mat R;
    double ric = 0.0;
    double ric_via_T = 0.0;
    double residual = 0.0;  // Ric - sigma F^2
};
FinslerEval evaluate_finsler(const AlphaBetaBundle& bundle, std::span<const double> y, double sigma = 0.0);

double einstein_residual(const AlphaBetaBundle& bundle, std::span<const double> y, double sigma);

struct ScalarFit {
    double lambda = 0.0, c = 0.0, sigma = 0.0;
    double lambda_residual = 0.0, c_residual = 0.0, sigma_residual = 0.0;
    double ricbar_scale = 0.0, r00_scale = 0.0, ric_scale = 0.0;
};

/// Least-squares fits Ricbar = lambda alpha^2, r00 = c alpha^2, Ric = sigma F^2
/// over the given directions (each normalized to alpha = 1). Residuals are
/// max absolute deviations. Needs at least 8 samples.
ScalarFit extract_scalars(const AlphaBetaBundle& bundle, std::span<const std::vector<double>> ys);

struct FlagFit {
    double K = 0.0;
    double residual = 0.0;  // max |R^i_k - K (F^2 delta^i_k - y^i y_k)|
    double scale = 0.0;     // max |R^i_k|, max |h^i_k|
};
FlagFit flag_curvature_fit(const AlphaBetaBundle& bundle, std::span<const double> y);

/// 2n axis directions (+-e_i) followed by `random_count` random directions,
/// all normalized to alpha(x, y) = 1.
std::vector<std::vector<double>> y_sample_design(const AlphaBetaBundle& bundle, int random_count, std::mt19937_64& rng);

/// `count` random directions on the unit alpha-sphere.
std::vector<std::vector<double>> random_unit_directions(const AlphaBetaBundle& bundle, int count, std::mt19937_64& rng);

}  // namespace finsler
