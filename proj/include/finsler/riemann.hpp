#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/metric_spec.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// a(x) is singular or indefinite, or x lies outside the domain box.
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Riemannian geometry of alpha and the covariant calculus of beta at one
/// chart point. Index conventions:
///   dA(i,j,k)      = d_k a_ij            d2A(i,j,k,l) = d_k d_l a_ij
///   d_a_inv(i,j,k) = d_k a^ij
///   gamma(i,j,k)   = Gamma^i_jk          dgamma(i,j,k,l) = d_l Gamma^i_jk
///   riemann(i,j,k,l) = R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj
///                              + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj
///   rbar4(j,s,k,l) = a_sm R^m_jkl, so that b_{j|k|l} - b_{j|l|k} = b^s rbar4(j,s,k,l)
///   ricci(j,l)     = R^k_jkl
///   db(i,j) = d_j b_i,  d2b(i,j,k) = d_j d_k b_i
///   Db(i,j) = b_{i|j},  dDb(i,j,k) = d_k b_{i|j},  D2b(i,j,k) = b_{i|j|k}
///   Dr(i,j,k) = r_{ij|k}, Ds likewise; D_r_vec(i,k) = r_{i|k}; div_s(i) = s^k_{i|k}
struct AlphaBetaBundle {
    int n = 0;
    std::vector<double> x;

    Mat a, a_inv;
    Tensor3 dA;
    Tensor4 d2A;
    Tensor3 d_a_inv;
    double det_a = 0.0;
    Vec d_log_sqrt_det;  // d_k ln sqrt(det a)

    Tensor3 gamma;
    Tensor4 dgamma;
    Tensor4 riemann;
    Tensor4 rbar4;
    Mat ricci;

    Vec b;
    Mat db;
    Tensor3 d2b;
    Vec bup;       // b^i
    Mat d_bup;     // d_k b^i as (i,k)
    double bsq = 0.0;
    Vec d_bsq;

    Mat Db;
    Tensor3 dDb;
    Tensor3 D2b;

    Mat r, s;               // r_ij, s_ij
    Tensor3 dr, ds;         // d_k r_ij, d_k s_ij
    Mat r_mixed, s_mixed;   // r^i_j, s^i_j
    Tensor3 d_s_mixed;      // d_k s^i_j
    Vec r_vec, s_vec;       // r_j = b^i r_ij, s_j = b^i s_ij
    Mat d_s_vec;            // d_k s_j as (j,k)
    Vec r_up, s_up;         // r^i, s^i
    double r_scalar = 0.0;  // r = r_ij b^i b^j

    Tensor3 Dr, Ds;
    Mat D_r_vec, D_s_vec;
    Vec div_s;

    /// Gbar^i = 1/2 Gamma^i_jk y^j y^k.
    std::vector<double> gbar(std::span<const double> y) const;
    /// Rbar^i_k(y) = R^i_jkl y^j y^l as (i,k).
    Mat rbar(std::span<const double> y) const;
    double ricbar(std::span<const double> y) const;
    double alpha(std::span<const double> y) const;
    double beta(std::span<const double> y) const;
};

AlphaBetaBundle build_bundle(const MetricSpec& spec, std::span<const double> x);

/// Basic y-contractions of the r/s tensors.
struct YContractions {
    double alpha = 0.0, beta = 0.0;
    double r00 = 0.0, r0 = 0.0, s0 = 0.0;
    std::vector<double> s_up0;  // s^i_0
};
YContractions contract_y(const AlphaBetaBundle& bundle, std::span<const double> y);

/// Max |b_{j|k|l} - b_{j|l|k} - b^s Rbar_jskl|.
double bianchi_check(const AlphaBetaBundle& bundle);

/// Jet over 2n directions (x directions 0..n-1, y directions n..2n-1) carrying
/// `value` and the x-gradient `dx`. The x-x Hessian block is left at zero and
/// is never read; the x-y and y-y blocks of every product formed from such
/// lifts are exact.
Jet lift(double value, std::span<const double> dx, int n);
Jet lift_constant(double value, int n);
/// y^k seeded in directions n..2n-1.
std::vector<Jet> seed_y(std::span<const double> y, int n);

/// Horizontal and vertical covariant derivatives (w.r.t. alpha's nonlinear
/// connection N^m_j = Gamma^m_jl y^l) of a y-dependent vector field given as
/// 2n-direction jets:
///   horizontal(k,j) = T^k_{|j} = d_j T^k - N^m_j dT^k/dy^m + T^m Gamma^k_mj
///   vertical(k,j)   = T^k_{.j} = dT^k/dy^j
/// trace_horizontal(j) = (T^k_{.k})_{|j}.
struct CovariantDerivatives {
    Mat horizontal;
    Mat vertical;
    Vec trace_horizontal;
};
CovariantDerivatives horizontal_derivative(std::span<const Jet> field, const AlphaBetaBundle& bundle,
                                           std::span<const double> y);

}  // namespace finsler
