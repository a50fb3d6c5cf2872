#include "finsler/riemann.hpp"

#include <cmath>
#include <string>

namespace finsler {

namespace {

// Cholesky-based inverse and determinant of a symmetric positive definite matrix.
void spd_inverse(const Mat& a, Mat& inv, double& det) {
    const int n = a.dim();
    Mat l(n);
    det = 1.0;
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 1e-300)) throw GeometryError("a(x) is not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        det *= d;
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    inv = Mat(n);
    std::vector<double> e(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = (i == c) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= l(i, k) * w[static_cast<std::size_t>(k)];
            w[static_cast<std::size_t>(i)] = s / l(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = w[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < n; ++k) s -= l(k, i) * e[static_cast<std::size_t>(k)];
            e[static_cast<std::size_t>(i)] = s / l(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, c) = e[static_cast<std::size_t>(i)];
    }
    // symmetrize against roundoff
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) inv(i, j) = inv(j, i) = 0.5 * (inv(i, j) + inv(j, i));
}

}  // namespace

AlphaBetaBundle build_bundle(const MetricSpec& spec, std::span<const double> x) {
    const int n = spec.dim;
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("build_bundle: point dimension mismatch");
    for (int k = 0; k < n; ++k) {
        const auto& d = spec.domain[static_cast<std::size_t>(k)];
        const double slack = 1e-12 * std::max(1.0, std::abs(d.hi - d.lo));
        if (x[static_cast<std::size_t>(k)] < d.lo - slack || x[static_cast<std::size_t>(k)] > d.hi + slack)
            throw GeometryError("point outside domain box in coordinate x" + std::to_string(k + 1));
    }

    const MetricJets mj = evaluate_metric(spec, x);
    AlphaBetaBundle B;
    B.n = n;
    B.x.assign(x.begin(), x.end());

    B.a = Mat(n);
    B.dA = Tensor3(n);
    B.d2A = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Jet& e = mj.a[static_cast<std::size_t>(i * n + j)];
            B.a(i, j) = e.value();
            for (int k = 0; k < n; ++k) {
                B.dA(i, j, k) = e.grad(k);
                for (int l = 0; l < n; ++l) B.d2A(i, j, k, l) = e.hess(k, l);
            }
        }
    spd_inverse(B.a, B.a_inv, B.det_a);

    B.d_a_inv = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int m = 0; m < n; ++m)
                    for (int p = 0; p < n; ++p) s += B.a_inv(i, m) * B.dA(m, p, k) * B.a_inv(p, j);
                B.d_a_inv(i, j, k) = -s;
            }

    // Christoffel symbols of the first kind and their derivatives.
    Tensor3 g1(n);   // Gamma_ljk
    Tensor4 dg1(n);  // d_m Gamma_ljk as (l,j,k,m)
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                g1(l, j, k) = 0.5 * (B.dA(l, k, j) + B.dA(l, j, k) - B.dA(j, k, l));
                for (int m = 0; m < n; ++m)
                    dg1(l, j, k, m) = 0.5 * (B.d2A(l, k, j, m) + B.d2A(l, j, k, m) - B.d2A(j, k, l, m));
            }
    B.gamma = Tensor3(n);
    B.dgamma = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double g = 0.0;
                for (int l = 0; l < n; ++l) g += B.a_inv(i, l) * g1(l, j, k);
                B.gamma(i, j, k) = g;
                for (int m = 0; m < n; ++m) {
                    double dg = 0.0;
                    for (int l = 0; l < n; ++l) dg += B.d_a_inv(i, l, m) * g1(l, j, k) + B.a_inv(i, l) * dg1(l, j, k, m);
                    B.dgamma(i, j, k, m) = dg;
                }
            }
    B.d_log_sqrt_det = Vec(n);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += B.gamma(j, j, k);
        B.d_log_sqrt_det(k) = s;
    }

    B.riemann = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = B.dgamma(i, l, j, k) - B.dgamma(i, k, j, l);
                    for (int m = 0; m < n; ++m) v += B.gamma(i, k, m) * B.gamma(m, l, j) - B.gamma(i, l, m) * B.gamma(m, k, j);
                    B.riemann(i, j, k, l) = v;
                }
    B.rbar4 = Tensor4(n);
    for (int j = 0; j < n; ++j)
        for (int s = 0; s < n; ++s)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < n; ++m) v += B.a(s, m) * B.riemann(m, j, k, l);
                    B.rbar4(j, s, k, l) = v;
                }
    B.ricci = Mat(n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double v = 0.0;
            for (int k = 0; k < n; ++k) v += B.riemann(k, j, k, l);
            B.ricci(j, l) = v;
        }

    // beta and its derivatives
    B.b = Vec(n);
    B.db = Mat(n);
    B.d2b = Tensor3(n);
    for (int i = 0; i < n; ++i) {
        const Jet& e = mj.b[static_cast<std::size_t>(i)];
        B.b(i) = e.value();
        for (int j = 0; j < n; ++j) {
            B.db(i, j) = e.grad(j);
            for (int k = 0; k < n; ++k) B.d2b(i, j, k) = e.hess(j, k);
        }
    }
    B.bup = Vec(n);
    B.d_bup = Mat(n);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += B.a_inv(i, j) * B.b(j);
        B.bup(i) = v;
        for (int k = 0; k < n; ++k) {
            double d = 0.0;
            for (int j = 0; j < n; ++j) d += B.d_a_inv(i, j, k) * B.b(j) + B.a_inv(i, j) * B.db(j, k);
            B.d_bup(i, k) = d;
        }
    }
    B.bsq = 0.0;
    for (int i = 0; i < n; ++i) B.bsq += B.bup(i) * B.b(i);
    B.d_bsq = Vec(n);
    for (int k = 0; k < n; ++k) {
        double d = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d += B.d_a_inv(i, j, k) * B.b(i) * B.b(j) + 2.0 * B.a_inv(i, j) * B.b(i) * B.db(j, k);
        B.d_bsq(k) = d;
    }

    B.Db = Mat(n);
    B.dDb = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = B.db(i, j);
            for (int m = 0; m < n; ++m) v -= B.gamma(m, i, j) * B.b(m);
            B.Db(i, j) = v;
            for (int k = 0; k < n; ++k) {
                double d = B.d2b(i, j, k);
                for (int m = 0; m < n; ++m) d -= B.dgamma(m, i, j, k) * B.b(m) + B.gamma(m, i, j) * B.db(m, k);
                B.dDb(i, j, k) = d;
            }
        }
    B.D2b = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = B.dDb(i, j, k);
                for (int m = 0; m < n; ++m) v -= B.gamma(m, i, k) * B.Db(m, j) + B.gamma(m, j, k) * B.Db(i, m);
                B.D2b(i, j, k) = v;
            }

    B.r = Mat(n);
    B.s = Mat(n);
    B.dr = Tensor3(n);
    B.ds = Tensor3(n);
    B.Dr = Tensor3(n);
    B.Ds = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            B.r(i, j) = 0.5 * (B.Db(i, j) + B.Db(j, i));
            B.s(i, j) = 0.5 * (B.Db(i, j) - B.Db(j, i));
            for (int k = 0; k < n; ++k) {
                B.dr(i, j, k) = 0.5 * (B.dDb(i, j, k) + B.dDb(j, i, k));
                B.ds(i, j, k) = 0.5 * (B.dDb(i, j, k) - B.dDb(j, i, k));
                B.Dr(i, j, k) = 0.5 * (B.D2b(i, j, k) + B.D2b(j, i, k));
                B.Ds(i, j, k) = 0.5 * (B.D2b(i, j, k) - B.D2b(j, i, k));
            }
        }

    B.r_mixed = Mat(n);
    B.s_mixed = Mat(n);
    B.d_s_mixed = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double rv = 0.0, sv = 0.0;
            for (int k = 0; k < n; ++k) {
                rv += B.a_inv(i, k) * B.r(k, j);
                sv += B.a_inv(i, k) * B.s(k, j);
            }
            B.r_mixed(i, j) = rv;
            B.s_mixed(i, j) = sv;
            for (int m = 0; m < n; ++m) {
                double d = 0.0;
                for (int k = 0; k < n; ++k) d += B.d_a_inv(i, k, m) * B.s(k, j) + B.a_inv(i, k) * B.ds(k, j, m);
                B.d_s_mixed(i, j, m) = d;
            }
        }

    B.r_vec = Vec(n);
    B.s_vec = Vec(n);
    B.d_s_vec = Mat(n);
    for (int j = 0; j < n; ++j) {
        double rv = 0.0, sv = 0.0;
        for (int i = 0; i < n; ++i) {
            rv += B.bup(i) * B.r(i, j);
            sv += B.bup(i) * B.s(i, j);
        }
        B.r_vec(j) = rv;
        B.s_vec(j) = sv;
        for (int k = 0; k < n; ++k) {
            double d = 0.0;
            for (int i = 0; i < n; ++i) d += B.d_bup(i, k) * B.s(i, j) + B.bup(i) * B.ds(i, j, k);
            B.d_s_vec(j, k) = d;
        }
    }
    B.r_up = Vec(n);
    B.s_up = Vec(n);
    for (int i = 0; i < n; ++i) {
        double rv = 0.0, sv = 0.0;
        for (int j = 0; j < n; ++j) {
            rv += B.a_inv(i, j) * B.r_vec(j);
            sv += B.a_inv(i, j) * B.s_vec(j);
        }
        B.r_up(i) = rv;
        B.s_up(i) = sv;
    }
    B.r_scalar = 0.0;
    for (int j = 0; j < n; ++j) B.r_scalar += B.bup(j) * B.r_vec(j);

    // Covariant derivatives of the contracted fields r_i, s_i and s^k_{i|k}.
    Mat Dbup(n);  // b^j_{|k}
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double v = 0.0;
            for (int m = 0; m < n; ++m) v += B.a_inv(j, m) * B.Db(m, k);
            Dbup(j, k) = v;
        }
    B.D_r_vec = Mat(n);
    B.D_s_vec = Mat(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double rv = 0.0, sv = 0.0;
            for (int j = 0; j < n; ++j) {
                rv += Dbup(j, k) * B.r(j, i) + B.bup(j) * B.Dr(j, i, k);
                sv += Dbup(j, k) * B.s(j, i) + B.bup(j) * B.Ds(j, i, k);
            }
            B.D_r_vec(i, k) = rv;
            B.D_s_vec(i, k) = sv;
        }
    B.div_s = Vec(n);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < n; ++m) v += B.a_inv(k, m) * B.Ds(m, i, k);
        B.div_s(i) = v;
    }
    return B;
}

std::vector<double> AlphaBetaBundle::gbar(std::span<const double> y) const {
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) v += gamma(i, j, k) * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k)];
        g[static_cast<std::size_t>(i)] = 0.5 * v;
    }
    return g;
}

Mat AlphaBetaBundle::rbar(std::span<const double> y) const {
    Mat out(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double v = 0.0;
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) v += riemann(i, j, k, l) * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(l)];
            out(i, k) = v;
        }
    return out;
}

double AlphaBetaBundle::ricbar(std::span<const double> y) const {
    double v = 0.0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) v += ricci(j, l) * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(l)];
    return v;
}

double AlphaBetaBundle::alpha(std::span<const double> y) const {
    double v = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v += a(i, j) * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    return std::sqrt(v);
}

double AlphaBetaBundle::beta(std::span<const double> y) const {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += b(i) * y[static_cast<std::size_t>(i)];
    return v;
}

YContractions contract_y(const AlphaBetaBundle& B, std::span<const double> y) {
    const int n = B.n;
    YContractions c;
    c.alpha = B.alpha(y);
    c.beta = B.beta(y);
    c.s_up0.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        c.r0 += B.r_vec(i) * yi;
        c.s0 += B.s_vec(i) * yi;
        for (int j = 0; j < n; ++j) {
            const double yj = y[static_cast<std::size_t>(j)];
            c.r00 += B.r(i, j) * yi * yj;
            c.s_up0[static_cast<std::size_t>(i)] += B.s_mixed(i, j) * yj;
        }
    }
    return c;
}

double bianchi_check(const AlphaBetaBundle& B) {
    const int n = B.n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double rhs = 0.0;
                for (int s = 0; s < n; ++s) rhs += B.bup(s) * B.rbar4(j, s, k, l);
                worst = std::max(worst, std::abs(B.D2b(j, k, l) - B.D2b(j, l, k) - rhs));
            }
    return worst;
}

Jet lift(double value, std::span<const double> dx, int n) {
    Jet j(value, 2 * n);
    for (int k = 0; k < n; ++k) j.set_grad(k, dx[static_cast<std::size_t>(k)]);
    return j;
}

Jet lift_constant(double value, int n) { return Jet(value, 2 * n); }

std::vector<Jet> seed_y(std::span<const double> y, int n) {
    std::vector<Jet> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out.push_back(Jet::variable(y[static_cast<std::size_t>(k)], n + k, 2 * n));
    return out;
}

CovariantDerivatives horizontal_derivative(std::span<const Jet> T, const AlphaBetaBundle& B,
                                           std::span<const double> y) {
    const int n = B.n;
    Mat N(n);  // N^m_j = Gamma^m_jl y^l
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (int l = 0; l < n; ++l) v += B.gamma(m, j, l) * y[static_cast<std::size_t>(l)];
            N(m, j) = v;
        }
    CovariantDerivatives out{Mat(n), Mat(n), Vec(n)};
    for (int k = 0; k < n; ++k) {
        const Jet& Tk = T[static_cast<std::size_t>(k)];
        for (int j = 0; j < n; ++j) {
            double h = Tk.grad(j);
            for (int m = 0; m < n; ++m) {
                h -= N(m, j) * Tk.grad(n + m);
                h += T[static_cast<std::size_t>(m)].value() * B.gamma(k, m, j);
            }
            out.horizontal(k, j) = h;
            out.vertical(k, j) = Tk.grad(n + j);
        }
    }
    for (int j = 0; j < n; ++j) {
        double dxj = 0.0;
        for (int k = 0; k < n; ++k) dxj += T[static_cast<std::size_t>(k)].hess(j, n + k);
        double corr = 0.0;
        for (int m = 0; m < n; ++m) {
            double dym = 0.0;
            for (int k = 0; k < n; ++k) dym += T[static_cast<std::size_t>(k)].hess(n + m, n + k);
            corr += N(m, j) * dym;
        }
        out.trace_horizontal(j) = dxj - corr;
    }
    return out;
}

}  // namespace finsler
