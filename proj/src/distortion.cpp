#include "starkres/distortion.hpp"

#include <cmath>
#include <stdexcept>

namespace starkres {

namespace {
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_deriv(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }
}  // namespace

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double g = bump(t), gc = bump(1.0 - t);
    return g / (g + gc);
}

double smoothstep_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double g = bump(t), gc = bump(1.0 - t);
    double dg = bump_deriv(t), dgc = bump_deriv(1.0 - t);
    double den = g + gc;
    return (dg * gc + g * dgc) / (den * den);
}

double CutoffProfile::value(double x) const {
    return 1.0 - smoothstep((std::abs(x) - inner) / width);
}

double CutoffProfile::deriv(double x) const {
    double t = (std::abs(x) - inner) / width;
    double s = smoothstep_deriv(t) / width;
    return x >= 0.0 ? -s : s;
}

CutoffProfile build_cutoff(double R0, double w) {
    if (R0 <= 0.0 || w <= 0.0) throw std::invalid_argument("build_cutoff: R0, w must be positive");
    return CutoffProfile{R0 + 1.0, w};
}

Complex DistortionParams::theta_at(double h) const {
    if (mode == ThetaMode::Fixed) return theta;
    if (!(h > 0.0 && h < 1.0))
        throw std::invalid_argument("DistortionParams: h-log-h mode needs 0 < h < 1");
    return Complex(0.0, -mtilde * h * std::log(1.0 / h));
}

PhiTheta phi_theta(const DistortionParams& params, double h, double x) {
    CutoffProfile chi = params.cutoff();
    Complex th = params.theta_at(h);
    double c = chi.value(x);
    double dc = chi.deriv(x);
    if (std::abs(th * dc) >= 1.0)
        throw std::invalid_argument("phi_theta: |theta * chi0'| >= 1, phi' would vanish");
    return PhiTheta{x + th * (1.0 - c), 1.0 - th * dc};
}

TotalPotential plain_total_potential(const PotentialSpec& spec) {
    return [spec](Complex x, double y) { return eval_total_potential(spec, x, y); };
}

DistortedCoefficients distorted_coefficients(const DistortionParams& params,
                                             const HamiltonianParams& hp,
                                             const TotalPotential& total,
                                             const std::vector<double>& xs, double dx,
                                             const std::vector<double>& ys) {
    DistortedCoefficients c;
    c.nx = static_cast<int>(xs.size());
    c.ny = static_cast<int>(ys.size());
    Complex th = params.theta_at(hp.h);
    c.identity = (th == Complex(0.0, 0.0));

    c.m.resize(c.nx);
    c.phi.resize(c.nx);
    c.m_half.resize(c.nx + 1);
    for (int i = 0; i < c.nx; ++i) {
        PhiTheta p = phi_theta(params, hp.h, xs[i]);
        // on the plateau theta*(1 - chi0) is exactly zero, so phi == x and
        // dphi == 1 bitwise and the column stays identical to the
        // undistorted operator
        c.phi[i] = p.phi;
        c.m[i] = (p.dphi == Complex(1.0, 0.0)) ? Complex(1.0, 0.0) : 1.0 / p.dphi;
    }
    for (int k = 0; k <= c.nx; ++k) {
        double xm = xs.empty() ? 0.0 : xs[0] + (k - 0.5) * dx;
        PhiTheta p = phi_theta(params, hp.h, xm);
        c.m_half[k] = (p.dphi == Complex(1.0, 0.0)) ? Complex(1.0, 0.0) : 1.0 / p.dphi;
    }

    c.w.resize(static_cast<std::size_t>(c.nx) * c.ny);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i)
            c.w[static_cast<std::size_t>(j) * c.nx + i] = total(c.phi[i], ys[j]);

    c.by.resize(c.ny);
    for (int j = 0; j < c.ny; ++j) c.by[j] = hp.B * ys[j];
    return c;
}

DistortedCoefficients undistorted_coefficients(const HamiltonianParams& hp,
                                               const TotalPotential& total,
                                               const std::vector<double>& xs,
                                               const std::vector<double>& ys) {
    DistortedCoefficients c;
    c.nx = static_cast<int>(xs.size());
    c.ny = static_cast<int>(ys.size());
    c.identity = true;
    c.m.assign(c.nx, Complex(1.0, 0.0));
    c.m_half.assign(c.nx + 1, Complex(1.0, 0.0));
    c.phi.resize(c.nx);
    for (int i = 0; i < c.nx; ++i) c.phi[i] = Complex(xs[i], 0.0);
    c.w.resize(static_cast<std::size_t>(c.nx) * c.ny);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i)
            c.w[static_cast<std::size_t>(j) * c.nx + i] = total(Complex(xs[i], 0.0), ys[j]);
    c.by.resize(c.ny);
    for (int j = 0; j < c.ny; ++j) c.by[j] = hp.B * ys[j];
    return c;
}

}  // namespace starkres
