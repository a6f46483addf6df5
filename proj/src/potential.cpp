#include "starkres/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace starkres {

namespace {

template <typename Scalar>
Scalar term_value(const PotentialTerm& t, Scalar x, double y) {
    switch (t.kind) {
        case TermKind::Zero:
            return Scalar(0);
        case TermKind::GaussianBump: {
            Scalar xt = x - t.x0;
            double yt = y - t.y0;
            Scalar q = (xt * xt + yt * yt) / (t.sigma * t.sigma);
            return t.amplitude * std::exp(-q);
        }
        case TermKind::EnvelopedQuadraticWell: {
            Scalar xt = x - t.x0;
            double yt = y - t.y0;
            double L2 = t.envelope_scale * t.envelope_scale;
            Scalar poly = t.amplitude + 0.5 * t.lambda1 * xt * xt
                          + 0.5 * t.lambda2 * yt * yt - xt;
            return poly * std::exp(-(xt * xt + yt * yt) / L2);
        }
    }
    return Scalar(0);
}

// value, gradient and Hessian of one term at a real point
void term_derivatives(const PotentialTerm& t, double x, double y,
                      double& vx, double& vy, double& vxx, double& vxy, double& vyy) {
    switch (t.kind) {
        case TermKind::Zero:
            vx = vy = vxx = vxy = vyy = 0.0;
            return;
        case TermKind::GaussianBump: {
            double xt = x - t.x0, yt = y - t.y0;
            double s2 = t.sigma * t.sigma;
            double g = t.amplitude * std::exp(-(xt * xt + yt * yt) / s2);
            vx = -2.0 * xt / s2 * g;
            vy = -2.0 * yt / s2 * g;
            vxx = (4.0 * xt * xt / (s2 * s2) - 2.0 / s2) * g;
            vyy = (4.0 * yt * yt / (s2 * s2) - 2.0 / s2) * g;
            vxy = 4.0 * xt * yt / (s2 * s2) * g;
            return;
        }
        case TermKind::EnvelopedQuadraticWell: {
            double xt = x - t.x0, yt = y - t.y0;
            double L2 = t.envelope_scale * t.envelope_scale;
            double g = std::exp(-(xt * xt + yt * yt) / L2);
            double gx = -2.0 * xt / L2 * g;
            double gy = -2.0 * yt / L2 * g;
            double gxx = (4.0 * xt * xt / (L2 * L2) - 2.0 / L2) * g;
            double gyy = (4.0 * yt * yt / (L2 * L2) - 2.0 / L2) * g;
            double gxy = 4.0 * xt * yt / (L2 * L2) * g;
            double p = t.amplitude + 0.5 * t.lambda1 * xt * xt + 0.5 * t.lambda2 * yt * yt - xt;
            double px = t.lambda1 * xt - 1.0;
            double py = t.lambda2 * yt;
            vx = px * g + p * gx;
            vy = py * g + p * gy;
            vxx = t.lambda1 * g + 2.0 * px * gx + p * gxx;
            vyy = t.lambda2 * g + 2.0 * py * gy + p * gyy;
            vxy = px * gy + py * gx + p * gxy;
            return;
        }
    }
}

}  // namespace

Complex PotentialSpec::v_complex(Complex x, double y) const {
    Complex v(0.0, 0.0);
    for (const auto& t : terms) v += term_value<Complex>(t, x, y);
    return v;
}

double PotentialSpec::v_real(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms) v += term_value<double>(t, x, y);
    return v;
}

PotentialSpec make_zero_potential() { return PotentialSpec{}; }

PotentialSpec make_gaussian_bump(double A, double x0, double y0, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("GaussianBump: sigma must be positive");
    PotentialTerm t;
    t.kind = TermKind::GaussianBump;
    t.amplitude = A;
    t.x0 = x0;
    t.y0 = y0;
    t.sigma = sigma;
    return PotentialSpec{{t}};
}

PotentialSpec make_enveloped_well(double c, double x0, double y0, double L,
                                  double lambda1, double lambda2) {
    if (L <= 0.0) throw std::invalid_argument("EnvelopedQuadraticWell: L must be positive");
    if (lambda1 <= 0.0 || lambda2 <= 0.0)
        throw std::invalid_argument("EnvelopedQuadraticWell: curvatures must be positive");
    PotentialTerm t;
    t.kind = TermKind::EnvelopedQuadraticWell;
    t.amplitude = c;
    t.x0 = x0;
    t.y0 = y0;
    t.envelope_scale = L;
    t.lambda1 = lambda1;
    t.lambda2 = lambda2;
    return PotentialSpec{{t}};
}

Complex eval_total_potential(const PotentialSpec& spec, Complex x, double y) {
    if (std::abs(x.imag()) > 0.0 && std::abs(x.imag()) >= spec.strip_half_width())
        throw std::domain_error("eval_total_potential: |Im x| outside analyticity strip");
    if (x.imag() == 0.0)  // keep real evaluation bit-identical to the real path
        return Complex(eval_total_potential(spec, x.real(), y), 0.0);
    return x + spec.v_complex(x, y);
}

double eval_total_potential(const PotentialSpec& spec, double x, double y) {
    return x + spec.v_real(x, y);
}

GradHess grad_hess(const PotentialSpec& spec, double x, double y) {
    GradHess g;
    g.ux = 1.0;  // Stark term
    for (const auto& t : spec.terms) {
        double vx, vy, vxx, vxy, vyy;
        term_derivatives(t, x, y, vx, vy, vxx, vxy, vyy);
        g.ux += vx;
        g.uy += vy;
        g.uxx += vxx;
        g.uxy += vxy;
        g.uyy += vyy;
    }
    return g;
}

void symmetric_eigenvalues_2x2(double a, double b, double c, double& lo, double& hi) {
    double m = 0.5 * (a + c);
    double r = std::hypot(0.5 * (a - c), b);
    lo = m - r;
    hi = m + r;
}

CriticalPoint find_well_bottom(const PotentialSpec& spec, double seed_x, double seed_y,
                               double tol, int max_iter) {
    CriticalPoint cp;
    double x = seed_x, y = seed_y;
    for (int it = 0; it <= max_iter; ++it) {
        GradHess g = grad_hess(spec, x, y);
        double gn = std::hypot(g.ux, g.uy);
        cp.iterations = it;
        if (gn <= tol) {
            cp.converged = true;
            cp.grad_norm = gn;
            break;
        }
        double det = g.uxx * g.uyy - g.uxy * g.uxy;
        if (!(std::abs(det) > 1e-300)) break;  // singular Hessian, no step
        double dx = (g.uy * g.uxy - g.ux * g.uyy) / det;
        double dy = (g.ux * g.uxy - g.uy * g.uxx) / det;
        x += dx;
        y += dy;
        if (!std::isfinite(x) || !std::isfinite(y)) break;
        cp.grad_norm = gn;
    }
    cp.x = x;
    cp.y = y;
    cp.energy = eval_total_potential(spec, x, y);
    GradHess g = grad_hess(spec, x, y);
    cp.grad_norm = std::hypot(g.ux, g.uy);
    cp.hxx = g.uxx;
    cp.hxy = g.uxy;
    cp.hyy = g.uyy;
    symmetric_eigenvalues_2x2(cp.hxx, cp.hxy, cp.hyy, cp.lambda1, cp.lambda2);
    cp.converged = cp.converged && cp.grad_norm <= tol;
    cp.nondegenerate = cp.converged && cp.lambda1 > 0.0 && cp.lambda2 > 0.0;
    return cp;
}

double eval_symbol(const HamiltonianParams& params, const PotentialSpec& spec,
                   const ClassicalState& s) {
    double kin = s.xi + params.B * s.y;
    return 0.5 * kin * kin + 0.5 * s.eta * s.eta + eval_total_potential(spec, s.x, s.y);
}

}  // namespace starkres
