#ifndef STARKRES_POTENTIAL_HPP
#define STARKRES_POTENTIAL_HPP

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace starkres {

using Complex = std::complex<double>;

// Magnetic field strength and semiclassical parameter of the Hamiltonian
// P = (1/2)(hD_x + By)^2 + (1/2)(hD_y)^2 + x + V(x,y).
struct HamiltonianParams {
    double B = 1.0;
    double h = 0.1;
};

enum class TermKind { Zero, GaussianBump, EnvelopedQuadraticWell };

// One additive term of the scalar potential V.  Every built-in family is
// entire in x and Gaussian-localized, so V admits the complex-x evaluation
// needed by the exterior translation with unrestricted |Im x|.
struct PotentialTerm {
    TermKind kind = TermKind::Zero;
    double amplitude = 0.0;   // bump height A, or constant offset c of the well
    double x0 = 0.0;
    double y0 = 0.0;
    double sigma = 1.0;       // GaussianBump width
    double envelope_scale = 1.0;  // EnvelopedQuadraticWell scale L
    double lambda1 = 1.0;     // designed curvatures of the enveloped well
    double lambda2 = 1.0;
};

struct GradHess {
    double ux = 0.0, uy = 0.0;            // gradient of U = x + V
    double uxx = 0.0, uxy = 0.0, uyy = 0.0;  // Hessian of U (symmetric)
};

struct PotentialSpec {
    std::vector<PotentialTerm> terms;  // empty list means V == 0

    // Half-width of the analyticity strip in Im x.  The built-in families are
    // entire in x, recorded as +infinity; DistortionParams bounds |Im theta|.
    double strip_half_width() const { return std::numeric_limits<double>::infinity(); }

    Complex v_complex(Complex x, double y) const;
    double v_real(double x, double y) const;
};

PotentialSpec make_zero_potential();
PotentialSpec make_gaussian_bump(double A, double x0, double y0, double sigma);
// (c + lambda1/2 xt^2 + lambda2/2 yt^2 - xt) * exp(-(xt^2+yt^2)/L^2),
// xt = x - x0, yt = y - y0; U = x + V then has a nondegenerate minimum near
// (x0, y0) with Hess V -> diag(lambda1, lambda2) as L -> infinity.
PotentialSpec make_enveloped_well(double c, double x0, double y0, double L,
                                  double lambda1, double lambda2);

// U(x,y) = x + V(x,y); rejects |Im x| >= strip half-width.
Complex eval_total_potential(const PotentialSpec& spec, Complex x, double y);
double eval_total_potential(const PotentialSpec& spec, double x, double y);

// Analytic gradient and Hessian of U at a real point.
GradHess grad_hess(const PotentialSpec& spec, double x, double y);

struct CriticalPoint {
    double x = 0.0, y = 0.0;
    double energy = 0.0;                  // U at the point
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;  // Hess V = Hess U (Stark term is linear)
    double lambda1 = 0.0, lambda2 = 0.0;  // sorted lambda1 <= lambda2
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool nondegenerate = false;  // both Hessian eigenvalues positive
};

// Newton iteration on grad U from the given seed.
CriticalPoint find_well_bottom(const PotentialSpec& spec, double seed_x, double seed_y,
                               double tol = 1e-12, int max_iter = 50);

struct ClassicalState {
    double x = 0.0, y = 0.0, xi = 0.0, eta = 0.0;
};

// p = (1/2)(xi + B y)^2 + (1/2)eta^2 + x + V(x,y)
double eval_symbol(const HamiltonianParams& params, const PotentialSpec& spec,
                   const ClassicalState& state);

// Eigenvalues of a symmetric 2x2 [[a, b], [b, c]], ascending.
void symmetric_eigenvalues_2x2(double a, double b, double c, double& lo, double& hi);

}  // namespace starkres

#endif
