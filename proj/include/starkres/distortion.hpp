#ifndef STARKRES_DISTORTION_HPP
#define STARKRES_DISTORTION_HPP

#include <functional>
#include <vector>

#include "starkres/potential.hpp"

namespace starkres {

// C-infinity ramp built from the standard exp(-1/t) bump: 0 for t <= 0,
// 1 for t >= 1, strictly increasing in between.
double smoothstep(double t);
double smoothstep_deriv(double t);

// chi0(x) = 1 for |x| <= R0 + 1, 0 for |x| >= R0 + 1 + w.  One variable only:
// it equals 1 on the disc of radius R0 + 1, and the coordinate change stays
// diagonal so assembly stays banded.
struct CutoffProfile {
    double inner = 0.0;  // R0 + 1
    double width = 1.0;  // w

    double value(double x) const;
    double deriv(double x) const;
};

enum class ThetaMode { Fixed, HLogH };

struct DistortionParams {
    double R0 = 2.0;
    double ramp_width = 1.0;
    Complex theta{0.0, 0.0};  // used directly in Fixed mode
    ThetaMode mode = ThetaMode::Fixed;
    double mtilde = 1.0;  // HLogH mode: theta = -i * mtilde * h * log(1/h)

    CutoffProfile cutoff() const { return CutoffProfile{R0 + 1.0, ramp_width}; }
    Complex theta_at(double h) const;
};

CutoffProfile build_cutoff(double R0, double w);

struct PhiTheta {
    Complex phi;       // x + theta (1 - chi0(x))
    Complex dphi;      // 1 - theta chi0'(x)
};

// Throws when |theta chi0'(x)| >= 1 (phi' would vanish).
PhiTheta phi_theta(const DistortionParams& params, double h, double x);

// Total scalar potential U(x, y) in total-potential form; complex x is the
// analytic continuation used under the exterior translation.
using TotalPotential = std::function<Complex(Complex, double)>;

TotalPotential plain_total_potential(const PotentialSpec& spec);

// Coefficient fields of Q_theta = 1/2 (h m(x) D_x + By)^2 + 1/2 (h D_y)^2
// + W_theta with m = 1/phi' and W_theta(x,y) = U(phi(x), y).  The Jacobian
// half-power of the paper's unitary is dropped: Q_theta is similar to the
// distorted operator through a bounded multiplication, so the point spectrum
// is unchanged.
struct DistortedCoefficients {
    int nx = 0, ny = 0;
    std::vector<Complex> m;       // nx values, 1/phi'(x_i)
    std::vector<Complex> m_half;  // nx + 1 midpoint values 1/phi'(x_i +- dx/2)
    std::vector<Complex> phi;     // nx values
    std::vector<Complex> w;       // nx*ny values W(x_i, y_j), row-major i + nx*j
    std::vector<double> by;       // ny values B*y_j
    bool identity = true;         // theta == 0: coefficients are exactly undistorted
};

DistortedCoefficients distorted_coefficients(const DistortionParams& params,
                                             const HamiltonianParams& hp,
                                             const TotalPotential& total,
                                             const std::vector<double>& xs, double dx,
                                             const std::vector<double>& ys);

// Undistorted coefficients (m = 1, phi = x) for P and P^int assembly.
DistortedCoefficients undistorted_coefficients(const HamiltonianParams& hp,
                                               const TotalPotential& total,
                                               const std::vector<double>& xs,
                                               const std::vector<double>& ys);

}  // namespace starkres

#endif
