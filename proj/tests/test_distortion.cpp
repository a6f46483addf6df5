#include <cmath>
#include <complex>
#include <cstring>

#include "doctest.h"
#include "starkres/distortion.hpp"

using namespace starkres;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_SUITE("distortion") {

TEST_CASE("cutoff profile plateau, tail and monotone ramp") {
    CutoffProfile chi = build_cutoff(2.0, 1.0);  // plateau |x| <= 3, tail |x| >= 4
    CHECK(chi.value(0.0) == 1.0);
    CHECK(chi.value(3.0) == 1.0);
    CHECK(chi.value(-2.5) == 1.0);
    CHECK(chi.value(4.0) == 0.0);
    CHECK(chi.value(-7.0) == 0.0);
    double mid = chi.value(3.5);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    double prev = 1.0;
    for (double x : linspace(3.0, 4.0, 60)) {
        double v = chi.value(x);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    // derivative by finite differences
    for (double x : {3.2, 3.5, 3.8, -3.3, -3.7}) {
        double step = 1e-6;
        double fd = (chi.value(x + step) - chi.value(x - step)) / (2 * step);
        CHECK(chi.deriv(x) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(chi.deriv(0.0) == 0.0);
    CHECK(chi.deriv(10.0) == 0.0);
}

TEST_CASE("phi_theta closed forms") {
    DistortionParams params;
    params.R0 = 2.0;
    params.ramp_width = 1.0;

    params.theta = Complex(0.0, 0.0);
    for (double x : {-5.0, -2.0, 0.0, 3.5, 6.0}) {
        PhiTheta p = phi_theta(params, 0.1, x);
        CHECK(p.phi == Complex(x, 0.0));
        CHECK(p.dphi == Complex(1.0, 0.0));
    }

    params.theta = Complex(0.0, -0.1);
    for (double x : {-3.0, -1.0, 0.0, 2.9}) {  // plateau |x| <= 3
        PhiTheta p = phi_theta(params, 0.1, x);
        CHECK(p.phi == Complex(x, 0.0));
        CHECK(p.dphi == Complex(1.0, 0.0));
    }
    for (double x : {4.0, 5.5, 8.0}) {  // tail |x| >= 4
        PhiTheta p = phi_theta(params, 0.1, x);
        CHECK(p.phi.real() == x);
        CHECK(p.phi.imag() == doctest::Approx(-0.1).epsilon(1e-15));
        CHECK(p.dphi == Complex(1.0, 0.0));
    }

    // steep ramp with a large theta: phi' may vanish, must be rejected
    DistortionParams bad;
    bad.R0 = 2.0;
    bad.ramp_width = 0.05;
    bad.theta = Complex(0.2, 0.0);
    bool thrown = false;
    for (double x : linspace(3.0, 3.06, 200)) {
        try {
            phi_theta(bad, 0.1, x);
        } catch (const std::invalid_argument&) {
            thrown = true;
            break;
        }
    }
    CHECK(thrown);
}

TEST_CASE("h-log-h mode") {
    DistortionParams params;
    params.mode = ThetaMode::HLogH;
    params.mtilde = 2.0;
    double h = 0.1;
    Complex th = params.theta_at(h);
    CHECK(th.real() == 0.0);
    CHECK(th.imag() == doctest::Approx(-2.0 * h * std::log(1.0 / h)).epsilon(1e-15));
}

TEST_CASE("distorted coefficients: identity at theta = 0, plateau exactness") {
    HamiltonianParams hp{1.0, 0.1};
    PotentialSpec bump = make_gaussian_bump(1.0, 0.0, 0.0, 1.2);
    TotalPotential total = plain_total_potential(bump);
    auto xs = linspace(-6.0, 6.0, 41);
    auto ys = linspace(-3.0, 3.0, 11);
    double dx = xs[1] - xs[0];

    DistortionParams params;
    params.R0 = 2.0;
    params.ramp_width = 1.0;
    params.theta = Complex(0.0, 0.0);
    DistortedCoefficients dc = distorted_coefficients(params, hp, total, xs, dx, ys);
    DistortedCoefficients uc = undistorted_coefficients(hp, total, xs, ys);
    CHECK(dc.identity);
    REQUIRE(dc.w.size() == uc.w.size());
    for (std::size_t i = 0; i < dc.w.size(); ++i) CHECK(dc.w[i] == uc.w[i]);
    for (std::size_t i = 0; i < dc.m.size(); ++i) CHECK(dc.m[i] == uc.m[i]);

    params.theta = Complex(0.0, -0.15);
    DistortedCoefficients dc2 = distorted_coefficients(params, hp, total, xs, dx, ys);
    CHECK_FALSE(dc2.identity);
    for (int i = 0; i < dc2.nx; ++i) {
        if (std::abs(xs[i]) <= 3.0) {  // plateau columns bitwise undistorted
            CHECK(dc2.m[i] == Complex(1.0, 0.0));
            CHECK(dc2.phi[i] == Complex(xs[i], 0.0));
            for (int j = 0; j < dc2.ny; ++j)
                CHECK(dc2.w[j * dc2.nx + i] == uc.w[j * dc2.nx + i]);
        }
    }
}

TEST_CASE("tail columns carry exactly Im theta for V = 0") {
    HamiltonianParams hp{1.0, 0.1};
    TotalPotential total = plain_total_potential(make_zero_potential());
    auto xs = linspace(-8.0, 8.0, 33);
    auto ys = linspace(-2.0, 2.0, 5);
    DistortionParams params;
    params.R0 = 2.0;
    params.ramp_width = 1.0;
    params.theta = Complex(0.0, -0.1);
    DistortedCoefficients dc = distorted_coefficients(params, hp, total, xs, xs[1] - xs[0], ys);
    for (int i = 0; i < dc.nx; ++i) {
        if (std::abs(xs[i]) < 4.0) continue;
        for (int j = 0; j < dc.ny; ++j) {
            Complex w = dc.w[j * dc.nx + i];
            CHECK(w.imag() == doctest::Approx(-0.1).epsilon(1e-15));
            CHECK(w.real() == xs[i]);
        }
    }
}

TEST_CASE("Im W <= 0 everywhere for Im theta < 0 and V = 0") {
    HamiltonianParams hp{1.0, 0.1};
    TotalPotential total = plain_total_potential(make_zero_potential());
    auto xs = linspace(-8.0, 8.0, 201);
    auto ys = linspace(-2.0, 2.0, 5);
    DistortionParams params;
    params.R0 = 2.0;
    params.ramp_width = 1.5;
    params.theta = Complex(0.0, -0.2);
    DistortedCoefficients dc = distorted_coefficients(params, hp, total, xs, xs[1] - xs[0], ys);
    for (int i = 0; i < dc.nx; ++i)
        for (int j = 0; j < dc.ny; ++j) {
            CHECK(dc.w[j * dc.nx + i].imag() <= 0.0);
            if (std::abs(xs[i]) <= 3.0) CHECK(dc.w[j * dc.nx + i].imag() == 0.0);
        }
}

TEST_CASE("tail coefficients are linear in theta") {
    HamiltonianParams hp{1.0, 0.1};
    TotalPotential total = plain_total_potential(make_zero_potential());
    std::vector<double> xs = {6.0, 7.0};
    std::vector<double> ys = {0.0};
    DistortionParams params;
    params.R0 = 2.0;
    params.ramp_width = 1.0;
    Complex thetas[3] = {{0.0, -0.0625}, {0.0, -0.125}, {0.0, -0.1875}};  // binary-exact
    Complex phi[3], m[3], w[3];
    for (int k = 0; k < 3; ++k) {
        params.theta = thetas[k];
        DistortedCoefficients dc = distorted_coefficients(params, hp, total, xs, 1.0, ys);
        phi[k] = dc.phi[0];
        m[k] = dc.m[0];
        w[k] = dc.w[0];
    }
    // second difference vanishes exactly for a linear function of theta
    CHECK(phi[0] - 2.0 * phi[1] + phi[2] == Complex(0.0, 0.0));
    CHECK(w[0] - 2.0 * w[1] + w[2] == Complex(0.0, 0.0));
    CHECK(m[0] - 2.0 * m[1] + m[2] == Complex(0.0, 0.0));  // m == 1 on the tail
}

TEST_CASE("ramp coefficients match an extended-precision evaluation") {
    HamiltonianParams hp{1.0, 0.1};
    PotentialSpec bump = make_gaussian_bump(0.8, 0.0, 0.0, 2.0);
    TotalPotential total = plain_total_potential(bump);
    std::vector<double> xs = {3.4};  // on the ramp for R0 = 2, w = 1
    std::vector<double> ys = {0.7};
    DistortionParams params;
    params.R0 = 2.0;
    params.ramp_width = 1.0;
    params.theta = Complex(0.0, -0.05);
    DistortedCoefficients dc = distorted_coefficients(params, hp, total, xs, 0.1, ys);

    CutoffProfile chi = params.cutoff();
    std::complex<long double> th(0.0L, -0.05L);
    std::complex<long double> phi = 3.4L + th * (1.0L - static_cast<long double>(chi.value(3.4)));
    long double A = 0.8L, s2 = 4.0L, y = 0.7L;
    std::complex<long double> W = phi + A * std::exp(-(phi * phi + y * y) / s2);
    CHECK(dc.w[0].real() == doctest::Approx(static_cast<double>(W.real())).epsilon(1e-14));
    CHECK(dc.w[0].imag() == doctest::Approx(static_cast<double>(W.imag())).epsilon(1e-14));
}

}  // TEST_SUITE
