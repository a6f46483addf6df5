#ifndef STARKRES_WELLOPS_HPP
#define STARKRES_WELLOPS_HPP

#include <vector>

#include "starkres/distortion.hpp"
#include "starkres/potential.hpp"

namespace starkres {

struct WellRegion {
    enum class Shape { Disc, Rectangle };
    Shape shape = Shape::Disc;
    double cx = 0.0, cy = 0.0;
    double radius = 1.0;            // Disc
    double half_x = 1.0, half_y = 1.0;  // Rectangle half-widths

    // ramp weight: 1 on the core, 0 at distance >= ramp outside it
    double blend(double x, double y, double ramp) const;
    double outer_extent_x(double ramp) const;  // |x - cx| beyond which blend == 0
};

enum class SurgeryMode { FillWell, FlattenExterior };

struct WellSurgerySpec {
    WellRegion region;
    double level = 0.0;  // fill/flatten level, b + 2*delta
    double ramp = 0.5;
    SurgeryMode mode = SurgeryMode::FillWell;
};

// Verifies that {U <= b} does not touch the region boundary circles
// (inner core and outer core+ramp), at the given angular/edge resolution.
void validate_surgery_region(const PotentialSpec& spec, const WellRegion& region, double ramp,
                             double b, int resolution = 256);

// FillWell:        U^ext = level on the core, = U outside the blend.
// FlattenExterior: U^int = U on the core, = level outside the blend.
// Keep zones return the base values exactly (bitwise).
TotalPotential make_surgery_potential(const PotentialSpec& spec, const WellSurgerySpec& surgery);

struct HarmonicModel {
    double energy = 0.0;  // bottom energy E
    double B = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
    bool z_dependent_hint = false;  // continued-fraction test of alpha1/alpha2
};

// alpha_j = sqrt((B^2 + l1 + l2 + (-1)^j sqrt((B^2 + l1 + l2)^2 - 4 l1 l2)) / 2),
// sorted ascending.  Identities: a1*a2 = sqrt(l1*l2), a1^2 + a2^2 = B^2 + l1 + l2.
void harmonic_frequencies(double B, double lambda1, double lambda2, double& alpha1,
                          double& alpha2);

HarmonicModel make_harmonic_model(double energy, double B, double lambda1, double lambda2);

// Rational-approximation test of alpha1/alpha2 up to denominator 50.
bool z_dependence_hint(double alpha1, double alpha2, int max_den = 50, double tol = 1e-9);

struct PredictedLevel {
    int k1 = 0, k2 = 0;
    double value = 0.0;
};

// E + alpha1 (k1 + 1/2) h + alpha2 (k2 + 1/2) h up to the ceiling, sorted
// ascending, ties ordered by (k1, k2) lexicographic.
std::vector<PredictedLevel> predicted_levels(double energy, double alpha1, double alpha2,
                                             double h, double ceiling);

// vol / (2 pi h)^2
double weyl_count_prediction(double vol, double h);

}  // namespace starkres

#endif
