#include "starkres/wellops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starkres {

namespace {

// 1 on [lo, hi], 0 outside [lo - ramp, hi + ramp]
double interval_blend(double x, double lo, double hi, double ramp) {
    if (x >= lo && x <= hi) return 1.0;
    double d = x < lo ? lo - x : x - hi;
    return 1.0 - smoothstep(d / ramp);
}

}  // namespace

double WellRegion::blend(double x, double y, double ramp) const {
    if (shape == Shape::Disc) {
        double r = std::hypot(x - cx, y - cy);
        if (r <= radius) return 1.0;
        return 1.0 - smoothstep((r - radius) / ramp);
    }
    return interval_blend(x, cx - half_x, cx + half_x, ramp) *
           interval_blend(y, cy - half_y, cy + half_y, ramp);
}

double WellRegion::outer_extent_x(double ramp) const {
    double hw = shape == Shape::Disc ? radius : half_x;
    return std::abs(cx) + hw + ramp;
}

void validate_surgery_region(const PotentialSpec& spec, const WellRegion& region, double ramp,
                             double b, int resolution) {
    auto check = [&](double x, double y) {
        if (eval_total_potential(spec, x, y) <= b)
            throw std::invalid_argument(
                "surgery region boundary reaches {U <= b}: the well sublevel set "
                "is not contained in the region");
    };
    if (region.shape == WellRegion::Shape::Disc) {
        for (int k = 0; k < resolution; ++k) {
            double a = 2.0 * M_PI * k / resolution;
            check(region.cx + region.radius * std::cos(a), region.cy + region.radius * std::sin(a));
            check(region.cx + (region.radius + ramp) * std::cos(a),
                  region.cy + (region.radius + ramp) * std::sin(a));
        }
    } else {
        for (int k = 0; k <= resolution; ++k) {
            double f = static_cast<double>(k) / resolution;
            for (double grow : {0.0, ramp}) {
                double hx = region.half_x + grow, hy = region.half_y + grow;
                double x = region.cx - hx + 2.0 * hx * f;
                double y = region.cy - hy + 2.0 * hy * f;
                check(x, region.cy - hy);
                check(x, region.cy + hy);
                check(region.cx - hx, y);
                check(region.cx + hx, y);
            }
        }
    }
}

TotalPotential make_surgery_potential(const PotentialSpec& spec, const WellSurgerySpec& surgery) {
    WellRegion region = surgery.region;
    double level = surgery.level;
    double ramp = surgery.ramp;
    bool fill = surgery.mode == SurgeryMode::FillWell;
    return [spec, region, level, ramp, fill](Complex x, double y) -> Complex {
        double beta = region.blend(x.real(), y, ramp);
        if (x.imag() != 0.0 && beta != 0.0)
            throw std::domain_error(
                "surgery potential: blend region overlaps the complex-translated zone; "
                "enlarge the distortion plateau");
        Complex base_keep;  // evaluated lazily to keep keep-zones bitwise exact
        if (fill) {
            if (beta >= 1.0) return Complex(level, 0.0);
            base_keep = eval_total_potential(spec, x, y);
            if (beta <= 0.0) return base_keep;
            return beta * level + (1.0 - beta) * base_keep;
        }
        if (beta >= 1.0) return eval_total_potential(spec, x, y);
        if (beta <= 0.0) return Complex(level, 0.0);
        return beta * eval_total_potential(spec, x, y) + (1.0 - beta) * level;
    };
}

void harmonic_frequencies(double B, double lambda1, double lambda2, double& alpha1,
                          double& alpha2) {
    if (lambda1 <= 0.0 || lambda2 <= 0.0)
        throw std::invalid_argument("harmonic_frequencies: curvatures must be positive");
    if (B < 0.0) throw std::invalid_argument("harmonic_frequencies: B must be nonnegative");
    double s = B * B + lambda1 + lambda2;
    double disc = s * s - 4.0 * lambda1 * lambda2;
    double d = disc > 0.0 ? std::sqrt(disc) : 0.0;
    alpha1 = std::sqrt(0.5 * (s - d));
    alpha2 = std::sqrt(0.5 * (s + d));
    if (alpha1 > alpha2) std::swap(alpha1, alpha2);
}

bool z_dependence_hint(double alpha1, double alpha2, int max_den, double tol) {
    // continued fraction convergents of the ratio
    double ratio = alpha1 / alpha2;
    double x = ratio;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        long long a = static_cast<long long>(std::floor(x));
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        if (q2 > 0 && std::abs(ratio - static_cast<double>(p2) / static_cast<double>(q2)) < tol)
            return true;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double frac = x - static_cast<double>(a);
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    return false;
}

HarmonicModel make_harmonic_model(double energy, double B, double lambda1, double lambda2) {
    HarmonicModel m;
    m.energy = energy;
    m.B = B;
    m.lambda1 = lambda1;
    m.lambda2 = lambda2;
    harmonic_frequencies(B, lambda1, lambda2, m.alpha1, m.alpha2);
    m.z_dependent_hint = z_dependence_hint(m.alpha1, m.alpha2);
    return m;
}

std::vector<PredictedLevel> predicted_levels(double energy, double alpha1, double alpha2,
                                             double h, double ceiling) {
    if (h <= 0.0) throw std::invalid_argument("predicted_levels: h must be positive");
    std::vector<PredictedLevel> out;
    for (int k2 = 0;; ++k2) {
        double base = energy + alpha1 * 0.5 * h + alpha2 * (k2 + 0.5) * h;
        if (base > ceiling) break;
        for (int k1 = 0;; ++k1) {
            double v = energy + alpha1 * (k1 + 0.5) * h + alpha2 * (k2 + 0.5) * h;
            if (v > ceiling) break;
            out.push_back({k1, k2, v});
        }
    }
    std::sort(out.begin(), out.end(), [](const PredictedLevel& a, const PredictedLevel& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.k1 != b.k1) return a.k1 < b.k1;
        return a.k2 < b.k2;
    });
    return out;
}

double weyl_count_prediction(double vol, double h) {
    if (vol < 0.0) throw std::invalid_argument("weyl_count_prediction: vol must be nonnegative");
    if (h <= 0.0) throw std::invalid_argument("weyl_count_prediction: h must be positive");
    double w = 2.0 * M_PI * h;
    return vol / (w * w);
}

}  // namespace starkres
