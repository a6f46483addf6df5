#include <cmath>

#include "doctest.h"
#include "starkres/rng.hpp"
#include "starkres/wellops.hpp"

using namespace starkres;

TEST_SUITE("wellops") {

TEST_CASE("fill and flatten keep zones are exact") {
    PotentialSpec well = make_enveloped_well(0.0, 0.0, 0.0, 50.0, 1.0, 1.0);
    WellSurgerySpec fill;
    fill.region = WellRegion{WellRegion::Shape::Disc, 0.0, 0.0, 1.6, 1.0, 1.0};
    fill.level = 1.2;
    fill.ramp = 0.5;
    fill.mode = SurgeryMode::FillWell;
    TotalPotential uext = make_surgery_potential(well, fill);

    WellSurgerySpec flat = fill;
    flat.mode = SurgeryMode::FlattenExterior;
    TotalPotential uint_ = make_surgery_potential(well, flat);

    // far outside the blend: fill == base exactly, flatten == level exactly
    for (double x : {-4.0, 3.5, 5.0}) {
        for (double y : {-3.0, 0.0, 2.5}) {
            if (std::hypot(x, y) <= 2.1) continue;
            Complex base = eval_total_potential(well, Complex(x, 0.0), y);
            CHECK(uext(Complex(x, 0.0), y) == base);
            CHECK(uint_(Complex(x, 0.0), y) == Complex(1.2, 0.0));
        }
    }
    // at the well bottom: fill == level exactly, flatten == E exactly
    CriticalPoint cp = find_well_bottom(well, 0.0, 0.0);
    REQUIRE(cp.converged);
    CHECK(uext(Complex(cp.x, 0.0), cp.y) == Complex(1.2, 0.0));
    CHECK(uint_(Complex(cp.x, 0.0), cp.y).real() == doctest::Approx(cp.energy).epsilon(1e-15));
}

TEST_CASE("surgery outputs respect their global bounds on a dense grid") {
    PotentialSpec well = make_enveloped_well(0.0, 0.0, 0.0, 50.0, 1.0, 1.0);
    WellSurgerySpec s;
    s.region = WellRegion{WellRegion::Shape::Disc, 0.0, 0.0, 1.6, 1.0, 1.0};
    s.level = 1.2;
    s.ramp = 0.5;
    s.mode = SurgeryMode::FillWell;
    TotalPotential uext = make_surgery_potential(well, s);
    s.mode = SurgeryMode::FlattenExterior;
    TotalPotential uint_ = make_surgery_potential(well, s);
    CriticalPoint cp = find_well_bottom(well, 0.0, 0.0);

    double umin_outside = 1e300;
    for (int i = -40; i <= 40; ++i)
        for (int j = -40; j <= 40; ++j) {
            double x = 0.1 * i, y = 0.1 * j;
            if (std::hypot(x, y) > 2.1)
                umin_outside = std::min(umin_outside,
                                        eval_total_potential(well, x, y));
        }
    double floor_ext = std::min(1.2, umin_outside) - 1e-12;
    double floor_int = std::min(cp.energy, 1.2) - 1e-12;
    for (int i = -40; i <= 40; ++i)
        for (int j = -40; j <= 40; ++j) {
            double x = 0.1 * i, y = 0.1 * j;
            CHECK(uext(Complex(x, 0.0), y).real() >= floor_ext);
            CHECK(uint_(Complex(x, 0.0), y).real() >= floor_int);
        }
}

TEST_CASE("surgery region validation") {
    PotentialSpec well = make_enveloped_well(0.0, 0.0, 0.0, 50.0, 1.0, 1.0);
    WellRegion good{WellRegion::Shape::Disc, 0.0, 0.0, 1.8, 1.0, 1.0};
    CHECK_NOTHROW(validate_surgery_region(well, good, 0.5, 1.0));
    WellRegion bad{WellRegion::Shape::Disc, 0.0, 0.0, 0.8, 1.0, 1.0};  // boundary inside {U <= b}
    CHECK_THROWS(validate_surgery_region(well, bad, 0.5, 1.0));
}

TEST_CASE("surgery blend must stay out of the complex zone") {
    PotentialSpec well = make_enveloped_well(0.0, 0.0, 0.0, 50.0, 1.0, 1.0);
    WellSurgerySpec s;
    s.region = WellRegion{WellRegion::Shape::Disc, 0.0, 0.0, 1.6, 1.0, 1.0};
    s.level = 1.2;
    s.ramp = 0.5;
    s.mode = SurgeryMode::FillWell;
    TotalPotential uext = make_surgery_potential(well, s);
    CHECK_NOTHROW(uext(Complex(5.0, -0.1), 0.0));   // blend is zero there
    CHECK_THROWS(uext(Complex(1.7, -0.1), 0.0));    // inside the blend ramp
}

TEST_CASE("harmonic frequencies: closed forms and identities") {
    double a1, a2;
    harmonic_frequencies(0.0, 1.0, 4.0, a1, a2);
    CHECK(a1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a2 == doctest::Approx(2.0).epsilon(1e-14));

    harmonic_frequencies(1.0, 1.0, 1.0, a1, a2);
    CHECK(a1 == doctest::Approx(0.6180339887).epsilon(1e-9));
    CHECK(a2 == doctest::Approx(1.6180339887).epsilon(1e-9));
    CHECK(a1 * a2 == doctest::Approx(1.0).epsilon(1e-12));

    // frozen from the alpha_j formula evaluated in long double:
    // S = 16, D = sqrt(216)
    harmonic_frequencies(3.0, 2.0, 5.0, a1, a2);
    CHECK(a1 == doctest::Approx(0.8071745631).epsilon(1e-8));
    CHECK(a2 == doctest::Approx(3.9177122327).epsilon(1e-8));
    CHECK(a1 * a2 == doctest::Approx(std::sqrt(10.0)).epsilon(1e-6));

    CHECK_THROWS(harmonic_frequencies(1.0, -1.0, 1.0, a1, a2));
}

TEST_CASE("alpha identities over a random parameter sweep") {
    CounterRng rng(123);
    for (int i = 0; i < 1000; ++i) {
        double B = rng.uniform(i, 0, 0.0, 4.0);
        double l1 = rng.uniform(i, 1, 0.05, 5.0);
        double l2 = rng.uniform(i, 2, 0.05, 5.0);
        double a1, a2;
        harmonic_frequencies(B, l1, l2, a1, a2);
        CHECK(a1 <= a2);
        CHECK(std::abs(a1 * a2 - std::sqrt(l1 * l2)) <= 1e-12 * std::sqrt(l1 * l2));
        double s = B * B + l1 + l2;
        CHECK(std::abs(a1 * a1 + a2 * a2 - s) <= 1e-12 * s);
    }
}

TEST_CASE("alpha monotonicity in B") {
    double prev1 = 1e300, prev2 = -1.0;
    for (double B = 0.0; B <= 3.0; B += 0.1) {
        double a1, a2;
        harmonic_frequencies(B, 1.3, 2.7, a1, a2);
        CHECK(a1 <= prev1 + 1e-14);
        CHECK(a2 >= prev2 - 1e-14);
        prev1 = a1;
        prev2 = a2;
    }
}

TEST_CASE("z-dependence hint") {
    double a1, a2;
    harmonic_frequencies(0.0, 1.0, 4.0, a1, a2);  // ratio 1/2
    CHECK(z_dependence_hint(a1, a2));
    harmonic_frequencies(1.0, 1.0, 1.0, a1, a2);  // golden ratio
    CHECK_FALSE(z_dependence_hint(a1, a2));
}

TEST_CASE("predicted levels enumeration") {
    auto l1 = predicted_levels(0.0, 1.0, 2.0, 0.1, 0.4);
    REQUIRE(l1.size() == 4);
    CHECK(l1[0].value == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(l1[0].k1 == 0);
    CHECK(l1[0].k2 == 0);
    CHECK(l1[1].value == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(l1[1].k1 == 1);
    CHECK(l1[2].value == doctest::Approx(0.35).epsilon(1e-14));
    CHECK(l1[3].value == doctest::Approx(0.35).epsilon(1e-14));
    // the near-0.35 degeneracy holds (0,1) and (2,0); exact ties order by
    // (k1, k2) lexicographic
    bool has01 = (l1[2].k1 == 0 && l1[2].k2 == 1) || (l1[3].k1 == 0 && l1[3].k2 == 1);
    bool has20 = (l1[2].k1 == 2 && l1[2].k2 == 0) || (l1[3].k1 == 2 && l1[3].k2 == 0);
    CHECK(has01);
    CHECK(has20);
    if (l1[2].value == l1[3].value) CHECK(l1[2].k1 < l1[3].k1);

    auto l2 = predicted_levels(0.0, 0.6180339887, 1.6180339887, 0.1, 0.2);
    REQUIRE(l2.size() == 2);
    CHECK(l2[0].value == doctest::Approx(0.1118034).epsilon(1e-7));
    CHECK(l2[1].value == doctest::Approx(0.1736068).epsilon(1e-7));

    CHECK(predicted_levels(0.0, 1.0, 2.0, 0.1, 0.14).empty());
}

TEST_CASE("weyl count prediction") {
    CHECK(weyl_count_prediction(2.0 * M_PI * M_PI, 0.1) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(weyl_count_prediction(0.0, 0.3) == 0.0);

    // lattice-count consistency: #levels below b approaches b^2/(2 sqrt(l1 l2) h^2)
    double a1, a2;
    harmonic_frequencies(1.0, 1.0, 1.0, a1, a2);
    auto ratio_at = [&](double h) {
        double count = static_cast<double>(predicted_levels(0.0, a1, a2, h, 1.0).size());
        return count / (1.0 / (2.0 * h * h));
    };
    // leading-order agreement with a 1 + O(h) remainder
    CHECK(std::abs(ratio_at(0.1) - 1.0) <= 0.1);
    CHECK(std::abs(ratio_at(0.05) - 1.0) <= 0.05);
    CHECK(std::abs(ratio_at(0.02) - 1.0) <= 0.02);
}

}  // TEST_SUITE
