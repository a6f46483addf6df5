#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "starkres/arnoldi.hpp"
#include "starkres/banded.hpp"
#include "starkres/dense_eig.hpp"
#include "starkres/matching.hpp"
#include "starkres/rng.hpp"
#include "starkres/wellops.hpp"

using namespace starkres;

namespace {

ComplexSparseMatrix from_dense(const std::vector<Complex>& d, int n, int bw,
                               SymmetryTag tag = SymmetryTag::None) {
    ComplexSparseMatrix a;
    a.n = n;
    a.bandwidth = bw;
    a.tag = tag;
    a.row_ptr.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        a.row_ptr[i + 1] = a.row_ptr[i];
        for (int j = 0; j < n; ++j) {
            Complex v = d[static_cast<std::size_t>(i) * n + j];
            if (v != Complex(0, 0) || i == j) {
                a.cols.push_back(j);
                a.vals.push_back(v);
                ++a.row_ptr[i + 1];
            }
        }
    }
    return a;
}

std::vector<Complex> random_banded_dense(int n, int bw, std::uint64_t seed, bool hermitian) {
    CounterRng rng(seed);
    std::vector<Complex> d(static_cast<std::size_t>(n) * n, Complex(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j) {
            std::uint64_t c = static_cast<std::uint64_t>(i) * n + j;
            d[static_cast<std::size_t>(i) * n + j] =
                Complex(rng.uniform(c, 0, -1, 1), rng.uniform(c, 1, -1, 1));
        }
    if (hermitian) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j)
                d[static_cast<std::size_t>(i) * n + j] =
                    std::conj(d[static_cast<std::size_t>(j) * n + i]);
            d[static_cast<std::size_t>(i) * n + i] =
                Complex(d[static_cast<std::size_t>(i) * n + i].real(), 0.0);
        }
    }
    return d;
}

ComplexSparseMatrix small_reference_operator(int n, double h, double B) {
    PotentialSpec well = make_enveloped_well(0.0, 0.0, 0.0, 50.0, 1.0, 1.0);
    WellSurgerySpec s;
    s.region = WellRegion{WellRegion::Shape::Disc, 0.0, 0.0, 1.8, 1.0, 1.0};
    s.level = 1.4;
    s.ramp = 0.5;
    s.mode = SurgeryMode::FlattenExterior;
    Grid2D g = make_grid(-2.8, 2.8, -2.8, 2.8, n, n);
    HamiltonianParams hp{B, h};
    auto coeffs = undistorted_coefficients(hp, make_surgery_potential(well, s), g.xs(), g.ys());
    return assemble_operator(OperatorKind::SelfAdjoint, g, hp, coeffs);
}

ComplexSparseMatrix small_distorted_operator(int nx, int ny, double h, double B) {
    PotentialSpec well = make_enveloped_well(0.0, 0.0, 0.0, 6.0, 1.0, 1.0);
    Grid2D g = make_grid(-5.2, 5.2, -3.0, 3.0, nx, ny);
    HamiltonianParams hp{B, h};
    DistortionParams dp;
    dp.R0 = 1.5;
    dp.ramp_width = 0.7;
    dp.theta = Complex(0.0, -0.2);
    auto dc = distorted_coefficients(dp, hp, plain_total_potential(well), g.xs(), g.dx, g.ys());
    return assemble_operator(OperatorKind::Distorted, g, hp, dc);
}

}  // namespace

TEST_SUITE("eig") {

TEST_CASE("dense solver on small closed-form spectra") {
    {
        std::vector<Complex> d = {Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(3, 0)};
        DenseEigResult r = dense_eigs(d, 2);
        REQUIRE(r.converged);
        std::vector<double> re = {r.values[0].real(), r.values[1].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(re[1] == doctest::Approx(3.0).epsilon(1e-14));
    }
    {
        // [[0, 1], [-1, 0]] has eigenvalues +-i
        std::vector<Complex> d = {Complex(0, 0), Complex(1, 0), Complex(-1, 0), Complex(0, 0)};
        DenseEigResult r = dense_eigs(d, 2);
        std::vector<double> im = {r.values[0].imag(), r.values[1].imag()};
        std::sort(im.begin(), im.end());
        CHECK(im[0] == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(im[1] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(r.values[0].real()) <= 1e-13);
    }
}

TEST_CASE("dense solver trace identity and residuals on random matrices") {
    for (int trial = 0; trial < 5; ++trial) {
        int n = 20;
        auto d = random_banded_dense(n, n, 1000 + trial, false);
        DenseEigResult r = dense_eigs(d, n);
        REQUIRE(r.converged);
        Complex tr(0, 0), sum(0, 0);
        for (int i = 0; i < n; ++i) tr += d[static_cast<std::size_t>(i) * n + i];
        for (auto& v : r.values) sum += v;
        CHECK(std::abs(sum - tr) <= 1e-10 * (1.0 + std::abs(tr)));
        for (double resid : r.residuals) CHECK(resid <= 1e-10);
    }
}

TEST_CASE("dense solver on a Hermitian matrix gives a real spectrum") {
    int n = 30;
    auto d = random_banded_dense(n, 4, 77, true);
    DenseEigResult r = dense_eigs(d, n);
    for (auto& v : r.values) CHECK(std::abs(v.imag()) <= 1e-12);
}

TEST_CASE("banded LU solves against known solutions") {
    {
        std::vector<Complex> d(9, Complex(0, 0));
        for (int i = 0; i < 3; ++i) d[i * 3 + i] = 1.0;
        ComplexSparseMatrix a = from_dense(d, 3, 0);
        BandedLU lu(a, Complex(0, 0));
        std::vector<Complex> b = {1.0, 2.0, 3.0};
        auto x = lu.solve(b);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) <= 1e-15);
    }
    {
        // Toeplitz(-1, 2, -1), size 10: solve A x = b with known x
        int n = 10;
        std::vector<Complex> d(static_cast<std::size_t>(n) * n, Complex(0, 0));
        for (int i = 0; i < n; ++i) {
            d[static_cast<std::size_t>(i) * n + i] = 2.0;
            if (i > 0) d[static_cast<std::size_t>(i) * n + i - 1] = -1.0;
            if (i < n - 1) d[static_cast<std::size_t>(i) * n + i + 1] = -1.0;
        }
        ComplexSparseMatrix a = from_dense(d, n, 1);
        CounterRng rng(5);
        std::vector<Complex> xref(n);
        for (int i = 0; i < n; ++i)
            xref[i] = Complex(rng.uniform(i, 0, -1, 1), rng.uniform(i, 1, -1, 1));
        auto b = apply_operator(a, xref);
        BandedLU lu(a, Complex(0, 0));
        auto x = lu.solve(b);
        for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xref[i]) <= 1e-12);

        // adjoint solve
        auto xa = lu.solve_adjoint(b);
        // verify A^H xa = b by explicit application of the conjugate transpose
        for (int i = 0; i < n; ++i) {
            Complex acc(0, 0);
            for (int j = 0; j < n; ++j)
                acc += std::conj(d[static_cast<std::size_t>(j) * n + i]) * xa[j];
            CHECK(std::abs(acc - b[i]) <= 1e-12);
        }
    }
}

TEST_CASE("banded LU flags a shift equal to an eigenvalue") {
    std::vector<Complex> d(16, Complex(0, 0));
    double evs[4] = {1.0, 2.5, -0.5, 4.0};
    for (int i = 0; i < 4; ++i) d[i * 4 + i] = evs[i];
    ComplexSparseMatrix a = from_dense(d, 4, 0);
    BandedLU lu(a, Complex(2.5, 0.0));
    CHECK(lu.singular());
    ArnoldiOptions opts;
    opts.k = 1;
    CHECK_THROWS(shift_invert_arnoldi(a, Complex(2.5, 0.0), opts));
}

TEST_CASE("banded inertia counts eigenvalues below a shift") {
    int n = 40;
    auto d = random_banded_dense(n, 3, 4242, true);
    ComplexSparseMatrix a = from_dense(d, n, 3, SymmetryTag::HermitianExpected);
    DenseEigResult r = dense_eigs(d, n, false);
    std::vector<double> evs;
    for (auto& v : r.values) evs.push_back(v.real());
    std::sort(evs.begin(), evs.end());
    for (double shift : {-2.0, -0.5, 0.0, 0.7, 2.5}) {
        int expect = static_cast<int>(std::count_if(evs.begin(), evs.end(),
                                                    [&](double e) { return e < shift; }));
        InertiaResult res = banded_inertia(a, shift);
        CHECK(res.negative == expect);
    }
    int inwin = count_eigenvalues_in_window(a, -0.5, 0.7);
    int expect = static_cast<int>(std::count_if(
        evs.begin(), evs.end(), [&](double e) { return e > -0.5 && e <= 0.7; }));
    CHECK(inwin == expect);
}

TEST_CASE("inertia window count on an assembled reference operator") {
    ComplexSparseMatrix a = small_reference_operator(20, 0.4, 1.0);
    DenseEigResult r = dense_eigs(a, false);
    int expect = 0;
    for (auto& v : r.values)
        if (v.real() > 0.0 && v.real() <= 1.0) ++expect;
    CHECK(count_eigenvalues_in_window(a, 0.0, 1.0) == expect);
}

TEST_CASE("shift-invert Arnoldi on a diagonal matrix") {
    std::vector<Complex> d(9, Complex(0, 0));
    d[0] = 1.0;
    d[4] = 2.0;
    d[8] = 10.0;
    ComplexSparseMatrix a = from_dense(d, 3, 0);
    ArnoldiOptions opts;
    opts.k = 2;
    auto pairs = shift_invert_arnoldi(a, Complex(1.4, 0.0), opts);
    REQUIRE(pairs.size() == 2);
    std::vector<double> got = {pairs[0].value.real(), pairs[1].value.real()};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Arnoldi matches the dense oracle on assembled operators") {
    {
        ComplexSparseMatrix a = small_reference_operator(16, 0.5, 1.0);
        DenseEigResult dr = dense_eigs(a, false);
        Complex shift(0.6, 0.0);
        ArnoldiOptions opts;
        opts.k = 5;
        auto pairs = shift_invert_arnoldi(a, shift, opts);
        REQUIRE(pairs.size() == 5);
        std::vector<Complex> dvals = dr.values;
        std::sort(dvals.begin(), dvals.end(), [&](Complex p, Complex q) {
            return std::abs(p - shift) < std::abs(q - shift);
        });
        for (int i = 0; i < 5; ++i)
            CHECK(std::abs(pairs[i].value - dvals[i]) <= 1e-10 * (1.0 + std::abs(dvals[i])));
    }
    {
        ComplexSparseMatrix a = small_distorted_operator(24, 14, 0.5, 1.0);
        DenseEigResult dr = dense_eigs(a, false);
        // shift near the expected bottom level of the well
        Complex shift(0.5, 0.0);
        ArnoldiOptions opts;
        opts.k = 3;
        auto pairs = shift_invert_arnoldi(a, shift, opts);
        REQUIRE(pairs.size() == 3);
        std::vector<Complex> dvals = dr.values;
        std::sort(dvals.begin(), dvals.end(), [&](Complex p, Complex q) {
            return std::abs(p - shift) < std::abs(q - shift);
        });
        double anorm = a.norm1();
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(pairs[i].value - dvals[i]) <= 10.0 * 1e-10 * anorm);
    }
}

TEST_CASE("Arnoldi oracle equivalence on random banded matrices") {
    for (int trial = 0; trial < 20; ++trial) {
        int n = 30 + 7 * trial;
        int bw = 2 + trial % 5;
        auto d = random_banded_dense(n, bw, 9000 + trial, trial % 3 == 0);
        ComplexSparseMatrix a = from_dense(d, n, bw);
        DenseEigResult dr = dense_eigs(d, n, false);
        // shift near a random eigenvalue, the tool's intended use pattern
        CounterRng rng(31 + trial);
        Complex target = dr.values[static_cast<int>(rng.uniform(0, 7) * n)];
        Complex shift = target + Complex(rng.uniform(0, 0, -0.05, 0.05),
                                         rng.uniform(0, 1, -0.05, 0.05));
        ArnoldiOptions opts;
        opts.k = 3;
        auto pairs = shift_invert_arnoldi(a, shift, opts);
        double anorm = a.norm1();
        for (auto& p : pairs) {
            double best = 1e300;
            for (auto& v : dr.values) best = std::min(best, std::abs(p.value - v));
            CHECK(best <= 10.0 * opts.tol * anorm);
        }
        CHECK(static_cast<int>(pairs.size()) >= 1);
    }
}

TEST_CASE("residual honesty") {
    ComplexSparseMatrix a = small_reference_operator(14, 0.5, 1.0);
    ArnoldiOptions opts;
    opts.k = 3;
    auto pairs = shift_invert_arnoldi(a, Complex(0.7, 0.0), opts);
    REQUIRE(!pairs.empty());
    for (auto& p : pairs) {
        auto av = apply_operator(a, p.vector);
        double r2 = 0.0;
        for (int i = 0; i < a.n; ++i) r2 += std::norm(av[i] - p.value * p.vector[i]);
        CHECK(std::abs(std::sqrt(r2) - p.residual) <= 1e-14);
    }
}

TEST_CASE("shift invariance within a window") {
    ComplexSparseMatrix a = small_reference_operator(16, 0.5, 1.0);
    ArnoldiOptions opts;
    opts.k = 4;
    auto p1 = shift_invert_arnoldi(a, Complex(0.55, 0.0), opts);
    auto p2 = shift_invert_arnoldi(a, Complex(0.75, 0.0), opts);
    std::vector<Complex> v1 = {p1[0].value, p1[1].value, p1[2].value, p1[3].value};
    std::vector<Complex> v2 = {p2[0].value, p2[1].value, p2[2].value, p2[3].value};
    MatchResult m = match_eigenvalues(v1, v2);
    int matched = 0;
    double anorm = a.norm1();
    for (std::size_t i = 0; i < v1.size(); ++i) {
        if (m.pair_of_left[i] < 0) continue;
        double dist = std::abs(v1[i] - v2[m.pair_of_left[i]]);
        if (dist <= 10.0 * opts.tol * anorm) ++matched;
    }
    CHECK(matched >= 2);  // the shared eigenvalues between the two windows
}

TEST_CASE("Hermitian matrices give a numerically real Arnoldi spectrum") {
    ComplexSparseMatrix a = small_reference_operator(18, 0.5, 1.3);
    REQUIRE(a.tag == SymmetryTag::HermitianExpected);
    ArnoldiOptions opts;
    opts.k = 5;
    auto pairs = shift_invert_arnoldi(a, Complex(0.8, 0.0), opts);
    double anorm = a.norm1();
    for (auto& p : pairs) CHECK(std::abs(p.value.imag()) <= 10.0 * opts.tol * anorm);
}

TEST_CASE("greedy matching with collision fallback") {
    std::vector<Complex> left = {Complex(1.0, 0), Complex(1.09, 0)};
    std::vector<Complex> right = {Complex(1.05, 0), Complex(1.3, 0)};
    // both left points prefer right[0]; the optimal assignment resolves it
    MatchResult m = match_eigenvalues(left, right);
    CHECK(m.pair_of_left[0] == 0);
    CHECK(m.pair_of_left[1] == 1);

    // equal sizes, trivially disjoint clusters
    std::vector<Complex> l2 = {Complex(0, 0), Complex(5, 0)};
    std::vector<Complex> r2 = {Complex(5.01, 0), Complex(0.01, 0)};
    MatchResult m2 = match_eigenvalues(l2, r2);
    CHECK(m2.pair_of_left[0] == 1);
    CHECK(m2.pair_of_left[1] == 0);
    CHECK(m2.max_distance <= 0.011);
}

}  // TEST_SUITE
