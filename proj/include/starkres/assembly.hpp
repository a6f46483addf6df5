#ifndef STARKRES_ASSEMBLY_HPP
#define STARKRES_ASSEMBLY_HPP

#include <cstddef>
#include <vector>

#include "starkres/distortion.hpp"
#include "starkres/potential.hpp"

namespace starkres {

// Interior points of a Dirichlet rectangle; the boundary ghost layer is
// excluded, d_x = (x_max - x_min)/(n_x + 1).
struct Grid2D {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;

    double x(int i) const { return x_min + (i + 1) * dx; }
    double y(int j) const { return y_min + (j + 1) * dy; }
    int index(int i, int j) const { return i + nx * j; }
    int size() const { return nx * ny; }
    std::vector<double> xs() const;
    std::vector<double> ys() const;
};

Grid2D make_grid(double x_min, double x_max, double y_min, double y_max, int nx, int ny);

enum class SymmetryTag { HermitianExpected, ComplexSymmetricExpected, None };

// Row-compressed complex sparse matrix with symmetric pattern.
struct ComplexSparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> cols;
    std::vector<Complex> vals;
    int bandwidth = 0;
    SymmetryTag tag = SymmetryTag::None;
    int grid_nx = 0, grid_ny = 0;  // set when assembled on a Grid2D, else 0

    Complex at(int i, int j) const;
    std::vector<Complex> dense() const;  // row-major n*n, for small oracles
    double norm1() const;                // max column sum of |a_ij|
};

// y = A x with deterministic per-row accumulation order.
std::vector<Complex> apply_operator(const ComplexSparseMatrix& a, const std::vector<Complex>& x);

enum class OperatorKind { SelfAdjoint, Distorted };

// Second-order centered finite differences of
//   1/2 (h m(x) D_x + By)^2 + 1/2 (h D_y)^2 + W(x,y) + 1/2 B^2 y^2,
// expanded with m left of D_x in each kinetic factor; the (m D_x)(m D_x)
// term composes staggered first differences so every row keeps 5 nonzeros,
// and the magnetic cross term B y h m D_x uses centered first differences.
// Dirichlet boundary.  SelfAdjoint kinds require identity coefficients and
// come out exactly Hermitian.
ComplexSparseMatrix assemble_operator(OperatorKind kind, const Grid2D& grid,
                                      const HamiltonianParams& params,
                                      const DistortedCoefficients& coeffs);

// Plain-text coordinate dump (row, col, re, im), one entry per line.
void dump_matrix_coordinate(const ComplexSparseMatrix& a, const std::string& path);

}  // namespace starkres

#endif
