#include "starkres/assembly.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace starkres {

std::vector<double> Grid2D::xs() const {
    std::vector<double> v(nx);
    for (int i = 0; i < nx; ++i) v[i] = x(i);
    return v;
}

std::vector<double> Grid2D::ys() const {
    std::vector<double> v(ny);
    for (int j = 0; j < ny; ++j) v[j] = y(j);
    return v;
}

Grid2D make_grid(double x_min, double x_max, double y_min, double y_max, int nx, int ny) {
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("make_grid: degenerate domain");
    if (nx < 3 || ny < 3) throw std::invalid_argument("make_grid: need nx, ny >= 3");
    Grid2D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.y_min = y_min;
    g.y_max = y_max;
    g.nx = nx;
    g.ny = ny;
    g.dx = (x_max - x_min) / (nx + 1);
    g.dy = (y_max - y_min) / (ny + 1);
    return g;
}

Complex ComplexSparseMatrix::at(int i, int j) const {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        if (cols[k] == j) return vals[k];
    return Complex(0.0, 0.0);
}

std::vector<Complex> ComplexSparseMatrix::dense() const {
    std::vector<Complex> d(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            d[static_cast<std::size_t>(i) * n + cols[k]] = vals[k];
    return d;
}

double ComplexSparseMatrix::norm1() const {
    std::vector<double> col(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) col[cols[k]] += std::abs(vals[k]);
    double m = 0.0;
    for (double c : col) m = std::max(m, c);
    return m;
}

std::vector<Complex> apply_operator(const ComplexSparseMatrix& a, const std::vector<Complex>& x) {
    if (static_cast<int>(x.size()) != a.n)
        throw std::invalid_argument("apply_operator: dimension mismatch");
    std::vector<Complex> y(a.n);
    for (int i = 0; i < a.n; ++i) {
        Complex acc(0.0, 0.0);
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) acc += a.vals[k] * x[a.cols[k]];
        y[i] = acc;
    }
    return y;
}

ComplexSparseMatrix assemble_operator(OperatorKind kind, const Grid2D& grid,
                                      const HamiltonianParams& params,
                                      const DistortedCoefficients& coeffs) {
    if (coeffs.nx != grid.nx || coeffs.ny != grid.ny)
        throw std::invalid_argument("assemble_operator: coefficient grid mismatch");
    if (kind == OperatorKind::SelfAdjoint && !coeffs.identity)
        throw std::invalid_argument(
            "assemble_operator: SelfAdjoint kind requires undistorted coefficients");

    const int nx = grid.nx, ny = grid.ny, n = grid.size();
    const double h = params.h;
    const double kin_x = 0.5 * h * h / (grid.dx * grid.dx);
    const double kin_y = 0.5 * h * h / (grid.dy * grid.dy);
    const double cross_scale = h / (2.0 * grid.dx);

    ComplexSparseMatrix a;
    a.n = n;
    a.grid_nx = nx;
    a.grid_ny = ny;
    a.bandwidth = nx;
    a.row_ptr.assign(n + 1, 0);
    a.cols.reserve(static_cast<std::size_t>(n) * 5);
    a.vals.reserve(static_cast<std::size_t>(n) * 5);

    bool pure_imag_theta = true;
    for (int i = 0; i < nx && pure_imag_theta; ++i)
        if (coeffs.phi[i].real() != grid.x(i)) pure_imag_theta = false;
    if (kind == OperatorKind::SelfAdjoint)
        a.tag = SymmetryTag::HermitianExpected;
    else if (params.B == 0.0 && pure_imag_theta)
        a.tag = SymmetryTag::ComplexSymmetricExpected;  // cross term absent when B = 0
    else
        a.tag = SymmetryTag::None;

    for (int j = 0; j < ny; ++j) {
        const double by = coeffs.by[j];
        for (int i = 0; i < nx; ++i) {
            const int row = grid.index(i, j);
            const Complex mi = coeffs.m[i];
            const Complex ml = coeffs.m_half[i];
            const Complex mr = coeffs.m_half[i + 1];
            const Complex cross = Complex(0.0, -1.0) * (by * cross_scale) * mi;

            a.row_ptr[row + 1] = a.row_ptr[row];
            auto push = [&](int col, Complex v) {
                a.cols.push_back(col);
                a.vals.push_back(v);
                ++a.row_ptr[row + 1];
            };

            if (j > 0) push(grid.index(i, j - 1), Complex(-kin_y, 0.0));
            if (i > 0) push(grid.index(i - 1, j), -kin_x * (mi * ml) - cross);
            {
                Complex diag = kin_x * mi * (ml + mr) + 2.0 * kin_y
                               + coeffs.w[static_cast<std::size_t>(j) * nx + i]
                               + 0.5 * by * by;
                push(row, diag);
            }
            if (i < nx - 1) push(grid.index(i + 1, j), -kin_x * (mi * mr) + cross);
            if (j < ny - 1) push(grid.index(i, j + 1), Complex(-kin_y, 0.0));
        }
    }
    return a;
}

void dump_matrix_coordinate(const ComplexSparseMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_matrix_coordinate: cannot open " + path);
    out.precision(17);
    for (int i = 0; i < a.n; ++i)
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            out << i << ' ' << a.cols[k] << ' ' << a.vals[k].real() << ' ' << a.vals[k].imag()
                << '\n';
}

}  // namespace starkres
