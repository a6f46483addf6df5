#ifndef STARKRES_BANDED_HPP
#define STARKRES_BANDED_HPP

#include <vector>

#include "starkres/assembly.hpp"

namespace starkres {

// LU factorization of (A - shift I) with partial pivoting inside the band.
// When the matrix was assembled on a grid with ny < nx, rows and columns are
// symmetrically permuted to the transposed lexicographic order first, which
// shrinks the bandwidth to min(nx, ny).
class BandedLU {
  public:
    BandedLU(const ComplexSparseMatrix& a, Complex shift);

    // solves (A - shift I) x = b
    std::vector<Complex> solve(const std::vector<Complex>& b) const;
    // solves (A - shift I)^H x = b
    std::vector<Complex> solve_adjoint(const std::vector<Complex>& b) const;

    bool singular() const { return singular_; }
    int n() const { return n_; }
    Complex shift() const { return shift_; }

  private:
    int n_ = 0;
    int kl_ = 0, ku_ = 0;         // lower band and elimination-widened upper band
    int stride_ = 0;
    std::vector<Complex> ab_;     // row i, offset o = j - i in [-kl, ku]
    std::vector<int> pivots_;
    std::vector<int> perm_;       // grid reordering (empty when unused)
    bool singular_ = false;
    Complex shift_;

    Complex& entry(int i, int j) { return ab_[static_cast<std::size_t>(i) * stride_ + (j - i + kl_)]; }
    const Complex& entry(int i, int j) const {
        return ab_[static_cast<std::size_t>(i) * stride_ + (j - i + kl_)];
    }
};

struct InertiaResult {
    int negative = 0;     // eigenvalues of (A - shift I) below zero
    double min_pivot = 0.0;
    bool reliable = true;  // false when a pivot fell under the breakdown threshold
};

// LDL^H pivot signs of the Hermitian (A - shift I); requires the
// HermitianExpected tag.  Counting negative pivots at two shifts brackets the
// number of eigenvalues in an interval (Sylvester inertia).
InertiaResult banded_inertia(const ComplexSparseMatrix& a, double shift);

// Eigenvalue count of a Hermitian matrix in (a, b]; retries with tiny shift
// jitter when a factorization pivot breaks down.
int count_eigenvalues_in_window(const ComplexSparseMatrix& m, double a, double b);

}  // namespace starkres

#endif
