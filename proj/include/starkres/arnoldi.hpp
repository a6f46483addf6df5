#ifndef STARKRES_ARNOLDI_HPP
#define STARKRES_ARNOLDI_HPP

#include <vector>

#include "starkres/banded.hpp"

namespace starkres {

struct EigenPair {
    Complex value{0.0, 0.0};
    std::vector<Complex> vector;  // unit norm
    double residual = 0.0;        // ||A v - lambda v|| from a fresh matvec
    int iterations = 0;
    bool converged = false;
};

struct ArnoldiOptions {
    int k = 4;              // wanted pairs nearest the shift
    double tol = 1e-10;     // convergence: residual <= tol * ||A||_1
    int restart_cycles = 20;
    int extra = 20;         // cycle subspace dimension 2k + extra, capped at 200
    std::uint64_t start_seed = 12345;
};

// Explicitly restarted Arnoldi on (A - shift)^{-1} with full
// reorthogonalization and deflation by locking converged pairs.  Returned
// pairs are sorted by distance from the shift; unconverged trailing pairs are
// flagged when the restart budget runs out.
std::vector<EigenPair> shift_invert_arnoldi(const ComplexSparseMatrix& a, Complex shift,
                                            const ArnoldiOptions& opts);

}  // namespace starkres

#endif
