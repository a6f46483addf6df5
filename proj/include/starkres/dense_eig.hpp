#ifndef STARKRES_DENSE_EIG_HPP
#define STARKRES_DENSE_EIG_HPP

#include <vector>

#include "starkres/assembly.hpp"

namespace starkres {

struct DenseEigResult {
    std::vector<Complex> values;
    std::vector<std::vector<Complex>> vectors;  // unit norm, vectors[k] for values[k]
    std::vector<double> residuals;              // ||A v - lambda v|| from a fresh matvec
    bool converged = true;                      // QR reached triangular form
};

// Full complex spectrum via Hessenberg reduction and single-shift QR with
// accumulated Schur vectors; eigenvectors by triangular back-substitution.
DenseEigResult dense_eigs(const std::vector<Complex>& a_rowmajor, int n,
                          bool want_vectors = true);

DenseEigResult dense_eigs(const ComplexSparseMatrix& a, bool want_vectors = true,
                          int dense_cap = 2000);

// Schur form A = Q T Q^H; returns false when QR stalls.
bool complex_schur(std::vector<Complex>& a, int n, std::vector<Complex>& q);

}  // namespace starkres

#endif
