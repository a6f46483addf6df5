#include "starkres/banded.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace starkres {

namespace {

// transposed lexicographic order when it shrinks the bandwidth
std::vector<int> grid_permutation(const ComplexSparseMatrix& a) {
    if (a.grid_nx > 0 && a.grid_ny > 0 && a.grid_ny < a.grid_nx) {
        std::vector<int> perm(a.n);
        for (int j = 0; j < a.grid_ny; ++j)
            for (int i = 0; i < a.grid_nx; ++i)
                perm[i + static_cast<std::size_t>(a.grid_nx) * j] = j + a.grid_ny * i;
        return perm;
    }
    return {};
}

int permuted_bandwidth(const ComplexSparseMatrix& a, const std::vector<int>& perm) {
    int bw = 0;
    for (int i = 0; i < a.n; ++i) {
        int pi = perm.empty() ? i : perm[i];
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            int pj = perm.empty() ? a.cols[k] : perm[a.cols[k]];
            bw = std::max(bw, std::abs(pi - pj));
        }
    }
    return bw;
}

}  // namespace

BandedLU::BandedLU(const ComplexSparseMatrix& a, Complex shift) : shift_(shift) {
    n_ = a.n;
    perm_ = grid_permutation(a);
    kl_ = permuted_bandwidth(a, perm_);
    ku_ = 2 * kl_;  // partial pivoting widens the upper band by kl
    stride_ = kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(n_) * stride_, Complex(0, 0));
    pivots_.resize(n_);

    double scale = 0.0;
    for (int i = 0; i < n_; ++i) {
        int pi = perm_.empty() ? i : perm_[i];
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            int pj = perm_.empty() ? a.cols[k] : perm_[a.cols[k]];
            Complex v = a.vals[k];
            if (pi == pj) v -= shift;
            entry(pi, pj) = v;
            scale = std::max(scale, std::abs(v));
        }
    }
    if (scale == 0.0) scale = 1.0;
    const double tiny = 1e-300 + 1e-14 * scale;

    for (int k = 0; k < n_; ++k) {
        int last = std::min(n_ - 1, k + kl_);
        int piv = k;
        double best = std::abs(entry(k, k));
        for (int i = k + 1; i <= last; ++i) {
            double v = std::abs(entry(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        pivots_[k] = piv;
        if (best <= tiny) {
            singular_ = true;
            entry(k, k) = Complex(tiny, 0.0);
            continue;
        }
        if (piv != k) {
            int jmax = std::min(n_ - 1, k + ku_);
            for (int j = k; j <= jmax; ++j) std::swap(entry(k, j), entry(piv, j));
        }
        Complex d = entry(k, k);
        int jmax = std::min(n_ - 1, k + ku_);
        for (int i = k + 1; i <= last; ++i) {
            Complex l = entry(i, k) / d;
            entry(i, k) = l;
            if (l != Complex(0, 0))
                for (int j = k + 1; j <= jmax; ++j) entry(i, j) -= l * entry(k, j);
        }
    }
}

std::vector<Complex> BandedLU::solve(const std::vector<Complex>& b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedLU: size mismatch");
    std::vector<Complex> x(n_);
    if (perm_.empty())
        x = b;
    else
        for (int i = 0; i < n_; ++i) x[perm_[i]] = b[i];

    for (int k = 0; k < n_; ++k) {
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
        int last = std::min(n_ - 1, k + kl_);
        Complex xk = x[k];
        for (int i = k + 1; i <= last; ++i) x[i] -= entry(i, k) * xk;
    }
    for (int k = n_ - 1; k >= 0; --k) {
        int jmax = std::min(n_ - 1, k + ku_);
        Complex s = x[k];
        for (int j = k + 1; j <= jmax; ++j) s -= entry(k, j) * x[j];
        x[k] = s / entry(k, k);
    }
    if (perm_.empty()) return x;
    std::vector<Complex> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = x[perm_[i]];
    return out;
}

std::vector<Complex> BandedLU::solve_adjoint(const std::vector<Complex>& b) const {
    // (PA)^H x = P ... solve U^H L^H (P x) = b
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedLU: size mismatch");
    std::vector<Complex> x(n_);
    if (perm_.empty())
        x = b;
    else
        for (int i = 0; i < n_; ++i) x[perm_[i]] = b[i];

    for (int k = 0; k < n_; ++k) {  // forward: U^H y = b
        int jmax = std::min(n_ - 1, k + ku_);
        Complex s = x[k] / std::conj(entry(k, k));
        x[k] = s;
        for (int j = k + 1; j <= jmax; ++j) x[j] -= std::conj(entry(k, j)) * s;
    }
    for (int k = n_ - 1; k >= 0; --k) {  // backward: L^H z = y, then pivots
        int last = std::min(n_ - 1, k + kl_);
        Complex s = x[k];
        for (int i = k + 1; i <= last; ++i) s -= std::conj(entry(i, k)) * x[i];
        x[k] = s;
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    }
    if (perm_.empty()) return x;
    std::vector<Complex> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = x[perm_[i]];
    return out;
}

InertiaResult banded_inertia(const ComplexSparseMatrix& a, double shift) {
    if (a.tag != SymmetryTag::HermitianExpected)
        throw std::invalid_argument("banded_inertia: requires a Hermitian matrix");
    std::vector<int> perm = grid_permutation(a);
    int bw = permuted_bandwidth(a, perm);
    int n = a.n;
    int stride = bw + 1;
    // lower band only: row i, offsets i-j in [0, bw]
    std::vector<Complex> w(static_cast<std::size_t>(n) * stride, Complex(0, 0));
    auto ent = [&](int i, int j) -> Complex& {
        return w[static_cast<std::size_t>(i) * stride + (i - j)];
    };
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            int pi = perm.empty() ? i : perm[i];
            int pj = perm.empty() ? a.cols[k] : perm[a.cols[k]];
            if (pi < pj) continue;
            Complex v = a.vals[k];
            if (pi == pj) v -= shift;
            ent(pi, pj) = v;
            scale = std::max(scale, std::abs(v));
        }
    if (scale == 0.0) scale = 1.0;

    InertiaResult res;
    res.min_pivot = std::numeric_limits<double>::infinity();
    const double breakdown = 1e-13 * scale;
    for (int k = 0; k < n; ++k) {
        double d = ent(k, k).real();
        res.min_pivot = std::min(res.min_pivot, std::abs(d));
        if (std::abs(d) < breakdown) res.reliable = false;
        if (d < 0.0) ++res.negative;
        if (d == 0.0) d = breakdown;
        int last = std::min(n - 1, k + bw);
        for (int i = k + 1; i <= last; ++i) {
            Complex lik = ent(i, k) / d;
            if (lik == Complex(0, 0)) continue;
            for (int j = k + 1; j <= i; ++j) ent(i, j) -= lik * std::conj(ent(j, k));
        }
    }
    return res;
}

int count_eigenvalues_in_window(const ComplexSparseMatrix& m, double a, double b) {
    if (a > b) throw std::invalid_argument("count_eigenvalues_in_window: requires a <= b");
    auto robust = [&](double shift) {
        double jitter = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
            InertiaResult r = banded_inertia(m, shift + jitter);
            if (r.reliable) return r.negative;
            jitter = (jitter == 0.0 ? 1e-11 : jitter * 16.0) * (1.0 + std::abs(shift));
        }
        return banded_inertia(m, shift + jitter).negative;
    };
    return robust(b) - robust(a);
}

}  // namespace starkres
