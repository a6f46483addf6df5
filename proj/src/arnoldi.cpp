#include "starkres/arnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "starkres/dense_eig.hpp"
#include "starkres/rng.hpp"

namespace starkres {

namespace {

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& c : v) s += std::norm(c);
    return std::sqrt(s);
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s(0, 0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void axpy(std::vector<Complex>& y, Complex alpha, const std::vector<Complex>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// two rounds of classical Gram-Schmidt against a basis set
void orthogonalize(std::vector<Complex>& w, const std::vector<std::vector<Complex>>& basis,
                   std::vector<Complex>* coeffs = nullptr) {
    for (int round = 0; round < 2; ++round) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            Complex c = dot(basis[j], w);
            axpy(w, -c, basis[j]);
            if (coeffs) (*coeffs)[j] += c;
        }
    }
}

// dense LU solve of a small k x k system, partial pivoting
bool small_solve(std::vector<Complex> a, std::vector<Complex>& b, int k) {
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int i = col + 1; i < k; ++i)
            if (std::abs(a[static_cast<std::size_t>(i) * k + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * k + col]))
                piv = i;
        if (std::abs(a[static_cast<std::size_t>(piv) * k + col]) < 1e-300) return false;
        if (piv != col) {
            for (int j = 0; j < k; ++j)
                std::swap(a[static_cast<std::size_t>(col) * k + j],
                          a[static_cast<std::size_t>(piv) * k + j]);
            std::swap(b[col], b[piv]);
        }
        for (int i = col + 1; i < k; ++i) {
            Complex f = a[static_cast<std::size_t>(i) * k + col] /
                        a[static_cast<std::size_t>(col) * k + col];
            if (f == Complex(0, 0)) continue;
            for (int j = col; j < k; ++j)
                a[static_cast<std::size_t>(i) * k + j] -=
                    f * a[static_cast<std::size_t>(col) * k + j];
            b[i] -= f * b[col];
        }
    }
    for (int i = k - 1; i >= 0; --i) {
        Complex s = b[i];
        for (int j = i + 1; j < k; ++j) s -= a[static_cast<std::size_t>(i) * k + j] * b[j];
        b[i] = s / a[static_cast<std::size_t>(i) * k + i];
    }
    return true;
}

}  // namespace

std::vector<EigenPair> shift_invert_arnoldi(const ComplexSparseMatrix& a, Complex shift,
                                            const ArnoldiOptions& opts) {
    if (opts.k < 1) throw std::invalid_argument("shift_invert_arnoldi: k >= 1 required");
    const int n = a.n;
    BandedLU lu(a, shift);
    if (lu.singular())
        throw std::runtime_error(
            "shift_invert_arnoldi: shift is an eigenvalue to working precision");

    const double anorm = a.norm1();
    const double conv_tol = opts.tol * (anorm > 0.0 ? anorm : 1.0);
    const int k_want = std::min(opts.k, n);
    const int m = std::min({2 * k_want + opts.extra, 200, n});

    // locked invariant subspace: orthonormal q, cached A*q, and the small
    // interaction matrix t = q^H A q.  The complement then carries exactly
    // the remaining spectrum, and full eigenvectors are recovered through a
    // small coupled solve against t.
    std::vector<EigenPair> locked;
    std::vector<std::vector<Complex>> qlock;
    std::vector<std::vector<Complex>> aq;
    std::vector<Complex> tmat;  // row-major, size grows with qlock

    auto lock_vector = [&](std::vector<Complex> x_full, Complex lambda, int iters) {
        std::vector<Complex> q = x_full;
        orthogonalize(q, qlock);
        double nq = norm2(q);
        if (nq < 1e-8) return false;  // already represented
        for (Complex& c : q) c /= nq;

        double nx = norm2(x_full);
        if (nx == 0.0) return false;
        for (Complex& c : x_full) c /= nx;
        std::vector<Complex> ax = apply_operator(a, x_full);
        std::vector<Complex> r = ax;
        axpy(r, -lambda, x_full);
        double resid = norm2(r);
        if (resid > 10.0 * conv_tol) return false;

        EigenPair p;
        p.value = lambda;
        p.vector = x_full;
        p.residual = resid;
        p.iterations = iters;
        p.converged = true;
        locked.push_back(std::move(p));

        int k_old = static_cast<int>(qlock.size());
        std::vector<Complex> aq_new = apply_operator(a, q);
        std::vector<Complex> tnew(static_cast<std::size_t>(k_old + 1) * (k_old + 1));
        for (int i = 0; i < k_old; ++i)
            for (int j = 0; j < k_old; ++j)
                tnew[static_cast<std::size_t>(i) * (k_old + 1) + j] =
                    tmat[static_cast<std::size_t>(i) * k_old + j];
        for (int i = 0; i < k_old; ++i) {
            tnew[static_cast<std::size_t>(i) * (k_old + 1) + k_old] = dot(qlock[i], aq_new);
            tnew[static_cast<std::size_t>(k_old) * (k_old + 1) + i] = dot(q, aq[i]);
        }
        tnew[static_cast<std::size_t>(k_old) * (k_old + 1) + k_old] = dot(q, aq_new);
        tmat = std::move(tnew);
        qlock.push_back(std::move(q));
        aq.push_back(std::move(aq_new));
        return true;
    };

    CounterRng rng(opts.start_seed);
    auto fresh_start = [&](std::uint64_t salt) {
        std::vector<Complex> v(n);
        for (int i = 0; i < n; ++i)
            v[i] = Complex(rng.uniform(i, 2 * salt) - 0.5, rng.uniform(i, 2 * salt + 1) - 0.5);
        return v;
    };

    std::vector<Complex> start = fresh_start(0);
    int total_iters = 0;

    for (int cycle = 0; cycle < opts.restart_cycles; ++cycle) {
        if (static_cast<int>(locked.size()) >= k_want) break;

        orthogonalize(start, qlock);
        double ns = norm2(start);
        if (ns < 1e-10) {
            start = fresh_start(1000 + cycle);
            orthogonalize(start, qlock);
            ns = norm2(start);
        }
        for (Complex& c : start) c /= ns;

        std::vector<std::vector<Complex>> v;
        v.push_back(start);
        std::vector<Complex> hess(static_cast<std::size_t>(m + 1) * m, Complex(0, 0));
        auto h = [&](int i, int j) -> Complex& {
            return hess[static_cast<std::size_t>(i) * m + j];
        };

        int built = 0;
        for (int j = 0; j < m; ++j) {
            std::vector<Complex> w = lu.solve(v[j]);
            ++total_iters;
            orthogonalize(w, qlock);
            std::vector<Complex> coeffs(v.size(), Complex(0, 0));
            orthogonalize(w, v, &coeffs);
            for (std::size_t i = 0; i < v.size(); ++i) h(static_cast<int>(i), j) = coeffs[i];
            double beta = norm2(w);
            h(j + 1, j) = beta;
            built = j + 1;
            if (beta < 1e-12) break;  // invariant subspace of the deflated operator
            for (Complex& c : w) c /= beta;
            v.push_back(std::move(w));
        }

        std::vector<Complex> hsmall(static_cast<std::size_t>(built) * built);
        for (int i = 0; i < built; ++i)
            for (int j = 0; j < built; ++j)
                hsmall[static_cast<std::size_t>(i) * built + j] = h(i, j);
        DenseEigResult small = dense_eigs(hsmall, built, true);

        std::vector<int> order(built);
        for (int i = 0; i < built; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int p, int q) {
            return std::abs(small.values[p]) > std::abs(small.values[q]);  // nearest shift first
        });

        bool progressed = false;
        std::vector<Complex> next_start;
        for (int oi = 0; oi < built && static_cast<int>(locked.size()) < k_want; ++oi) {
            int idx = order[oi];
            Complex nu = small.values[idx];
            if (std::abs(nu) < 1e-14) continue;
            std::vector<Complex> x(n, Complex(0, 0));
            for (int j = 0; j < built; ++j) axpy(x, small.vectors[idx][j], v[j]);
            double nx = norm2(x);
            if (nx == 0.0) continue;
            for (Complex& c : x) c /= nx;
            Complex lambda = shift + 1.0 / nu;

            // residual of the deflated problem: components along the locked
            // subspace are recovered separately below
            std::vector<Complex> r = apply_operator(a, x);
            axpy(r, -lambda, x);
            std::vector<Complex> s(qlock.size(), Complex(0, 0));
            for (std::size_t i = 0; i < qlock.size(); ++i) {
                s[i] = dot(qlock[i], r);
                axpy(r, -s[i], qlock[i]);
            }
            double resid_proj = norm2(r);

            if (resid_proj <= conv_tol) {
                std::vector<Complex> x_full = x;
                int k_old = static_cast<int>(qlock.size());
                if (k_old > 0) {
                    // (t - lambda I) w = -q^H A x ; x_full = x + Q w
                    std::vector<Complex> sys(tmat);
                    for (int i = 0; i < k_old; ++i)
                        sys[static_cast<std::size_t>(i) * k_old + i] -= lambda;
                    std::vector<Complex> rhs(k_old);
                    for (int i = 0; i < k_old; ++i) rhs[i] = -s[i];
                    if (small_solve(sys, rhs, k_old))
                        for (int i = 0; i < k_old; ++i) axpy(x_full, rhs[i], qlock[i]);
                }
                if (lock_vector(std::move(x_full), lambda, total_iters)) {
                    progressed = true;
                    continue;
                }
            }
            if (next_start.empty() && resid_proj > conv_tol) next_start = x;
        }

        if (!next_start.empty() && built >= 2)
            start = std::move(next_start);
        else if (progressed)
            start = fresh_start(200 + cycle);
        else
            start = fresh_start(100 + cycle);
    }

    std::sort(locked.begin(), locked.end(), [&](const EigenPair& p, const EigenPair& q) {
        double dp = std::abs(p.value - shift), dq = std::abs(q.value - shift);
        if (dp != dq) return dp < dq;
        return p.value.real() < q.value.real();
    });
    return locked;
}

}  // namespace starkres
