#include "starkres/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starkres {

namespace {

inline Complex& at(std::vector<Complex>& a, int n, int i, int j) {
    return a[static_cast<std::size_t>(i) * n + j];
}
inline Complex cat(const std::vector<Complex>& a, int n, int i, int j) {
    return a[static_cast<std::size_t>(i) * n + j];
}

// Householder reduction to upper Hessenberg, Q accumulated.
void hessenberg(std::vector<Complex>& a, int n, std::vector<Complex>& q) {
    q.assign(static_cast<std::size_t>(n) * n, Complex(0, 0));
    for (int i = 0; i < n; ++i) at(q, n, i, i) = 1.0;
    std::vector<Complex> v(n);
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(cat(a, n, i, k));
        if (scale == 0.0) continue;
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = cat(a, n, i, k);
            norm2 += std::norm(v[i]);
        }
        double norm = std::sqrt(norm2);
        Complex x0 = v[k + 1];
        Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
        Complex alpha = -phase * norm;
        v[k + 1] -= alpha;
        double vnorm2 = norm2 - std::norm(x0) + std::norm(v[k + 1]);
        if (vnorm2 == 0.0) continue;
        // A <- (I - 2 v v^H / v^H v) A (left), columns k..n-1
        for (int j = k; j < n; ++j) {
            Complex s(0, 0);
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * cat(a, n, i, j);
            s *= 2.0 / vnorm2;
            for (int i = k + 1; i < n; ++i) at(a, n, i, j) -= s * v[i];
        }
        // A <- A (I - 2 v v^H / v^H v) (right), all rows
        for (int i = 0; i < n; ++i) {
            Complex s(0, 0);
            for (int j = k + 1; j < n; ++j) s += cat(a, n, i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (int j = k + 1; j < n; ++j) at(a, n, i, j) -= s * std::conj(v[j]);
        }
        for (int i = 0; i < n; ++i) {
            Complex s(0, 0);
            for (int j = k + 1; j < n; ++j) s += cat(q, n, i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (int j = k + 1; j < n; ++j) at(q, n, i, j) -= s * std::conj(v[j]);
        }
        for (int i = k + 2; i < n; ++i) at(a, n, i, k) = Complex(0, 0);
    }
}

struct Givens {
    Complex c;
    Complex s;
};

// rotation with G^H [f; g] = [r; 0]
Givens make_givens(Complex f, Complex g, Complex& r) {
    double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) {
        r = f;
        return {Complex(1, 0), Complex(0, 0)};
    }
    if (af == 0.0) {
        r = std::abs(g);
        return {Complex(0, 0), g / std::abs(g)};
    }
    double d = std::hypot(af, ag);
    Complex c = Complex(af / d, 0.0);
    Complex fs = f / af;
    Complex s = fs * std::conj(g) / d;
    r = fs * d;
    return {c, s};
}

}  // namespace

bool complex_schur(std::vector<Complex>& a, int n, std::vector<Complex>& q) {
    hessenberg(a, n, q);
    if (n < 2) return true;

    auto subdiag_small = [&](int i) {
        double s = std::abs(cat(a, n, i - 1, i - 1)) + std::abs(cat(a, n, i, i));
        if (s == 0.0) s = 1.0;
        return std::abs(cat(a, n, i, i - 1)) <= 1e-16 * s;
    };

    int hi = n - 1;
    long long iter_total = 0;
    const long long iter_budget = 60LL * n;
    int stall = 0;
    while (hi > 0) {
        if (iter_total++ > iter_budget) return false;
        if (subdiag_small(hi)) {
            at(a, n, hi, hi - 1) = Complex(0, 0);
            --hi;
            stall = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && !subdiag_small(lo)) --lo;
        if (lo > 0) at(a, n, lo, lo - 1) = Complex(0, 0);

        // Wilkinson shift from the trailing 2x2 of the active block
        Complex h00 = cat(a, n, hi - 1, hi - 1), h01 = cat(a, n, hi - 1, hi);
        Complex h10 = cat(a, n, hi, hi - 1), h11 = cat(a, n, hi, hi);
        Complex tr = h00 + h11;
        Complex det = h00 * h11 - h01 * h10;
        Complex disc = std::sqrt(tr * tr - 4.0 * det);
        Complex r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
        Complex shift = std::abs(r1 - h11) < std::abs(r2 - h11) ? r1 : r2;
        if (++stall % 12 == 0)  // exceptional shift against rare stagnation
            shift = h11 + Complex(std::abs(cat(a, n, hi, hi - 1)), 0.0);

        // explicit single-shift QR step on the active window via Givens
        int m = hi - lo + 1;
        std::vector<Givens> rots(m - 1);
        for (int i = lo; i < hi; ++i) at(a, n, i, i) -= shift;
        at(a, n, hi, hi) -= shift;
        for (int k = lo; k < hi; ++k) {
            Complex r;
            Givens g = make_givens(cat(a, n, k, k), cat(a, n, k + 1, k), r);
            rots[k - lo] = g;
            at(a, n, k, k) = r;
            at(a, n, k + 1, k) = Complex(0, 0);
            for (int j = k + 1; j < n; ++j) {
                Complex t1 = cat(a, n, k, j), t2 = cat(a, n, k + 1, j);
                at(a, n, k, j) = std::conj(g.c) * t1 + g.s * t2;
                at(a, n, k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            Givens g = rots[k - lo];
            int top = std::min(k + 2, hi);
            for (int i = 0; i <= top; ++i) {
                Complex t1 = cat(a, n, i, k), t2 = cat(a, n, i, k + 1);
                at(a, n, i, k) = t1 * g.c + t2 * std::conj(g.s);
                at(a, n, i, k + 1) = -t1 * g.s + t2 * g.c;
            }
            for (int i = 0; i < n; ++i) {
                Complex t1 = cat(q, n, i, k), t2 = cat(q, n, i, k + 1);
                at(q, n, i, k) = t1 * g.c + t2 * std::conj(g.s);
                at(q, n, i, k + 1) = -t1 * g.s + t2 * g.c;
            }
        }
        for (int i = lo; i <= hi; ++i) at(a, n, i, i) += shift;
    }
    return true;
}

DenseEigResult dense_eigs(const std::vector<Complex>& a_rowmajor, int n, bool want_vectors) {
    if (static_cast<int>(a_rowmajor.size()) != n * n)
        throw std::invalid_argument("dense_eigs: bad matrix size");
    DenseEigResult res;
    std::vector<Complex> t = a_rowmajor;
    std::vector<Complex> q;
    res.converged = complex_schur(t, n, q);

    res.values.resize(n);
    for (int i = 0; i < n; ++i) res.values[i] = cat(t, n, i, i);

    if (!want_vectors) return res;

    double tnorm = 0.0;
    for (const Complex& v : t) tnorm = std::max(tnorm, std::abs(v));
    if (tnorm == 0.0) tnorm = 1.0;

    res.vectors.assign(n, std::vector<Complex>(n, Complex(0, 0)));
    res.residuals.assign(n, 0.0);
    std::vector<Complex> x(n);
    for (int k = 0; k < n; ++k) {
        // solve (T - lambda_k) x = 0 by back-substitution, x[k] = 1
        std::fill(x.begin(), x.end(), Complex(0, 0));
        x[k] = Complex(1, 0);
        Complex lk = res.values[k];
        for (int i = k - 1; i >= 0; --i) {
            Complex s(0, 0);
            for (int j = i + 1; j <= k; ++j) s += cat(t, n, i, j) * x[j];
            Complex d = cat(t, n, i, i) - lk;
            if (std::abs(d) < 1e-300 + 1e-16 * tnorm)
                d = Complex(1e-16 * tnorm, 0.0);  // perturb near-defective pivots
            x[i] = -s / d;
        }
        auto& v = res.vectors[k];
        for (int i = 0; i < n; ++i) {
            Complex s(0, 0);
            for (int j = 0; j <= k; ++j) s += cat(q, n, i, j) * x[j];
            v[i] = s;
        }
        double nrm = 0.0;
        for (const Complex& c : v) nrm += std::norm(c);
        nrm = std::sqrt(nrm);
        if (nrm > 0.0)
            for (Complex& c : v) c /= nrm;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex s(0, 0);
            for (int j = 0; j < n; ++j) s += cat(a_rowmajor, n, i, j) * v[j];
            s -= lk * v[i];
            r2 += std::norm(s);
        }
        res.residuals[k] = std::sqrt(r2);
    }
    return res;
}

DenseEigResult dense_eigs(const ComplexSparseMatrix& a, bool want_vectors, int dense_cap) {
    if (a.n > dense_cap)
        throw std::invalid_argument("dense_eigs: matrix exceeds the dense cap");
    return dense_eigs(a.dense(), a.n, want_vectors);
}

}  // namespace starkres
