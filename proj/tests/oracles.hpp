#pragma once
// Independent oracles for the unit tests. Nothing here calls into the library's numerics.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = std::vector<std::vector<cplx>>;
using Vec = std::vector<cplx>;

inline Vec matvec(const Mat &a, const Vec &v) {
    Vec out(v.size(), 0.0);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) out[r] += a[r][c] * v[c];
    return out;
}

inline cplx braket(const Vec &bra, const Vec &ket) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < bra.size(); ++k) s += std::conj(bra[k]) * ket[k];
    return s;
}

// <f|A^n|i> / <f|i> by repeated multiplication
inline cplx weak_moment(const Mat &a, int n, const Vec &i, const Vec &f) {
    Vec v = i;
    for (int k = 0; k < n; ++k) v = matvec(a, v);
    return braket(f, v) / braket(f, i);
}

inline cplx joint(const Mat &a, const Mat &b, const Vec &i, const Vec &f) {
    return braket(f, matvec(a, matvec(b, i))) / braket(f, i);
}

// LG p = 0 mode written out by hand, hbar = 1.
inline cplx lg_mode(int l, double sigma, double x, double y) {
    const int al = std::abs(l);
    const double s2 = sigma * sigma;
    const double norm2 = 1.0 / (M_PI * std::tgamma(al + 1.0) * std::pow(2.0 * s2, al + 1));
    const cplx base(x, l >= 0 ? y : -y);
    return std::sqrt(norm2) * std::pow(base, al) * std::exp(-(x * x + y * y) / (4.0 * s2));
}

// Closed-form XY moment of the exact post-selected field for diagonal A, B:
// brute-force trapezoid over a plain loop.
template <class F>
cplx quad2(F f, int n, double half) {
    const double h = 2.0 * half / (n - 1);
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double wx = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        for (int k = 0; k < n; ++k) {
            const double wy = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            s += wx * wy * f(-half + j * h, -half + k * h);
        }
    }
    return s * h * h;
}

inline Mat random_hermitian(std::mt19937_64 &rng, int d) {
    std::normal_distribution<double> g;
    Mat m(d, Vec(d));
    for (int r = 0; r < d; ++r) {
        m[r][r] = g(rng);
        for (int c = r + 1; c < d; ++c) {
            m[r][c] = cplx(g(rng), g(rng));
            m[c][r] = std::conj(m[r][c]);
        }
    }
    return m;
}

inline Vec random_unit(std::mt19937_64 &rng, int d) {
    std::normal_distribution<double> g;
    Vec v(d);
    double n2 = 0.0;
    for (auto &x : v) {
        x = cplx(g(rng), g(rng));
        n2 += std::norm(x);
    }
    for (auto &x : v) x /= std::sqrt(n2);
    return v;
}

}  // namespace oracle
