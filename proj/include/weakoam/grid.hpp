#pragma once

#include <complex>
#include <span>
#include <vector>

namespace weakoam {

using cplx = std::complex<double>;

inline constexpr int kMinGridPoints = 64;

/// Uniform n x n grid spanning [-L, L] on both axes, endpoints included.
class GridSpec {
 public:
    /// Reference grid: n = 256, L = 8.
    GridSpec() = default;
    /// n must be even and >= 64, half_extent > 0 (BadGrid otherwise).
    static GridSpec make(int n, double half_extent);

    int n() const { return n_; }
    double half_extent() const { return half_extent_; }
    double spacing() const { return 2.0 * half_extent_ / (n_ - 1); }
    double coordinate(int j) const { return -half_extent_ + j * spacing(); }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    bool operator==(const GridSpec &) const = default;

 private:
    GridSpec(int n, double l) : n_(n), half_extent_(l) {}
    int n_ = 256;
    double half_extent_ = 8.0;
};

/// Complex amplitudes on a grid, row-major: values[j * n + k] = psi(x_j, y_k).
/// Immutable once built; the squared norm (trapezoid quadrature) is cached.
class GridField {
 public:
    GridField(GridSpec grid, std::vector<cplx> values);

    const GridSpec &grid() const { return grid_; }
    std::span<const cplx> values() const { return values_; }
    cplx at(int j, int k) const { return values_[static_cast<std::size_t>(j) * grid_.n() + k]; }

    /// Integral of |psi|^2.
    double norm_hint() const { return norm_; }

    /// Copy scaled to unit norm. Throws PostselectionTooRare on a zero field.
    GridField normalized() const;

 private:
    GridSpec grid_;
    std::vector<cplx> values_;
    double norm_;
};

}  // namespace weakoam
