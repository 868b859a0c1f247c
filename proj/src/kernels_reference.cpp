#include <cmath>
#include <vector>

#include "weakoam/kernels.hpp"

namespace weakoam::kernels::reference {

void sample_mode(const PointerSpec &spec, const GridSpec &grid, double shift_x, double shift_y,
                 std::span<cplx> out) {
    const int n = grid.n();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            out[j * n + k] = pointer_amplitude(spec, grid.coordinate(j) - shift_x, grid.coordinate(k) - shift_y);
        }
    }
}

cplx moment(const GridSpec &grid, std::span<const cplx> bra, std::span<const cplx> ket, int px, int py) {
    const int n = grid.n();
    const double h = grid.spacing();
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double wx = (j == 0 || j == n - 1) ? 0.5 * h : h;
            const double wy = (k == 0 || k == n - 1) ? 0.5 * h : h;
            const double mono = std::pow(grid.coordinate(j), px) * std::pow(grid.coordinate(k), py);
            sum += wx * wy * mono * std::conj(bra[j * n + k]) * ket[j * n + k];
        }
    }
    return sum;
}

// Dense n x n matrix of -i d/dx on the periodic grid:
// D[j][m] = (1/n) sum_q k_q exp(i k_q (x_j - x_m)).
void momentum(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out) {
    const int n = grid.n();
    const double h = grid.spacing();
    const std::vector<double> k = wavenumbers(n, h);
    std::vector<cplx> dense(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
            cplx s = 0.0;
            for (int q = 0; q < n; ++q) {
                s += k[q] * std::polar(1.0, k[q] * (j - m) * h);
            }
            dense[j * n + m] = s / static_cast<double>(n);
        }
    }
    for (int line = 0; line < n; ++line) {
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int m = 0; m < n; ++m) {
                const int src = axis == Axis::X ? m * n + line : line * n + m;
                s += dense[j * n + m] * in[src];
            }
            out[axis == Axis::X ? j * n + line : line * n + j] = s;
        }
    }
}

void coordinate(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out) {
    const int n = grid.n();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            out[j * n + k] = (axis == Axis::X ? grid.coordinate(j) : grid.coordinate(k)) * in[j * n + k];
        }
    }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(cplx a, std::span<cplx> x) {
    for (auto &v : x) v *= a;
}

}  // namespace weakoam::kernels::reference
