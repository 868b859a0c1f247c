#pragma once

// Grid kernels. `parallel` is the OpenMP implementation used by the library;
// `reference` is a plain serial implementation kept for cross-checking and
// benchmarking. Both compute the same quantities; the reference momentum
// operator uses a dense DFT matrix instead of FFTW.
//
// Reductions in `parallel` accumulate one partial sum per grid row and add
// the rows in order, so results do not depend on the thread count.

#include <span>

#include "weakoam/grid.hpp"
#include "weakoam/pointer.hpp"

namespace weakoam::kernels {

enum class Axis { X, Y };

namespace parallel {

void sample_mode(const PointerSpec &spec, const GridSpec &grid, double shift_x, double shift_y,
                 std::span<cplx> out);

/// Trapezoid-rule integral of conj(bra) x^px y^py ket.
cplx moment(const GridSpec &grid, std::span<const cplx> bra, std::span<const cplx> ket, int px = 0,
            int py = 0);

/// out = -i d/d(axis) in, by FFT along the axis (Nyquist mode dropped).
void momentum(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out);

/// out = coordinate(axis) * in, pointwise.
void coordinate(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out);

/// y += a * x
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

void scale(cplx a, std::span<cplx> x);

}  // namespace parallel

namespace reference {

void sample_mode(const PointerSpec &spec, const GridSpec &grid, double shift_x, double shift_y,
                 std::span<cplx> out);
cplx moment(const GridSpec &grid, std::span<const cplx> bra, std::span<const cplx> ket, int px = 0,
            int py = 0);
void momentum(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out);
void coordinate(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx a, std::span<cplx> x);

}  // namespace reference

/// Angular wavenumbers matching FFT ordering for n points spaced h apart,
/// with the Nyquist entry set to zero.
std::vector<double> wavenumbers(int n, double h);

}  // namespace weakoam::kernels
