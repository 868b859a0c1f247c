#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "weakoam/kernels.hpp"

namespace weakoam::kernels {

std::vector<double> wavenumbers(int n, double h) {
    std::vector<double> k(n);
    const double base = 2.0 * M_PI / (n * h);
    for (int m = 0; m < n; ++m) {
        k[m] = base * (m < n / 2 ? m : m - n);
    }
    if (n % 2 == 0) {
        k[n / 2] = 0.0;
    }
    return k;
}

namespace {

double ipow(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

// 1D forward/backward plans per length. Plan creation is not thread-safe in
// FFTW; execution with new arrays is.
struct LinePlans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    ~LinePlans() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

const LinePlans &plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<LinePlans>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto &slot = cache[n];
    if (!slot) {
        slot = std::make_unique<LinePlans>();
        std::vector<cplx> a(n), b(n);
        auto *in = reinterpret_cast<fftw_complex *>(a.data());
        auto *out = reinterpret_cast<fftw_complex *>(b.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        slot->forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
        slot->backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
    }
    return *slot;
}

}  // namespace

namespace parallel {

void sample_mode(const PointerSpec &spec, const GridSpec &grid, double shift_x, double shift_y,
                 std::span<cplx> out) {
    const int n = grid.n();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        const double x = grid.coordinate(j) - shift_x;
        for (int k = 0; k < n; ++k) {
            out[static_cast<std::size_t>(j) * n + k] = pointer_amplitude(spec, x, grid.coordinate(k) - shift_y);
        }
    }
}

cplx moment(const GridSpec &grid, std::span<const cplx> bra, std::span<const cplx> ket, int px, int py) {
    const int n = grid.n();
    const double h = grid.spacing();
    std::vector<cplx> rows(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        const double wx = (j == 0 || j == n - 1) ? 0.5 * h : h;
        const double xp = ipow(grid.coordinate(j), px);
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double wy = (k == 0 || k == n - 1) ? 0.5 * h : h;
            const std::size_t idx = static_cast<std::size_t>(j) * n + k;
            acc += wy * ipow(grid.coordinate(k), py) * std::conj(bra[idx]) * ket[idx];
        }
        rows[j] = wx * xp * acc;
    }
    return std::accumulate(rows.begin(), rows.end(), cplx(0.0));
}

void momentum(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out) {
    const int n = grid.n();
    const std::vector<double> k = wavenumbers(n, grid.spacing());
    const LinePlans &plans = plans_for(n);
    // Line `line` along `axis`: element m sits at line * line_step + m * stride.
    const std::size_t stride = axis == Axis::X ? static_cast<std::size_t>(n) : 1;
    const std::size_t line_step = axis == Axis::X ? 1 : static_cast<std::size_t>(n);
#pragma omp parallel
    {
        std::vector<cplx> a(n), b(n);
        auto *pa = reinterpret_cast<fftw_complex *>(a.data());
        auto *pb = reinterpret_cast<fftw_complex *>(b.data());
#pragma omp for schedule(static)
        for (int line = 0; line < n; ++line) {
            const std::size_t base = line * line_step;
            for (int m = 0; m < n; ++m) a[m] = in[base + m * stride];
            fftw_execute_dft(plans.forward, pa, pb);
            // -i d/dx  <->  multiply by k
            for (int m = 0; m < n; ++m) b[m] *= k[m] / n;
            fftw_execute_dft(plans.backward, pb, pa);
            for (int m = 0; m < n; ++m) out[base + m * stride] = a[m];
        }
    }
}

void coordinate(const GridSpec &grid, Axis axis, std::span<const cplx> in, std::span<cplx> out) {
    const int n = grid.n();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const std::size_t idx = static_cast<std::size_t>(j) * n + k;
            out[idx] = (axis == Axis::X ? grid.coordinate(j) : grid.coordinate(k)) * in[idx];
        }
    }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
    const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        y[i] += a * x[i];
    }
}

void scale(cplx a, std::span<cplx> x) {
    const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        x[i] *= a;
    }
}

}  // namespace parallel
}  // namespace weakoam::kernels
