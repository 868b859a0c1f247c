#include "weakoam/pointer.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "weakoam/error.hpp"
#include "weakoam/kernels.hpp"

namespace weakoam {
namespace {

constexpr double kNormalizedTol = 1e-6;
constexpr double kMinExtentSigmas = 6.0;

void require_normalized(const GridField &field) {
    if (!(std::abs(field.norm_hint() - 1.0) <= kNormalizedTol)) {
        throw Error(ErrorCode::NotNormalized, "field norm " + std::to_string(field.norm_hint()));
    }
}

}  // namespace

PointerSpec PointerSpec::make(PointerFamily family, int l, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::BadInput, "pointer width sigma must be positive");
    }
    if (family == PointerFamily::Gaussian && l != 0) {
        throw Error(ErrorCode::BadInput, "Gaussian pointer must have l = 0");
    }
    return PointerSpec(family, l, sigma);
}

PointerSpec PointerSpec::with_winding(int l, double sigma) {
    return make(l == 0 ? PointerFamily::Gaussian : PointerFamily::OAM, l, sigma);
}

double normalization_constant(int abs_l, double sigma) {
    // integral of r^(2m) exp(-r^2 / (2 sigma^2)) over the plane = pi m! (2 sigma^2)^(m+1)
    const double two_s2 = 2.0 * sigma * sigma;
    return 1.0 / std::sqrt(M_PI * std::tgamma(abs_l + 1.0) * std::pow(two_s2, abs_l + 1));
}

cplx pointer_amplitude(const PointerSpec &spec, double x, double y) {
    const int l = spec.l();
    const int m = std::abs(l);
    const double s = spec.sigma();
    const double envelope = normalization_constant(m, s) * std::exp(-(x * x + y * y) / (4.0 * s * s));
    const cplx base(x, l >= 0 ? y : -y);
    cplx vortex = 1.0;
    for (int k = 0; k < m; ++k) vortex *= base;
    return envelope * vortex;
}

GridField sample_shifted(const PointerSpec &spec, const GridSpec &grid, double shift_x, double shift_y) {
    std::vector<cplx> values(grid.size());
    kernels::parallel::sample_mode(spec, grid, shift_x, shift_y, values);
    return GridField(grid, std::move(values)).normalized();
}

GridField sample(const PointerSpec &spec, const GridSpec &grid) {
    if (grid.half_extent() < kMinExtentSigmas * spec.sigma()) {
        throw Error(ErrorCode::ExtentTooSmall, "half extent " + std::to_string(grid.half_extent()) +
                                                   " below 6 sigma = " + std::to_string(kMinExtentSigmas * spec.sigma()));
    }
    return sample_shifted(spec, grid, 0.0, 0.0);
}

std::vector<cplx> apply_monomial(const GridSpec &grid, const PointerMonomial &monomial, std::span<const cplx> psi) {
    std::vector<cplx> current(psi.begin(), psi.end());
    std::vector<cplx> next(current.size());
    for (auto it = monomial.rbegin(); it != monomial.rend(); ++it) {
        switch (*it) {
            case PointerOp::X: kernels::parallel::coordinate(grid, kernels::Axis::X, current, next); break;
            case PointerOp::Y: kernels::parallel::coordinate(grid, kernels::Axis::Y, current, next); break;
            case PointerOp::Px: kernels::parallel::momentum(grid, kernels::Axis::X, current, next); break;
            case PointerOp::Py: kernels::parallel::momentum(grid, kernels::Axis::Y, current, next); break;
        }
        current.swap(next);
    }
    return current;
}

cplx expectation(const GridField &field, const PointerMonomial &monomial) {
    require_normalized(field);
    const std::vector<cplx> ket = apply_monomial(field.grid(), monomial, field.values());
    return kernels::parallel::moment(field.grid(), field.values(), ket);
}

cplx position_moment(const GridField &field, int px, int py) {
    require_normalized(field);
    if (px < 0 || py < 0) {
        throw Error(ErrorCode::BadInput, "moment powers must be non-negative");
    }
    return kernels::parallel::moment(field.grid(), field.values(), field.values(), px, py);
}

cplx momentum_moment(const GridField &field, int qx, int qy) {
    if (qx < 0 || qy < 0 || qx + qy > 2) {
        throw Error(ErrorCode::BadInput, "momentum moment needs qx, qy >= 0 and qx + qy <= 2");
    }
    PointerMonomial mono(qx, PointerOp::Px);
    mono.insert(mono.end(), qy, PointerOp::Py);
    return expectation(field, mono);
}

cplx mixed_moment(const GridField &field, MixedKind kind) {
    switch (kind) {
        case MixedKind::XPy: return expectation(field, {PointerOp::X, PointerOp::Py});
        case MixedKind::YPx: return expectation(field, {PointerOp::Y, PointerOp::Px});
        case MixedKind::XPx: return expectation(field, {PointerOp::X, PointerOp::Px});
        case MixedKind::YPy: return expectation(field, {PointerOp::Y, PointerOp::Py});
    }
    throw Error(ErrorCode::BadInput, "unknown mixed moment kind");
}

double oam_expectation(const GridField &field) {
    return (mixed_moment(field, MixedKind::XPy) - mixed_moment(field, MixedKind::YPx)).real();
}

}  // namespace weakoam
