#include "weakoam/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakoam/error.hpp"

namespace weakoam {
namespace {

MomentReport readout(const SystemState &pre, const SystemState &post, const Observable &a, double delta,
                     const PointerSpec &pointer, const GridSpec &grid) {
    try {
        return simulate(pre, post, CouplingConfig::make(a, delta), pointer, grid);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::ExtentTooSmall) {
            throw Error(ErrorCode::AmplificationOutOfRange, e.what());
        }
        throw;
    }
}

void require_unit_winding(const PointerSpec &pointer) {
    if (std::abs(pointer.l()) != 1) {
        throw Error(ErrorCode::BadInput, "extraction needs an OAM pointer with |l| = 1, got l = " +
                                             std::to_string(pointer.l()));
    }
}

void require_nonzero(double delta) {
    if (!(delta != 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorCode::BadInput, "extraction needs a finite nonzero Delta");
    }
}

// |<A>_w|^2 from Gaussian readouts: Re = <X>/Delta, Im = 2 sigma^2 <P_x>/Delta.
double weak_value_modulus2(const MomentReport &gaussian, double delta, double sigma) {
    const double re = gaussian.x / delta;
    const double im = 2.0 * sigma * sigma * gaussian.px / delta;
    return re * re + im * im;
}

ExtractionResult finish(std::string target, double estimated, double reference, const InputsDigest &inputs) {
    ExtractionResult r;
    r.target = std::move(target);
    r.estimated = estimated;
    r.reference = reference;
    r.relative_error = std::abs(estimated - reference) / std::max(std::abs(reference), 1e-12);
    r.inputs = inputs;
    return r;
}

InputsDigest digest(const SystemState &pre, const SystemState &post, const PointerSpec &pointer, double delta,
                    const GridSpec &grid) {
    InputsDigest d;
    d.delta = delta;
    d.epsilon = std::asin(std::min(1.0, std::abs(inner(post, pre))));
    d.l = pointer.l();
    d.sigma = pointer.sigma();
    d.grid = grid;
    return d;
}

struct CalibrationCase {
    Observable a;
    SystemState pre;
    SystemState post;
};

CalibrationCase calibration_case() {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    Vector i(2), f(2);
    i << 1.0, 1.0;
    f << std::cos(1.0), std::sin(1.0);
    return {Observable::make(a), SystemState::normalized(i), SystemState::normalized(f)};
}

}  // namespace

ExtractionResult extract_im_second_moment(const Observable &a, const SystemState &pre, const SystemState &post,
                                          const PointerSpec &pointer_oam, double delta, const GridSpec &grid) {
    require_unit_winding(pointer_oam);
    require_nonzero(delta);
    const double reference = weak_moment(a, 2, pre, post).value.imag();
    const MomentReport gaussian = readout(pre, post, a, delta, PointerSpec::gaussian(pointer_oam.sigma()), grid);
    const MomentReport oam = readout(pre, post, a, delta, pointer_oam, grid);
    const double estimated = (oam.xy - gaussian.xy) / (-0.5 * pointer_oam.l() * delta * delta);
    return finish("Im<A^2>_w", estimated, reference, digest(pre, post, pointer_oam, delta, grid));
}

Calibration Calibration::run(const PointerSpec &pointer_oam, double delta, const GridSpec &grid) {
    require_unit_winding(pointer_oam);
    require_nonzero(delta);
    const CalibrationCase c = calibration_case();
    const double sigma = pointer_oam.sigma();
    const MomentReport unshifted = readout(c.pre, c.post, c.a, 0.0, pointer_oam, grid);
    const MomentReport gaussian = readout(c.pre, c.post, c.a, delta, PointerSpec::gaussian(sigma), grid);
    const MomentReport oam = readout(c.pre, c.post, c.a, delta, pointer_oam, grid);
    const double re_a2 = weak_moment(c.a, 2, c.pre, c.post).value.real();
    const double signal = oam.ypx.real() - gaussian.ypx.real() - unshifted.ypx.real();
    const double kappa = signal / (re_a2 - weak_value_modulus2(gaussian, delta, sigma));
    return Calibration(pointer_oam, delta, grid, kappa, unshifted.ypx.real());
}

bool Calibration::matches(const PointerSpec &pointer, double delta, const GridSpec &grid) const {
    return pointer == pointer_ && delta == delta_ && grid == grid_;
}

ExtractionResult extract_re_second_moment(const Observable &a, const SystemState &pre, const SystemState &post,
                                          const PointerSpec &pointer_oam, double delta, const GridSpec &grid,
                                          const std::optional<Calibration> &calibration) {
    require_unit_winding(pointer_oam);
    require_nonzero(delta);
    if (!calibration || !calibration->matches(pointer_oam, delta, grid)) {
        throw Error(ErrorCode::CalibrationMissing, "no calibration for this pointer, Delta and grid");
    }
    const double reference = weak_moment(a, 2, pre, post).value.real();
    const MomentReport gaussian = readout(pre, post, a, delta, PointerSpec::gaussian(pointer_oam.sigma()), grid);
    const MomentReport oam = readout(pre, post, a, delta, pointer_oam, grid);
    const double signal = oam.ypx.real() - gaussian.ypx.real() - calibration->baseline();
    const double estimated =
        signal / calibration->kappa() + weak_value_modulus2(gaussian, delta, pointer_oam.sigma());
    return finish("Re<A^2>_w", estimated, reference, digest(pre, post, pointer_oam, delta, grid));
}

cplx assemble_weak_value(const Observable &a, const SystemState &pre, const SystemState &post, double delta,
                         const GridSpec &grid, double sigma) {
    require_nonzero(delta);
    weak_value(a, pre, post);  // overlap guard
    const MomentReport g = readout(pre, post, a, delta, PointerSpec::gaussian(sigma), grid);
    return {g.x / delta, 2.0 * sigma * sigma * g.px / delta};
}

}  // namespace weakoam
