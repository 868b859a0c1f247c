#pragma once

// Measurement recipes run against simulated pointer readouts. Every
// estimator consumes MomentReport values only.

#include <optional>
#include <string>

#include "weakoam/algebra.hpp"
#include "weakoam/evolution.hpp"
#include "weakoam/pointer.hpp"

namespace weakoam {

struct InputsDigest {
    double delta = 0.0;
    /// Angle of the post-selection away from orthogonality, asin|<f|i>|
    /// (equals epsilon for the worked example).
    double epsilon = 0.0;
    int l = 0;
    double sigma = 1.0;
    GridSpec grid;
};

struct ExtractionResult {
    std::string target;
    double estimated = 0.0;
    double reference = 0.0;
    double relative_error = 0.0;  // |est - ref| / max(|ref|, 1e-12)
    InputsDigest inputs;
};

/// Gaussian-minus-OAM <XY> inverted for Im<A^2>_w. The winding term of the
/// conditioned <XY> is -(l/2) Delta^2 Im<A^2>_w, so the difference is
/// divided by -l Delta^2 / 2. Pointer must have |l| = 1.
ExtractionResult extract_im_second_moment(const Observable &a, const SystemState &pre,
                                          const SystemState &post, const PointerSpec &pointer_oam,
                                          double delta, const GridSpec &grid);

/// Scale factor of the <Y P_x> channel, measured on a known observable.
///
/// For |l| = 1 and B absent the conditioned readout expands as
///   <Y P_x> = <Y P_x>_0 + kappa (Re<A^2>_w - |<A>_w|^2) + O(Delta^3),
/// where <Y P_x>_0 is the unshifted pointer's own value (-l/2). kappa is
/// fitted from A = diag(1, 2), |i> = (1, 1)/sqrt 2, |f> = (cos 1, sin 1).
class Calibration {
 public:
    static Calibration run(const PointerSpec &pointer_oam, double delta, const GridSpec &grid);

    double kappa() const { return kappa_; }
    /// <Y P_x> of the unshifted OAM mode.
    double baseline() const { return baseline_; }
    bool matches(const PointerSpec &pointer, double delta, const GridSpec &grid) const;

 private:
    Calibration(PointerSpec p, double d, GridSpec g, double kappa, double baseline)
        : pointer_(p), delta_(d), grid_(g), kappa_(kappa), baseline_(baseline) {}
    PointerSpec pointer_;
    double delta_;
    GridSpec grid_;
    double kappa_;
    double baseline_;
};

/// Re<A^2>_w from the OAM-minus-Gaussian <Y P_x> readout:
///   (S - baseline) / kappa + |<A>_w|^2,
/// with |<A>_w|^2 taken from the Gaussian <X>, <P_x> readouts.
/// CalibrationMissing when `calibration` is empty or was made for another
/// pointer, Delta or grid.
ExtractionResult extract_re_second_moment(const Observable &a, const SystemState &pre,
                                          const SystemState &post, const PointerSpec &pointer_oam,
                                          double delta, const GridSpec &grid,
                                          const std::optional<Calibration> &calibration);

/// First-order weak value from a Gaussian pointer of width sigma:
/// Re = <X>/Delta, Im = 2 sigma^2 <P_x>/Delta.
cplx assemble_weak_value(const Observable &a, const SystemState &pre, const SystemState &post,
                         double delta, const GridSpec &grid, double sigma = 1.0);

}  // namespace weakoam
