#pragma once

// Second-order expansion of <O(t)> = <O> + i t <[H, O]> - t^2/2 <[H, [H, O]]>
// (hbar = 1), evaluated matrix-free on the sampled grid, and the closed-form
// <XY> / <X> predictions it reduces to.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weakoam/algebra.hpp"
#include "weakoam/evolution.hpp"
#include "weakoam/pointer.hpp"

namespace weakoam {

/// O = S (x) M with S either |f><f| (projector set) or the identity, and M a
/// pointer monomial of degree <= 2.
struct ObservableSpec {
    std::optional<SystemState> projector;
    PointerMonomial pointer;
};

struct PredictionTerms {
    cplx zeroth;
    cplx first;   // i <[K, O]>
    cplx second;  // -1/2 <[K, [K, O]]>
};

struct Prediction {
    cplx value;  // zeroth + first + second (truncated at order_used)
    int order_used = 2;
    PredictionTerms terms;
    /// <psi_in| S (x) 1 |psi_in>, the zeroth-order post-selection probability.
    double p_post0 = 1.0;

    /// value / p_post0: numerator at order_used over denominator at order 0.
    cplx conditioned() const { return value / p_post0; }
};

/// K = Delta_A A P_x + Delta_B B P_y is applied to the product state
/// |i> (x) phi component-wise; nothing is assembled as a dense matrix.
Prediction heisenberg_expectation(const ObservableSpec &obs, const SystemState &pre,
                                  const CouplingConfig &coupling, const PointerSpec &pointer,
                                  const GridSpec &grid, int order = 2);

/// Second-order conditioned <XY> for the mode family with winding l:
///   (dA dB / 2) [Re<AB>_w + Re(<A>_w* <B>_w)] - (l/2) [dA^2 Im<A^2>_w - dB^2 Im<B^2>_w]
/// With B absent this is -(l/2) dA^2 Im<A^2>_w.
double closed_form_xy(const Observable &a, const std::optional<Observable> &b, const SystemState &pre,
                      const SystemState &post, int l, double delta_a, double delta_b,
                      double overlap_floor = kDefaultOverlapFloor);

/// The same expression with the coefficients as originally published,
/// +(l/2) [dA^2 Im<A^2>_w + dB^2 Im<B^2>_w] for the winding term. Kept for
/// side-by-side reporting; it disagrees in sign with the expansion and with
/// exact evolution.
double published_xy(const Observable &a, const std::optional<Observable> &b, const SystemState &pre,
                    const SystemState &post, int l, double delta_a, double delta_b,
                    double overlap_floor = kDefaultOverlapFloor);

/// delta_a * Re<A>_w.
double closed_form_x_gaussian(const Observable &a, const SystemState &pre, const SystemState &post,
                              double delta_a, double overlap_floor = kDefaultOverlapFloor);

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (log x, log |y|).
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct SeriesPoint {
    double delta = 0.0;
    double exact = 0.0;
    double closed = 0.0;
};

struct ConvergenceReport {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;  // exact - closed
    /// All |residuals| < 1e-12: no meaningful fit, reported as exact agreement.
    bool degenerate = false;
};

inline constexpr double kDegenerateResidual = 1e-12;

/// Needs >= 3 points (BadInput otherwise).
ConvergenceReport convergence_report(std::span<const SeriesPoint> series);

}  // namespace weakoam
