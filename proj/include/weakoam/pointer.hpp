#pragma once

// Two-dimensional pointer wavefunctions: Gaussian (l = 0) and p = 0
// Laguerre-Gauss vortex modes
//
//     phi(x, y) = N (x + i sgn(l) y)^|l| exp(-(x^2 + y^2) / (4 sigma^2)),
//
// sampled on a GridSpec, plus quadrature of position, momentum and mixed
// moments. Units: hbar = 1, lengths in the same units as sigma.

#include <vector>

#include "weakoam/grid.hpp"

namespace weakoam {

enum class PointerFamily { Gaussian, OAM };

class PointerSpec {
 public:
    /// sigma > 0; Gaussian requires l = 0.
    static PointerSpec make(PointerFamily family, int l, double sigma);
    static PointerSpec gaussian(double sigma = 1.0) { return make(PointerFamily::Gaussian, 0, sigma); }
    /// l = 0 yields the Gaussian family.
    static PointerSpec with_winding(int l, double sigma = 1.0);

    PointerFamily family() const { return family_; }
    int l() const { return l_; }
    double sigma() const { return sigma_; }

    bool operator==(const PointerSpec &) const = default;

 private:
    PointerSpec(PointerFamily f, int l, double s) : family_(f), l_(l), sigma_(s) {}
    PointerFamily family_;
    int l_;
    double sigma_;
};

/// N(|l|, sigma) such that the mode integrates to one over the plane:
/// N^2 = 1 / (pi |l|! (2 sigma^2)^(|l|+1)).
double normalization_constant(int abs_l, double sigma);

cplx pointer_amplitude(const PointerSpec &spec, double x, double y);

/// Samples the mode, then rescales by quadrature so the grid norm is 1.
/// ExtentTooSmall if the half extent is below 6 sigma.
GridField sample(const PointerSpec &spec, const GridSpec &grid);

/// Same, with the mode translated to phi(x - shift_x, y - shift_y) by
/// analytic re-evaluation. The extent guard is the caller's job.
GridField sample_shifted(const PointerSpec &spec, const GridSpec &grid, double shift_x, double shift_y);

enum class PointerOp { X, Y, Px, Py };

/// Operator product as written, e.g. {X, Py} is X * P_y (P_y acts first on
/// the ket).
using PointerMonomial = std::vector<PointerOp>;

/// monomial |psi> as raw amplitudes; momentum by spectral differentiation.
std::vector<cplx> apply_monomial(const GridSpec &grid, const PointerMonomial &monomial,
                                 std::span<const cplx> psi);

/// <psi| monomial |psi>. NotNormalized if |norm - 1| > 1e-6.
cplx expectation(const GridField &field, const PointerMonomial &monomial);

/// Integral of conj(psi) x^px y^py psi (trapezoid rule). The imaginary part is
/// the quadrature residue and is returned as is.
cplx position_moment(const GridField &field, int px, int py);

/// <psi| P_x^qx P_y^qy |psi>, qx + qy <= 2.
cplx momentum_moment(const GridField &field, int qx, int qy);

enum class MixedKind { XPy, YPx, XPx, YPy };

/// Position factor written first: XPy is <psi| X P_y |psi>.
cplx mixed_moment(const GridField &field, MixedKind kind);

/// Real part of <X P_y - Y P_x>.
double oam_expectation(const GridField &field);

}  // namespace weakoam
