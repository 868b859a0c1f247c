#pragma once

// Exact (non-perturbative) system-pointer evolution under
// H = g_A A P_x + g_B B P_y for commuting A, B, followed by post-selection.
// Because P_x, P_y generate translations, the pointer branch attached to the
// shared eigenvector |k> is the initial mode shifted by
// (alpha_k Delta_A, beta_k Delta_B), with Delta = g t.

#include <optional>
#include <vector>

#include "weakoam/algebra.hpp"
#include "weakoam/grid.hpp"
#include "weakoam/pointer.hpp"

namespace weakoam {

inline constexpr double kMinPostselectionNorm = 1e-12;

class CouplingConfig {
 public:
    /// NonCommuting if B is present and does not commute with A; BadShape on
    /// mismatched dimensions.
    static CouplingConfig make(Observable a, double delta_a, std::optional<Observable> b = std::nullopt,
                               double delta_b = 0.0);

    const Observable &a() const { return a_; }
    const std::optional<Observable> &b() const { return b_; }
    double delta_a() const { return delta_a_; }
    double delta_b() const { return delta_b_; }
    int dim() const { return a_.dim(); }

    /// Same observables, new shifts.
    CouplingConfig with_deltas(double delta_a, double delta_b) const;

 private:
    CouplingConfig(Observable a, double da, std::optional<Observable> b, double db)
        : a_(std::move(a)), b_(std::move(b)), delta_a_(da), delta_b_(db) {}
    Observable a_;
    std::optional<Observable> b_;
    double delta_a_;
    double delta_b_;
};

struct EntangledState {
    SharedEigenbasis basis;
    std::vector<cplx> coefficients;  // c_k = <k|i>
    std::vector<GridField> branches; // unit-norm, shifted modes
};

/// Conditioned pointer readouts after post-selection.
struct MomentReport {
    double p_post = 0.0;
    double x = 0.0;
    double y = 0.0;
    double xy = 0.0;
    double px = 0.0;
    double py = 0.0;
    cplx xpy;
    cplx ypx;
    GridSpec grid;
};

/// ExtentTooSmall unless L >= 6 sigma + max|eigenvalue| * max(|dA|, |dB|).
EntangledState evolve(const SystemState &pre, const CouplingConfig &coupling, const PointerSpec &pointer,
                      const GridSpec &grid);

/// Phi_f = sum_k <f|k> c_k branch_k, not renormalized.
GridField postselect(const EntangledState &state, const SystemState &post);

/// Moments of Phi_f / sqrt(p_post). PostselectionTooRare if p_post < 1e-12.
MomentReport conditioned_moments(const GridField &phi_f);

/// evolve + postselect + conditioned_moments.
MomentReport simulate(const SystemState &pre, const SystemState &post, const CouplingConfig &coupling,
                      const PointerSpec &pointer, const GridSpec &grid);

/// One report per entry of `deltas`, in input order. Each entry sets Delta_A;
/// Delta_B keeps its ratio to Delta_A from `coupling` (or its value when
/// coupling.delta_a() == 0). Points may run concurrently.
std::vector<MomentReport> conditioned_moment_series(const SystemState &pre, const CouplingConfig &coupling,
                                                    const PointerSpec &pointer, const GridSpec &grid,
                                                    const SystemState &post, const std::vector<double> &deltas);

}  // namespace weakoam
