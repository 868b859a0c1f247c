#include "weakoam/evolution.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <string>

#include "weakoam/error.hpp"
#include "weakoam/kernels.hpp"

namespace weakoam {

CouplingConfig CouplingConfig::make(Observable a, double delta_a, std::optional<Observable> b, double delta_b) {
    if (!std::isfinite(delta_a) || !std::isfinite(delta_b)) {
        throw Error(ErrorCode::BadInput, "coupling shifts must be finite");
    }
    if (b) {
        if (b->dim() != a.dim()) {
            throw Error(ErrorCode::BadShape, "A and B dimensions differ");
        }
        if (!check_commuting(a, *b)) {
            throw Error(ErrorCode::NonCommuting, "coupled observables must commute");
        }
    } else {
        delta_b = 0.0;
    }
    return CouplingConfig(std::move(a), delta_a, std::move(b), delta_b);
}

CouplingConfig CouplingConfig::with_deltas(double delta_a, double delta_b) const {
    return make(a_, delta_a, b_, delta_b);
}

EntangledState evolve(const SystemState &pre, const CouplingConfig &coupling, const PointerSpec &pointer,
                      const GridSpec &grid) {
    if (pre.dim() != coupling.dim()) {
        throw Error(ErrorCode::BadShape, "pre-selected state and observable dimensions differ");
    }
    EntangledState state;
    state.basis = simultaneous_eigenbasis(coupling.a(), coupling.b());

    double max_eig = 0.0;
    for (std::size_t k = 0; k < state.basis.alpha.size(); ++k) {
        max_eig = std::max({max_eig, std::abs(state.basis.alpha[k]), std::abs(state.basis.beta[k])});
    }
    const double reach = 6.0 * pointer.sigma() +
                         max_eig * std::max(std::abs(coupling.delta_a()), std::abs(coupling.delta_b()));
    if (grid.half_extent() < reach) {
        throw Error(ErrorCode::ExtentTooSmall, "half extent " + std::to_string(grid.half_extent()) +
                                                   " below required " + std::to_string(reach));
    }

    const std::size_t d = state.basis.basis.size();
    state.coefficients.reserve(d);
    state.branches.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        state.coefficients.push_back(inner(state.basis.basis[k], pre));
        state.branches.push_back(sample_shifted(pointer, grid, state.basis.alpha[k] * coupling.delta_a(),
                                                state.basis.beta[k] * coupling.delta_b()));
    }
    return state;
}

GridField postselect(const EntangledState &state, const SystemState &post) {
    if (state.branches.empty()) {
        throw Error(ErrorCode::BadInput, "entangled state has no branches");
    }
    if (post.dim() != static_cast<int>(state.branches.size())) {
        throw Error(ErrorCode::BadShape, "post-selected state dimension differs from the system");
    }
    const GridSpec grid = state.branches.front().grid();
    std::vector<cplx> out(grid.size(), cplx(0.0));
    for (std::size_t k = 0; k < state.branches.size(); ++k) {
        const cplx weight = inner(post, state.basis.basis[k]) * state.coefficients[k];
        kernels::parallel::axpy(weight, state.branches[k].values(), out);
    }
    return GridField(grid, std::move(out));
}

MomentReport conditioned_moments(const GridField &phi_f) {
    const double p = phi_f.norm_hint();
    if (!(p >= kMinPostselectionNorm)) {
        throw Error(ErrorCode::PostselectionTooRare, "post-selection probability " + std::to_string(p));
    }
    const GridField psi = phi_f.normalized();
    MomentReport r;
    r.p_post = p;
    r.x = position_moment(psi, 1, 0).real();
    r.y = position_moment(psi, 0, 1).real();
    r.xy = position_moment(psi, 1, 1).real();
    r.px = momentum_moment(psi, 1, 0).real();
    r.py = momentum_moment(psi, 0, 1).real();
    r.xpy = mixed_moment(psi, MixedKind::XPy);
    r.ypx = mixed_moment(psi, MixedKind::YPx);
    r.grid = phi_f.grid();
    return r;
}

MomentReport simulate(const SystemState &pre, const SystemState &post, const CouplingConfig &coupling,
                      const PointerSpec &pointer, const GridSpec &grid) {
    return conditioned_moments(postselect(evolve(pre, coupling, pointer, grid), post));
}

std::vector<MomentReport> conditioned_moment_series(const SystemState &pre, const CouplingConfig &coupling,
                                                    const PointerSpec &pointer, const GridSpec &grid,
                                                    const SystemState &post, const std::vector<double> &deltas) {
    const double ratio = coupling.delta_a() != 0.0 ? coupling.delta_b() / coupling.delta_a() : 0.0;
    std::vector<CouplingConfig> points;
    points.reserve(deltas.size());
    for (double delta : deltas) {
        const double delta_b = coupling.delta_a() != 0.0 ? ratio * delta : coupling.delta_b();
        points.push_back(coupling.with_deltas(delta, delta_b));
    }
    std::vector<MomentReport> reports(deltas.size());
    // Points are independent; failures are rethrown in input order.
    std::vector<std::exception_ptr> failures(deltas.size());
    const int count = static_cast<int>(deltas.size());
#pragma omp parallel for schedule(dynamic)
    for (int q = 0; q < count; ++q) {
        try {
            reports[q] = simulate(pre, post, points[q], pointer, grid);
        } catch (...) {
            failures[q] = std::current_exception();
        }
    }
    for (const auto &failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return reports;
}

}  // namespace weakoam
