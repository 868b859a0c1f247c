#include "weakoam/perturbation.hpp"

#include <cmath>
#include <string>

#include "weakoam/error.hpp"
#include "weakoam/kernels.hpp"

namespace weakoam {
namespace {

namespace kp = kernels::parallel;

// State of system (x) pointer as one grid field per system basis vector.
using Composite = std::vector<std::vector<cplx>>;

cplx braket(const GridSpec &grid, const Composite &u, const Composite &v) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        s += kp::moment(grid, u[j], v[j]);
    }
    return s;
}

// (M (x) 1) applied component-wise, then the d x d system matrix mixes them.
Composite apply_system(const Matrix &m, const Composite &psi) {
    const std::size_t d = psi.size();
    Composite out(d, std::vector<cplx>(psi.front().size(), cplx(0.0)));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            const cplx c = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (c != cplx(0.0)) kp::axpy(c, psi[k], out[j]);
        }
    }
    return out;
}

// K = dA A P_x + dB B P_y.
Composite apply_coupling(const GridSpec &grid, const CouplingConfig &coupling, const Composite &psi) {
    const std::size_t d = psi.size();
    Composite px(d, std::vector<cplx>(grid.size()));
    for (std::size_t k = 0; k < d; ++k) kp::momentum(grid, kernels::Axis::X, psi[k], px[k]);
    Composite out = apply_system(coupling.delta_a() * coupling.a().matrix(), px);
    if (coupling.b() && coupling.delta_b() != 0.0) {
        Composite py(d, std::vector<cplx>(grid.size()));
        for (std::size_t k = 0; k < d; ++k) kp::momentum(grid, kernels::Axis::Y, psi[k], py[k]);
        const Composite bterm = apply_system(coupling.delta_b() * coupling.b()->matrix(), py);
        for (std::size_t j = 0; j < d; ++j) kp::axpy(1.0, bterm[j], out[j]);
    }
    return out;
}

Composite apply_observable(const GridSpec &grid, const Matrix &system_part, const PointerMonomial &mono,
                           const Composite &psi) {
    Composite moved(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) moved[k] = apply_monomial(grid, mono, psi[k]);
    return apply_system(system_part, moved);
}

struct WeakValues {
    cplx a, a2, b, b2, ab;
};

WeakValues collect(const Observable &a, const std::optional<Observable> &b, const SystemState &pre,
                   const SystemState &post, double floor) {
    WeakValues w{};
    w.a = weak_value(a, pre, post, floor).value;
    w.a2 = weak_moment(a, 2, pre, post, floor).value;
    if (b) {
        w.b = weak_value(*b, pre, post, floor).value;
        w.b2 = weak_moment(*b, 2, pre, post, floor).value;
        w.ab = joint_weak_value(a, *b, pre, post, floor).value;
    }
    return w;
}

void require_in_scope_winding(int l) {
    if (l < -1 || l > 1) {
        throw Error(ErrorCode::BadInput, "closed forms exist only for l in {-1, 0, 1}, got " + std::to_string(l));
    }
}

}  // namespace

Prediction heisenberg_expectation(const ObservableSpec &obs, const SystemState &pre, const CouplingConfig &coupling,
                                  const PointerSpec &pointer, const GridSpec &grid, int order) {
    if (obs.pointer.size() > 2) {
        throw Error(ErrorCode::BadInput, "pointer monomial degree must be <= 2");
    }
    if (order < 0 || order > 2) {
        throw Error(ErrorCode::BadInput, "expansion order must be 0, 1 or 2");
    }
    if (pre.dim() != coupling.dim() || (obs.projector && obs.projector->dim() != pre.dim())) {
        throw Error(ErrorCode::BadShape, "state, observable and projector dimensions differ");
    }
    const int d = pre.dim();
    const GridField phi = sample(pointer, grid);

    Composite psi(d);
    for (int k = 0; k < d; ++k) {
        psi[k].assign(phi.values().begin(), phi.values().end());
        kp::scale(pre.amplitudes()[k], psi[k]);
    }
    const Matrix system_part = obs.projector
                                   ? Matrix(obs.projector->amplitudes() * obs.projector->amplitudes().adjoint())
                                   : Matrix(Matrix::Identity(d, d));

    Prediction p;
    p.order_used = order;
    p.p_post0 = braket(grid, psi, apply_system(system_part, psi)).real();

    const Composite o_psi = apply_observable(grid, system_part, obs.pointer, psi);
    p.terms.zeroth = braket(grid, psi, o_psi);
    if (order >= 1) {
        const Composite k_psi = apply_coupling(grid, coupling, psi);
        const Composite o_k_psi = apply_observable(grid, system_part, obs.pointer, k_psi);
        // <[K, O]> = <K psi|O psi> - <psi|O K psi>
        p.terms.first = cplx(0.0, 1.0) * (braket(grid, k_psi, o_psi) - braket(grid, psi, o_k_psi));
        if (order >= 2) {
            const Composite kk_psi = apply_coupling(grid, coupling, k_psi);
            const Composite o_kk_psi = apply_observable(grid, system_part, obs.pointer, kk_psi);
            // <[K, [K, O]]> = <K^2 psi|O psi> - 2 <K psi|O K psi> + <psi|O K^2 psi>
            const cplx double_comm =
                braket(grid, kk_psi, o_psi) - 2.0 * braket(grid, k_psi, o_k_psi) + braket(grid, psi, o_kk_psi);
            p.terms.second = -0.5 * double_comm;
        }
    }
    p.value = (p.terms.zeroth + p.terms.first) + p.terms.second;
    return p;
}

double closed_form_xy(const Observable &a, const std::optional<Observable> &b, const SystemState &pre,
                      const SystemState &post, int l, double delta_a, double delta_b, double overlap_floor) {
    require_in_scope_winding(l);
    const WeakValues w = collect(a, b, pre, post, overlap_floor);
    double joint = 0.0;
    double winding = delta_a * delta_a * w.a2.imag();
    if (b) {
        joint = 0.5 * delta_a * delta_b * (w.ab.real() + (std::conj(w.a) * w.b).real());
        winding -= delta_b * delta_b * w.b2.imag();
    }
    return joint - 0.5 * l * winding;
}

double published_xy(const Observable &a, const std::optional<Observable> &b, const SystemState &pre,
                    const SystemState &post, int l, double delta_a, double delta_b, double overlap_floor) {
    require_in_scope_winding(l);
    const WeakValues w = collect(a, b, pre, post, overlap_floor);
    double joint = 0.0;
    double winding = delta_a * delta_a * w.a2.imag();
    if (b) {
        joint = 0.5 * delta_a * delta_b * (w.ab.real() + (std::conj(w.a) * w.b).real());
        winding += delta_b * delta_b * w.b2.imag();
    }
    return joint + 0.5 * l * winding;
}

double closed_form_x_gaussian(const Observable &a, const SystemState &pre, const SystemState &post, double delta_a,
                              double overlap_floor) {
    return delta_a * weak_value(a, pre, post, overlap_floor).value.real();
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::BadInput, "power-law fit needs >= 2 paired points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(std::abs(y[k]) > 0.0)) {
            throw Error(ErrorCode::BadInput, "power-law fit needs positive x and nonzero y");
        }
        const double lx = std::log(x[k]);
        const double ly = std::log(std::abs(y[k]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) {
        throw Error(ErrorCode::BadInput, "power-law fit needs distinct x values");
    }
    PowerLawFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

ConvergenceReport convergence_report(std::span<const SeriesPoint> series) {
    if (series.size() < 3) {
        throw Error(ErrorCode::BadInput, "convergence report needs >= 3 sweep points");
    }
    ConvergenceReport report;
    std::vector<double> xs, rs;
    bool all_small = true;
    for (const SeriesPoint &p : series) {
        const double r = p.exact - p.closed;
        report.residuals.push_back(r);
        all_small = all_small && std::abs(r) < kDegenerateResidual;
        if (r != 0.0) {
            xs.push_back(p.delta);
            rs.push_back(r);
        }
    }
    if (all_small || xs.size() < 2) {
        report.degenerate = true;
        report.slope = std::nan("");
        report.intercept = std::nan("");
        return report;
    }
    const PowerLawFit fit = fit_power_law(xs, rs);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    return report;
}

}  // namespace weakoam
