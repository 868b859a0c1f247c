#include "weakoam/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "weakoam/error.hpp"

namespace weakoam {
namespace {

double max_entry(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_same_dim(int a, int b, const char *what) {
    if (a != b) {
        throw Error(ErrorCode::BadShape, std::string(what) + ": dimension " + std::to_string(a) +
                                             " vs " + std::to_string(b));
    }
}

// First component with modulus above 1e-12 made real and positive.
Vector fix_phase(Vector v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) > 1e-12) {
            v *= std::conj(v[k]) / std::abs(v[k]);
            v[k] = std::abs(v[k]);
            break;
        }
    }
    return v;
}

cplx checked_overlap(const SystemState &pre, const SystemState &post, double floor) {
    require_same_dim(pre.dim(), post.dim(), "pre/post states");
    const cplx overlap = inner(post, pre);
    if (std::abs(overlap) < floor) {
        throw Error(ErrorCode::OrthogonalPostselection,
                    "|<f|i>| = " + std::to_string(std::abs(overlap)) + " below floor " + std::to_string(floor));
    }
    return overlap;
}

WeakValue ratio(const Matrix &op, const SystemState &pre, const SystemState &post, double floor, int order) {
    require_same_dim(static_cast<int>(op.rows()), pre.dim(), "operator/state");
    const cplx overlap = checked_overlap(pre, post, floor);
    const cplx numerator = post.amplitudes().dot(op * pre.amplitudes());
    return {numerator / overlap, order};
}

}  // namespace

Observable Observable::make(const Matrix &entries) {
    if (entries.rows() != entries.cols()) {
        throw Error(ErrorCode::BadShape, "observable must be square, got " + std::to_string(entries.rows()) +
                                             "x" + std::to_string(entries.cols()));
    }
    if (entries.rows() < 2 || entries.rows() > kMaxSystemDim) {
        throw Error(ErrorCode::BadShape, "observable dimension must be in [2, 64], got " +
                                             std::to_string(entries.rows()));
    }
    const double asym = max_entry(entries - entries.adjoint());
    if (!(asym <= kHermitianTol)) {
        throw Error(ErrorCode::NotHermitian, "max |A_jk - conj(A_kj)| = " + std::to_string(asym));
    }
    return Observable(entries);
}

Observable Observable::identity(int dim) {
    return make(Matrix::Identity(dim, dim));
}

SystemState SystemState::make(const Vector &amplitudes) {
    if (amplitudes.size() < 1 || amplitudes.size() > kMaxSystemDim) {
        throw Error(ErrorCode::BadShape, "state dimension out of range: " + std::to_string(amplitudes.size()));
    }
    const double norm2 = amplitudes.squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= kNormTol)) {
        throw Error(ErrorCode::NotNormalized, "state norm^2 = " + std::to_string(norm2));
    }
    return SystemState(amplitudes);
}

SystemState SystemState::normalized(const Vector &amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorCode::NotNormalized, "cannot normalize a zero or non-finite vector");
    }
    return make(amplitudes / norm);
}

SystemState SystemState::basis(int dim, int index) {
    if (index < 0 || index >= dim) {
        throw Error(ErrorCode::BadShape, "basis index out of range");
    }
    Vector v = Vector::Zero(dim);
    v[index] = 1.0;
    return make(v);
}

cplx inner(const SystemState &a, const SystemState &b) {
    require_same_dim(a.dim(), b.dim(), "inner product");
    return a.amplitudes().dot(b.amplitudes());  // Eigen conjugates the left operand
}

Observable make_observable(const Matrix &entries) {
    return Observable::make(entries);
}

EigenSystem eigendecompose(const Observable &a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    EigenSystem out;
    const int d = a.dim();
    out.eigenvalues.reserve(d);
    out.eigenvectors.reserve(d);
    for (int k = 0; k < d; ++k) {
        out.eigenvalues.push_back(solver.eigenvalues()[k]);
        out.eigenvectors.push_back(SystemState::normalized(fix_phase(solver.eigenvectors().col(k))));
    }
    return out;
}

WeakValue weak_value(const Observable &a, const SystemState &pre, const SystemState &post, double overlap_floor) {
    return ratio(a.matrix(), pre, post, overlap_floor, 1);
}

WeakValue weak_moment(const Observable &a, int n, const SystemState &pre, const SystemState &post,
                      double overlap_floor) {
    if (n < 1) {
        throw Error(ErrorCode::BadInput, "moment order must be positive");
    }
    Matrix power = a.matrix();
    for (int k = 1; k < n; ++k) {
        power = (power * a.matrix()).eval();
    }
    return ratio(power, pre, post, overlap_floor, n);
}

WeakValue joint_weak_value(const Observable &a, const Observable &b, const SystemState &pre,
                           const SystemState &post, double overlap_floor) {
    if (!check_commuting(a, b)) {
        throw Error(ErrorCode::NonCommuting, "joint weak value needs [A, B] = 0");
    }
    return ratio(a.matrix() * b.matrix(), pre, post, overlap_floor, 2);
}

bool check_commuting(const Observable &a, const Observable &b) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    const double scale = std::max(max_entry(a.matrix()), max_entry(b.matrix()));
    const Matrix comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    return max_entry(comm) <= 1e-10 * scale * scale;
}

SharedEigenbasis simultaneous_eigenbasis(const Observable &a, const Observable &b, std::uint64_t seed) {
    if (!check_commuting(a, b)) {
        throw Error(ErrorCode::NonCommuting, "simultaneous eigenbasis needs [A, B] = 0");
    }
    constexpr int kAttempts = 5;
    constexpr double kTol = 1e-9;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mix(0.3, 1.7);
    const int d = a.dim();

    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const double c = mix(rng);
        const Matrix combined = a.matrix() + c * b.matrix();
        Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (combined + combined.adjoint()));

        SharedEigenbasis out;
        bool ok = true;
        for (int k = 0; k < d && ok; ++k) {
            const Vector v = fix_phase(solver.eigenvectors().col(k));
            const double alpha = v.dot(a.matrix() * v).real();
            const double beta = v.dot(b.matrix() * v).real();
            const double err_a = (a.matrix() * v - alpha * v).cwiseAbs().maxCoeff();
            const double err_b = (b.matrix() * v - beta * v).cwiseAbs().maxCoeff();
            ok = err_a <= kTol && err_b <= kTol;
            out.basis.push_back(SystemState::normalized(v));
            out.alpha.push_back(alpha);
            out.beta.push_back(beta);
        }
        if (ok) {
            return out;
        }
    }
    throw Error(ErrorCode::DegeneracyUnresolved,
                "no mixing constant separated the shared eigenspaces after 5 attempts");
}

SharedEigenbasis simultaneous_eigenbasis(const Observable &a, const std::optional<Observable> &b,
                                         std::uint64_t seed) {
    if (b) {
        return simultaneous_eigenbasis(a, *b, seed);
    }
    const EigenSystem eig = eigendecompose(a);
    SharedEigenbasis out;
    out.basis = eig.eigenvectors;
    out.alpha = eig.eigenvalues;
    out.beta.assign(eig.eigenvalues.size(), 0.0);
    return out;
}

}  // namespace weakoam
