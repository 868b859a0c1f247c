#pragma once

// Finite-dimensional operator algebra for the measured system: validated
// observables and states, eigendecomposition, and weak values.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace weakoam {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kDefaultOverlapFloor = 1e-10;
inline constexpr int kMaxSystemDim = 64;

/// Hermitian d x d matrix, 2 <= d <= 64.
class Observable {
 public:
    static Observable make(const Matrix &entries);
    static Observable identity(int dim);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix &matrix() const { return entries_; }

 private:
    explicit Observable(Matrix m) : entries_(std::move(m)) {}
    Matrix entries_;
};

/// Unit-norm pure state of the system.
class SystemState {
 public:
    /// Rejects vectors whose norm deviates from 1 by more than 1e-12.
    static SystemState make(const Vector &amplitudes);
    /// Rescales to unit norm first; rejects the zero vector.
    static SystemState normalized(const Vector &amplitudes);
    static SystemState basis(int dim, int index);

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }

 private:
    explicit SystemState(Vector v) : amps_(std::move(v)) {}
    Vector amps_;
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    std::vector<SystemState> eigenvectors;
};

struct WeakValue {
    cplx value;
    int order = 1;
};

/// Shared eigenbasis of two commuting observables: A|k> = alpha[k]|k>,
/// B|k> = beta[k]|k>.
struct SharedEigenbasis {
    std::vector<SystemState> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
};

Observable make_observable(const Matrix &entries);

/// Eigenvalues ascending. Each eigenvector is rotated so its first component
/// with modulus above 1e-12 is real and positive.
EigenSystem eigendecompose(const Observable &a);

/// <f|A|i> / <f|i>.
WeakValue weak_value(const Observable &a, const SystemState &pre, const SystemState &post,
                     double overlap_floor = kDefaultOverlapFloor);

/// <f|A^n|i> / <f|i>, A^n by repeated multiplication.
WeakValue weak_moment(const Observable &a, int n, const SystemState &pre, const SystemState &post,
                      double overlap_floor = kDefaultOverlapFloor);

/// <f|AB|i> / <f|i> for commuting A, B.
WeakValue joint_weak_value(const Observable &a, const Observable &b, const SystemState &pre,
                           const SystemState &post, double overlap_floor = kDefaultOverlapFloor);

/// max|AB - BA| <= 1e-10 * max(|A|_max, |B|_max)^2.
bool check_commuting(const Observable &a, const Observable &b);

/// Diagonalizes A + cB for a random mixing constant c, retrying with a new c
/// (up to 5 attempts) when the resulting vectors are not eigenvectors of both.
SharedEigenbasis simultaneous_eigenbasis(const Observable &a, const Observable &b,
                                         std::uint64_t seed = 0x5eed);

/// Basis for a single observable; beta is all zeros (B absent).
SharedEigenbasis simultaneous_eigenbasis(const Observable &a, const std::optional<Observable> &b,
                                         std::uint64_t seed = 0x5eed);

/// <a|b>, conjugating the first argument.
cplx inner(const SystemState &a, const SystemState &b);

}  // namespace weakoam
