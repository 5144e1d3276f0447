// Finite-dimensional labeled state spaces, state vectors, and observables.
//
// A CompositeSpace is an ordered list of factors (system, apparatus,
// environment, brain), each with its own dimension. Amplitudes are stored in
// lexicographic order over factor indices with factor 0 slowest, i.e.
// flat = ((i0·d1 + i1)·d2 + i2)·...
//
// Observables carry their spectral decomposition explicitly; the code never
// needs a general eigensolver to build them because every basis used here is
// known in closed form.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsim/linalg.hpp"

namespace qsim {

enum class FactorRole { System, Apparatus, Environment, Brain };

std::string role_name(FactorRole role);

struct Factor {
    FactorRole role;
    std::string label;  // unique within a space, e.g. "S", "A1", "B:alice:1"
    std::size_t dim;
};

class CompositeSpace {
public:
    CompositeSpace() = default;
    explicit CompositeSpace(std::vector<Factor> factors);

    static CompositeSpace single(FactorRole role, std::string label, std::size_t dim);

    std::size_t factor_count() const { return factors_.size(); }
    const Factor& factor(std::size_t i) const { return factors_.at(i); }
    const std::vector<Factor>& factors() const { return factors_; }

    std::size_t dimension() const { return dim_; }

    /// Space made of this space's factors followed by the other's.
    CompositeSpace tensor(const CompositeSpace& other) const;

    /// One-factor space consisting of factor i alone.
    CompositeSpace subspace(std::size_t i) const;

    /// Space restricted to the given factor indices (kept in ascending order).
    CompositeSpace keep(const std::vector<std::size_t>& indices) const;

    std::size_t flat_index(std::span<const std::size_t> multi) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;

    /// Index of the factor with the given label, if present.
    std::optional<std::size_t> find(const std::string& label) const;

    bool operator==(const CompositeSpace& o) const;

private:
    std::vector<Factor> factors_;
    std::size_t dim_ = 1;
};

class StateVector {
public:
    StateVector() = default;
    StateVector(CompositeSpace space, std::vector<cplx> amplitudes);

    static StateVector basis_state(CompositeSpace space, std::size_t flat_index);
    static StateVector zero(CompositeSpace space);

    const CompositeSpace& space() const { return space_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(std::size_t i) const { return amps_.at(i); }

    double norm() const { return qsim::norm(amps_); }
    bool is_normalized(double tol = eps_norm) const;
    StateVector normalized() const;

    StateVector operator+(const StateVector& o) const;
    StateVector operator-(const StateVector& o) const;
    StateVector operator*(cplx s) const;

    double max_abs_diff(const StateVector& o) const;

private:
    CompositeSpace space_;
    std::vector<cplx> amps_;
};

/// Tensor product; the result space concatenates the factor lists.
StateVector tensor(const StateVector& a, const StateVector& b);

/// ⟨a|b⟩, conjugate-linear in the first argument. Throws on dimension mismatch.
cplx inner(const StateVector& a, const StateVector& b);

/// Matrix action op·s. Throws on dimension mismatch.
StateVector apply(const Matrix& op, const StateVector& s);

/// |s⟩⟨s| for a normalized s.
Matrix projector_onto(const StateVector& s);

/// Operator acting as `op` on factor `target` and as identity elsewhere.
Matrix embed(const Matrix& op, const CompositeSpace& space, std::size_t target);

/// In-place style embedded action on a raw amplitude vector: cheaper than
/// building the full matrix for large composite spaces.
std::vector<cplx> apply_on_factor(const Matrix& op, const CompositeSpace& space,
                                  std::size_t target, std::span<const cplx> amps);

class Observable {
public:
    /// Builds from explicit spectral data. Validates that the projectors are
    /// mutually orthogonal, idempotent, and resolve the identity, and stores
    /// the reconstructed matrix Σ λk·P(ak).
    static Observable from_spectrum(std::vector<std::pair<double, Matrix>> spectrum);

    /// ±1 observable from an orthonormal basis pair (plus gets +1).
    static Observable from_basis_pair(const StateVector& plus, const StateVector& minus);

    const Matrix& matrix() const { return matrix_; }
    std::size_t dimension() const { return matrix_.rows(); }
    const std::vector<std::pair<double, Matrix>>& spectrum() const { return spectrum_; }
    std::size_t outcome_count() const { return spectrum_.size(); }
    double eigenvalue(std::size_t k) const { return spectrum_.at(k).first; }
    const Matrix& projector(std::size_t k) const { return spectrum_.at(k).second; }

private:
    Matrix matrix_;
    std::vector<std::pair<double, Matrix>> spectrum_;
};

// Spin-1/2 toolbox used throughout.

Matrix pauli_x_matrix();
Matrix pauli_y_matrix();
Matrix pauli_z_matrix();

Observable pauli_x();
Observable pauli_y();
Observable pauli_z();

/// Default one-qubit system space.
CompositeSpace qubit_space(const std::string& label = "S");

StateVector spin_up(const CompositeSpace& space);    // |+⟩_z
StateVector spin_down(const CompositeSpace& space);  // |−⟩_z

/// Basis pair for the axis obtained by the in-plane rotation convention
///   |+⟩_θ = cosθ·|+⟩_z + sinθ·|−⟩_z,
///   |−⟩_θ = sinθ·|+⟩_z − cosθ·|−⟩_z,
/// each sign-fixed so its first component with nonzero real part is positive.
/// θ = π/3 and θ = −π/3 reproduce the u- and v-axis amplitude tables.
std::pair<StateVector, StateVector> rotated_spin_basis(double angle,
                                                       const CompositeSpace& space);
std::pair<StateVector, StateVector> rotated_spin_basis(double angle);

/// ±1 spin observable along the rotated axis.
Observable rotated_spin_observable(double angle);

}  // namespace qsim
