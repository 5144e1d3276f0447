// Density matrices: pure states, proper mixtures, and reduced (improper)
// states obtained by partial trace. Every DensityMatrix is validated on
// construction: hermitian, unit trace, positive semidefinite, purity within
// [1/dim, 1].

#pragma once

#include <utility>
#include <vector>

#include "qsim/hilbert.hpp"
#include "qsim/linalg.hpp"

namespace qsim {

enum class Provenance { Pure, ProperMixture, Reduced };

std::string provenance_name(Provenance p);

struct MixtureSpec {
    // (weight, state) pairs; weights nonnegative and summing to 1.
    std::vector<std::pair<double, StateVector>> components;
};

class DensityMatrix {
public:
    DensityMatrix(CompositeSpace space, Matrix matrix, Provenance provenance);

    const CompositeSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    Provenance provenance() const { return provenance_; }
    std::size_t dimension() const { return matrix_.rows(); }

private:
    CompositeSpace space_;
    Matrix matrix_;
    Provenance provenance_;
};

/// |s⟩⟨s| for a normalized s. Throws on unnormalized input.
DensityMatrix from_pure(const StateVector& s);

/// Σk pk·|Ψk⟩⟨Ψk|. Throws if the weights do not sum to 1.
DensityMatrix from_mixture(const MixtureSpec& m);

/// Trace over every factor not in `keep`. Keeps factors in ascending index
/// order; provenance of the result is Reduced.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// Tr(ρA).
double expectation(const DensityMatrix& rho, const Observable& a);

/// Tr[ρP] for an idempotent hermitian P, clamped to [0, 1].
double outcome_probability(const DensityMatrix& rho, const Matrix& projector);

/// Tr(ρ²).
double purity(const DensityMatrix& rho);

/// Σ_{i≠j} |⟨bi|ρ|bj⟩| over an orthonormal basis. Zero iff ρ is diagonal in
/// that basis (within eps_num).
double off_diagonal_weight(const DensityMatrix& rho, const std::vector<StateVector>& basis);

/// (Tr[ρ_global·joint], Tr[ρ_mixture·joint]); unequal values certify that the
/// mixture is not equivalent to the entangled global state.
std::pair<double, double> joint_prediction_gap(const DensityMatrix& global,
                                               const MixtureSpec& mixture,
                                               const Matrix& joint_projector);

/// UρU† for unitary U.
DensityMatrix evolve(const DensityMatrix& rho, const Matrix& u);

}  // namespace qsim
