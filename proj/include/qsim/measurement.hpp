// Von Neumann premeasurement, FAPP reduction, environment-induced
// decoherence, and pointer-basis selection.
//
// A premeasurement correlates the eigenstates of a target observable with
// pointer states of one or more ancilla factors:
//   Σ ci|φi⟩ ⊗ |ready…⟩  →  Σ ci|φi⟩ ⊗ |pointer_i…⟩
// The map is only specified on the ready slice; the full unitary extends it
// by Gram–Schmidt completion over the standard basis.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsim/density.hpp"
#include "qsim/hilbert.hpp"

namespace qsim {

/// One ancilla (apparatus, environment, or brain) attached to a measurement:
/// which factor it lives on, its ready state, and one pointer state per
/// outcome. Apparatus and brain pointers must be orthonormal; environment
/// pointers only need to be normalized (their overlap is exactly the Z(t)
/// coherence coefficient, and a fully degenerate environment is legal).
struct PointerRecord {
    std::size_t factor;
    StateVector ready;
    std::vector<StateVector> pointers;

    /// Record with basis pointer states e0..e(n-1) and ready = e0.
    static PointerRecord basis_pointers(const CompositeSpace& space, std::size_t factor,
                                        std::size_t outcome_count);
};

struct MeasurementSpec {
    std::size_t target = 0;
    Observable observable;
    PointerRecord apparatus;
    std::optional<PointerRecord> environment;
};

/// Outcome label keyed by eigenvalue sign: "+" for positive, "-" for negative.
std::string outcome_label(double eigenvalue);

/// Validates a spec against a space. `strict_orthonormal` controls whether a
/// record's pointers must be mutually orthogonal (true for apparatus/brain).
void validate_pointer_record(const CompositeSpace& space, const PointerRecord& record,
                             std::size_t outcome_count, bool strict_orthonormal);
void validate_spec(const CompositeSpace& space, const MeasurementSpec& spec);

/// Core premeasurement action on a raw amplitude vector that lies in the
/// ready slice of every record: Σk (⊗r |rk⟩⟨r_ready|)·(Pk on target)·amps.
std::vector<cplx> premeasure_action(const CompositeSpace& space, std::size_t target,
                                    const Observable& observable,
                                    std::span<const PointerRecord> records,
                                    std::span<const cplx> amps);

/// Σ ci|φi⟩|A0⟩(|E0⟩) → Σ ci|φi⟩|Ai⟩(|Ei⟩). Throws if an ancilla is not in
/// its ready state or the spec is inconsistent with the state's space.
StateVector premeasure(const StateVector& state, const MeasurementSpec& spec);

/// Explicit unitary matrix realizing the premeasurement: the von Neumann map
/// on the ready slice, Gram–Schmidt completion over the standard basis
/// elsewhere. Intended for verification at small dimensions.
Matrix premeasure_unitary(const CompositeSpace& space, std::size_t target,
                          const Observable& observable,
                          std::span<const PointerRecord> records);
Matrix premeasure_unitary(const CompositeSpace& space, const MeasurementSpec& spec);

/// Reduction postulate: P|Ψ⟩ / ‖P|Ψ⟩‖. Throws on a zero-probability
/// projection.
StateVector reduce(const StateVector& state, const Matrix& projector);

/// Z(t) model for the environment overlap ⟨E2(t)|E1(t)⟩.
///   parametric: Z(t) = exp(−t/τd), the simplest monotone decay.
///   finite:     two seeded random branch Hamiltonians on a d_E-dimensional
///               environment; Z(t) = ⟨E0|exp(+iH2·t)·exp(−iH1·t)|E0⟩.
class EnvironmentModel {
public:
    enum class Mode { Parametric, Finite };

    static EnvironmentModel parametric(double tau_d);
    static EnvironmentModel finite(std::size_t env_dim, std::uint64_t seed);

    Mode mode() const { return mode_; }
    double tau() const { return tau_; }
    std::size_t env_dim() const { return env_dim_; }

    cplx z(double t) const;

    /// Finite mode only: amplitudes of |E_branch(t)⟩ = U_branch(t)|e0⟩.
    std::vector<cplx> environment_amplitudes(std::size_t branch, double t) const;

private:
    EnvironmentModel() = default;

    Mode mode_ = Mode::Parametric;
    double tau_ = 1.0;
    std::size_t env_dim_ = 0;
    std::array<EigenSystem, 2> branch_hamiltonians_;
};

/// ρ_SA(t) in the branch basis {|φ1 A1⟩, |φ2 A2⟩}:
///   [[|α|²,        Z(t)·αβ*],
///    [Z̄(t)·α*β,    |β|²    ]]
DensityMatrix decohered_reduced_matrix(cplx alpha, cplx beta, const EnvironmentModel& env,
                                       double t);

/// First candidate observable commuting with the apparatus–environment
/// interaction Hamiltonian (max-abs commutator ≤ eps_num). Its eigenbasis is
/// the preferred basis. Throws std::domain_error("no pointer basis") when no
/// candidate commutes.
Observable pointer_basis(const Matrix& h_int, const std::vector<Observable>& candidates);

struct BasisAmbiguityReport {
    StateVector premeasured;                      // α|+⟩z|⇑⟩ + β|−⟩z|⇓⟩
    bool single_branch = false;                   // one amplitude numerically zero
    std::array<double, 2> schmidt_coefficients{}; // descending
    bool x_rewriting_exists = false;              // degenerate Schmidt spectrum
    // Max component deviation between the pointer-basis form and the x-basis
    // rewriting with superposed apparatus states; set only when the rewriting
    // exists.
    std::optional<double> rewriting_deviation;
};

/// Builds the entangled system–apparatus state for amplitudes (α, β) and
/// analyzes whether a product-correlated rewriting in the x-basis (with
/// superposed apparatus pointer states) exists.
BasisAmbiguityReport basis_ambiguity_check(cplx alpha, cplx beta);

}  // namespace qsim
