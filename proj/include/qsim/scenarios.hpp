// Scripted replications of the thought experiments: superposition vs
// mixture, interference terms, EPR singlet correlations, the Bell-inequality
// violation with its LHV enumeration bound, the Mermin square, Wigner's
// friend, the no-signaling check, sequential hang-ups, and decoherence decay.
//
// Every empirical estimate has a matching analytic value computed through an
// independent code path (density-matrix predictions vs observer-engine
// sampling). Reports are deterministic for a fixed seed.

#pragma once

#include <string>
#include <vector>

#include "qsim/observer.hpp"
#include "qsim/report.hpp"

namespace qsim {

/// One shared {0,1} value assignment for the three properties A, B, C.
struct LhvAssignment {
    std::array<int, 3> values;  // v(A), v(B), v(C)

    /// Number of the pairs (A,B), (A,C), (B,C) with equal values: 1 or 3.
    int same_count() const;
};

/// Enumerates all 8 assignments and returns the minimum same-count, which is
/// exactly 1: any distribution over shared assignments therefore satisfies
/// P_same(A,B) + P_same(A,C) + P_same(B,C) >= 1.
double lhv_oracle();

/// Per-outcome coherent probability |Σj μj·ν_ij|² and incoherent sum
/// Σj |μj|²·|ν_ij|² for a normalized μ and a unitary change of basis ν
/// (ν_ij = ⟨i_A|j_B⟩, columns are the B-basis vectors).
struct InterferenceRow {
    double coherent;
    double incoherent;
    double difference;
};
std::vector<InterferenceRow> interference_table(const std::vector<cplx>& mu,
                                                const Matrix& nu);

ScenarioReport scenario_mixture_vs_superposition(const ScenarioParams& params);
ScenarioReport scenario_interference(const ScenarioParams& params);
ScenarioReport scenario_epr(const ScenarioParams& params);
ScenarioReport scenario_bell(const ScenarioParams& params);
ScenarioReport scenario_mermin_square(const ScenarioParams& params);
ScenarioReport scenario_wigners_friend(const ScenarioParams& params);
ScenarioReport scenario_locality(const ScenarioParams& params);
ScenarioReport scenario_sequential(const ScenarioParams& params);
ScenarioReport scenario_decoherence(const ScenarioParams& params);

/// Registered scenario names, in the order list() reports them.
std::vector<std::string> list_scenarios();

/// Runs a scenario by name. Throws std::invalid_argument for an unknown name
/// or invalid parameters.
ScenarioReport run_scenario(const std::string& name, const ScenarioParams& params);

// Paper states used by several scenarios.

/// (|+⟩|−⟩ − |−⟩|+⟩)/√2 on a two-qubit space with factor labels U, V.
StateVector singlet_state();

/// (|+⟩|+⟩ + |−⟩|−⟩)/√2 on a two-qubit space with factor labels "1", "2".
StateVector phi_plus_state();

}  // namespace qsim
