// The Convivial Solipsism engine.
//
// A BranchedState is the never-reduced universal state: a superposition over
// labeled branches, one per outcome history. Splitting on a measurement event
// replaces every leaf branch by its children (one per outcome with nonzero
// weight) and is equivalent to applying the premeasurement unitary to the
// global vector. The state is a value: splits return new states, and nothing
// an observer does ever mutates one.
//
// Observers carry an identity, an awareness record (per-event outcome
// constraints; labels, not kets), and a
// private seeded random stream. Hanging up samples a daughter branch by Born
// weight among the branches consistent with the observer's awareness; a query
// of another observer is a measurement of that observer's brain record and
// can never contradict the asker's own correlated awareness.
//
// There is deliberately no operation comparing two observers' awareness.
// God's-eye accessors (branch lists, awareness paths) exist only under
// QSIM_ENABLE_INTROSPECTION.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsim/measurement.hpp"
#include "qsim/rng.hpp"

namespace qsim {

struct Participant {
    std::string observer_id;
    PointerRecord record;  // the observer's brain factor for this event
};

struct MeasurementEvent {
    std::string id;
    MeasurementSpec spec;
    std::vector<Participant> participants;
};

struct AwarenessEntry {
    std::uint64_t seq;     // observer-local, strictly increasing
    std::string event_id;  // the event this entry constrains
    std::string label;
    bool via_query;
};

class BranchedState {
public:
    struct Branch {
        std::vector<std::pair<std::string, std::string>> path;  // (event-id, label)
        cplx amplitude;
        StateVector component;  // normalized
    };

    /// Single-branch state with empty path. The global vector must be
    /// normalized.
    static BranchedState initial(StateVector global);

    /// New state with every leaf branch split on the event. Throws on a
    /// reused event id, a non-ready ancilla, or an inconsistent spec; checks
    /// that the new global vector equals the premeasurement action applied to
    /// the old one.
    BranchedState split(const MeasurementEvent& event) const;

    const CompositeSpace& space() const { return space_; }

    std::size_t event_count() const { return events_.size(); }
    bool has_event(const std::string& id) const;
    const MeasurementEvent& event(const std::string& id) const;
    std::size_t event_index(const std::string& id) const;
    const std::vector<MeasurementEvent>& events() const { return events_; }

    /// Σ amplitude·component over all branches.
    StateVector global_vector() const;

    /// Born weights per outcome label of `event_id`, restricted to branches
    /// consistent with the given awareness constraints. Labels appear in the
    /// event's outcome order; weights are raw squared amplitudes (not
    /// renormalized). This is a relative-state query: it never looks at more
    /// than one observer's constraints.
    std::vector<std::pair<std::string, double>> outcome_weights(
        const std::vector<AwarenessEntry>& awareness, const std::string& event_id) const;

    /// Normalized Σ amplitude·component over the branches consistent with the
    /// constraints. Throws if no branch is consistent.
    StateVector relative_vector(const std::vector<AwarenessEntry>& awareness) const;

    /// Canonical textual form: factors, events, and branches in lexicographic
    /// path order with fixed number formatting. Byte-identical serializations
    /// certify that nothing mutated the state.
    std::string serialize() const;

    /// Checks the structural invariants: unit total weight, normalized
    /// components, sibling orthogonality, uniform-depth paths matching the
    /// event log. Throws std::logic_error on violation.
    void validate() const;

    std::size_t branch_count() const { return branches_.size(); }

#ifdef QSIM_ENABLE_INTROSPECTION
    const std::vector<Branch>& branches() const { return branches_; }
#endif

private:
    BranchedState() = default;

    CompositeSpace space_;
    std::vector<Branch> branches_;
    std::vector<MeasurementEvent> events_;
};

struct RefinedAnalysis {
    bool interference_accessible = false;
    // Sampling distribution over outcome labels when the reduced matrix is
    // diagonal across pointer sectors (label order = event outcome order).
    std::vector<std::pair<std::string, double>> sector_probabilities;
    // Largest off-sector matrix entry found.
    double off_diagonal_weight = 0.0;
    // Interference path: reduced-matrix eigenvalues (descending) and the
    // pointer-sector label each eigenvector overlaps most.
    std::vector<double> eigen_probabilities;
    std::vector<std::string> eigen_labels;
};

/// Builds ρ from the constraint-restricted normalized global vector, partial
/// traces the `unobservable` factors, and reports either the pointer-sector
/// distribution (diagonal case) or the eigenbasis distribution (interference
/// case). The event's apparatus factor may not be traced out.
RefinedAnalysis analyze_refined(const BranchedState& state, const std::string& event_id,
                                const std::vector<std::size_t>& unobservable,
                                const std::vector<AwarenessEntry>& awareness);

struct RefinedOutcome {
    std::string label;
    bool interference_accessible = false;
    RefinedAnalysis analysis;
};

class Observer {
public:
    Observer(std::string id, std::uint64_t seed);

    const std::string& id() const { return id_; }

    /// Born-samples one daughter branch of the awareness-consistent candidate
    /// set and appends the outcome to awareness. The state is untouched.
    std::string hang_up(const BranchedState& state, const std::string& event_id);

    /// Decoherence-first formulation: samples from the reduced density matrix of the
    /// candidate-restricted state after tracing out `unobservable`. With the
    /// environment traced out this reproduces hang_up's distribution; when
    /// interference is accessible the eigenbasis is sampled instead and the
    /// outcome is flagged.
    RefinedOutcome refined_hang_up(const BranchedState& state, const std::string& event_id,
                                   const std::vector<std::size_t>& unobservable);

    /// Measurement of the askee's brain record for the event: answers with an
    /// outcome label Born-distributed over the asker's candidate branches,
    /// which can never contradict the asker's correlated awareness. Only the
    /// askee's identity is consulted. Extends the asker's awareness.
    std::string query(const BranchedState& state, const Observer& askee,
                      const std::string& event_id);

    bool has_hung_up(const std::string& event_id) const;

    /// Canonical textual form: id, awareness entries, RNG state.
    std::string serialize() const;

#ifdef QSIM_ENABLE_INTROSPECTION
    /// Ordered copy of the awareness record (test-only introspection).
    std::vector<std::pair<std::string, std::string>> awareness_path() const {
        std::vector<std::pair<std::string, std::string>> path;
        for (const AwarenessEntry& e : awareness_) path.emplace_back(e.event_id, e.label);
        return path;
    }
#endif

private:
    std::string sample_and_record(const BranchedState& state, const std::string& event_id,
                                  bool via_query);

    std::string id_;
    std::vector<AwarenessEntry> awareness_;
    std::uint64_t next_seq_ = 0;
    Rng rng_;
};

}  // namespace qsim
