#include "qsim/observer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsim {

namespace {

Matrix outer_product(const StateVector& u, const StateVector& v) {
    Matrix m(u.dimension(), v.dimension());
    for (std::size_t i = 0; i < u.dimension(); ++i)
        for (std::size_t j = 0; j < v.dimension(); ++j)
            m(i, j) = u.amplitude(i) * std::conj(v.amplitude(j));
    return m;
}

std::vector<PointerRecord> all_records(const MeasurementEvent& ev) {
    std::vector<PointerRecord> records{ev.spec.apparatus};
    if (ev.spec.environment) records.push_back(*ev.spec.environment);
    for (const Participant& p : ev.participants) records.push_back(p.record);
    return records;
}

std::vector<std::string> event_labels(const MeasurementEvent& ev) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < ev.spec.observable.outcome_count(); ++k)
        labels.push_back(outcome_label(ev.spec.observable.eigenvalue(k)));
    return labels;
}

bool branch_consistent(const BranchedState::Branch& branch,
                       const std::vector<AwarenessEntry>& awareness) {
    for (const AwarenessEntry& entry : awareness) {
        for (const auto& [event_id, label] : branch.path) {
            if (event_id == entry.event_id && label != entry.label) return false;
        }
    }
    return true;
}

void format_cplx(std::string& out, cplx v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
    out += buf;
}

}  // namespace

BranchedState BranchedState::initial(StateVector global) {
    if (!global.is_normalized())
        throw std::invalid_argument("initial state must be normalized");
    BranchedState s;
    s.space_ = global.space();
    s.branches_.push_back(Branch{{}, cplx{1.0, 0.0}, std::move(global)});
    return s;
}

bool BranchedState::has_event(const std::string& id) const {
    for (const MeasurementEvent& ev : events_)
        if (ev.id == id) return true;
    return false;
}

const MeasurementEvent& BranchedState::event(const std::string& id) const {
    for (const MeasurementEvent& ev : events_)
        if (ev.id == id) return ev;
    throw std::invalid_argument("event unknown: " + id);
}

std::size_t BranchedState::event_index(const std::string& id) const {
    for (std::size_t i = 0; i < events_.size(); ++i)
        if (events_[i].id == id) return i;
    throw std::invalid_argument("event unknown: " + id);
}

StateVector BranchedState::global_vector() const {
    StateVector sum = StateVector::zero(space_);
    for (const Branch& b : branches_) sum = sum + b.component * b.amplitude;
    return sum;
}

BranchedState BranchedState::split(const MeasurementEvent& event) const {
    if (event.id.empty()) throw std::invalid_argument("event id must not be empty");
    if (has_event(event.id)) throw std::invalid_argument("reused event-id: " + event.id);
    validate_spec(space_, event.spec);

    std::set<std::size_t> used{event.spec.target, event.spec.apparatus.factor};
    if (event.spec.environment) {
        if (!used.insert(event.spec.environment->factor).second)
            throw std::invalid_argument("duplicate ancilla factor in event");
    }
    std::set<std::string> participant_ids;
    for (const Participant& p : event.participants) {
        validate_pointer_record(space_, p.record, event.spec.observable.outcome_count(),
                                /*strict_orthonormal=*/true);
        if (!used.insert(p.record.factor).second)
            throw std::invalid_argument("duplicate ancilla factor in event");
        if (!participant_ids.insert(p.observer_id).second)
            throw std::invalid_argument("duplicate participant: " + p.observer_id);
    }

    const std::vector<std::string> labels = event_labels(event);
    {
        std::set<std::string> unique(labels.begin(), labels.end());
        if (unique.size() != labels.size())
            throw std::invalid_argument("event outcome labels are not distinct");
    }

    const std::vector<PointerRecord> records = all_records(event);
    const std::size_t outcomes = event.spec.observable.outcome_count();

    BranchedState next;
    next.space_ = space_;
    next.events_ = events_;
    next.events_.push_back(event);

    for (const Branch& parent : branches_) {
        // Every ancilla must be in its ready state on this leaf.
        for (const PointerRecord& rec : records) {
            const Matrix ready_proj = outer_product(rec.ready, rec.ready);
            const std::vector<cplx> projected = apply_on_factor(
                ready_proj, space_, rec.factor, parent.component.amplitudes());
            double diff = 0.0;
            for (std::size_t i = 0; i < projected.size(); ++i)
                diff = std::max(diff,
                                std::abs(projected[i] - parent.component.amplitude(i)));
            if (diff > eps_norm)
                throw std::invalid_argument("non-ready ancilla: factor " +
                                            space_.factor(rec.factor).label + " in event " +
                                            event.id);
        }

        for (std::size_t k = 0; k < outcomes; ++k) {
            std::vector<cplx> child = apply_on_factor(event.spec.observable.projector(k),
                                                      space_, event.spec.target,
                                                      parent.component.amplitudes());
            for (const PointerRecord& rec : records)
                child = apply_on_factor(outer_product(rec.pointers[k], rec.ready), space_,
                                        rec.factor, child);
            const double n = norm(child);
            if (n * n < eps_prune) continue;  // numerically impossible outcome
            for (cplx& a : child) a /= n;

            Branch b;
            b.path = parent.path;
            b.path.emplace_back(event.id, labels[k]);
            b.amplitude = parent.amplitude * n;
            b.component = StateVector(space_, std::move(child));
            next.branches_.push_back(std::move(b));
        }
    }

    std::sort(next.branches_.begin(), next.branches_.end(),
              [](const Branch& x, const Branch& y) { return x.path < y.path; });

    // Unitarity: the branch bookkeeping must reproduce the premeasurement
    // action on the global vector.
    const StateVector expected(
        space_, premeasure_action(space_, event.spec.target, event.spec.observable, records,
                                  global_vector().amplitudes()));
    if (next.global_vector().max_abs_diff(expected) > eps_norm)
        throw std::logic_error("split: branch decomposition deviates from unitary action");

    return next;
}

std::vector<std::pair<std::string, double>> BranchedState::outcome_weights(
    const std::vector<AwarenessEntry>& awareness, const std::string& event_id) const {
    const MeasurementEvent& ev = event(event_id);
    const std::size_t idx = event_index(event_id);
    const std::vector<std::string> labels = event_labels(ev);

    std::vector<std::pair<std::string, double>> weights;
    for (const std::string& label : labels) weights.emplace_back(label, 0.0);

    for (const Branch& b : branches_) {
        if (!branch_consistent(b, awareness)) continue;
        const auto& [eid, label] = b.path.at(idx);
        if (eid != event_id) throw std::logic_error("branch path out of sync with event log");
        for (auto& [l, w] : weights)
            if (l == label) w += std::norm(b.amplitude);
    }
    return weights;
}

StateVector BranchedState::relative_vector(const std::vector<AwarenessEntry>& awareness) const {
    StateVector sum = StateVector::zero(space_);
    bool any = false;
    for (const Branch& b : branches_) {
        if (!branch_consistent(b, awareness)) continue;
        sum = sum + b.component * b.amplitude;
        any = true;
    }
    if (!any) throw std::logic_error("empty candidate set: state corruption");
    return sum.normalized();
}

std::string BranchedState::serialize() const {
    std::string out = "qsim-branched-state v1\n";
    out += "factors " + std::to_string(space_.factor_count()) + "\n";
    for (const Factor& f : space_.factors())
        out += "  " + role_name(f.role) + " " + f.label + " " + std::to_string(f.dim) + "\n";
    out += "events " + std::to_string(events_.size()) + "\n";
    for (const MeasurementEvent& ev : events_) {
        out += "  " + ev.id + " target=" + std::to_string(ev.spec.target) +
               " apparatus=" + std::to_string(ev.spec.apparatus.factor);
        if (ev.spec.environment)
            out += " environment=" + std::to_string(ev.spec.environment->factor);
        for (const Participant& p : ev.participants)
            out += " brain=" + p.observer_id + ":" + std::to_string(p.record.factor);
        out += "\n";
    }
    out += "branches " + std::to_string(branches_.size()) + "\n";
    for (const Branch& b : branches_) {
        out += "  branch [";
        for (std::size_t i = 0; i < b.path.size(); ++i) {
            if (i) out += " ";
            out += b.path[i].first + ":" + b.path[i].second;
        }
        out += "] amp ";
        format_cplx(out, b.amplitude);
        out += "\n";
        for (std::size_t i = 0; i < b.component.dimension(); ++i) {
            const cplx a = b.component.amplitude(i);
            if (a == cplx{0.0, 0.0}) continue;
            out += "    " + std::to_string(i) + " ";
            format_cplx(out, a);
            out += "\n";
        }
    }
    return out;
}

void BranchedState::validate() const {
    double total = 0.0;
    for (const Branch& b : branches_) {
        total += std::norm(b.amplitude);
        if (!b.component.is_normalized())
            throw std::logic_error("branch component not normalized");
        if (b.path.size() != events_.size())
            throw std::logic_error("branch path depth does not match event log");
        for (std::size_t i = 0; i < b.path.size(); ++i)
            if (b.path[i].first != events_[i].id)
                throw std::logic_error("branch path order does not match event log");
    }
    if (std::abs(total - 1.0) > eps_norm)
        throw std::logic_error("total branch weight deviates from 1");
    if (std::abs(global_vector().norm() - 1.0) > eps_norm)
        throw std::logic_error("global vector norm deviates from 1");
    // Sibling branches (equal paths except the last label) must be orthogonal.
    for (std::size_t a = 0; a < branches_.size(); ++a) {
        for (std::size_t b = a + 1; b < branches_.size(); ++b) {
            const auto& pa = branches_[a].path;
            const auto& pb = branches_[b].path;
            if (pa.empty() || pa.size() != pb.size()) continue;
            if (!std::equal(pa.begin(), pa.end() - 1, pb.begin())) continue;
            if (std::abs(inner(branches_[a].component, branches_[b].component)) > eps_num)
                throw std::logic_error("sibling branches are not orthogonal");
        }
    }
}

RefinedAnalysis analyze_refined(const BranchedState& state, const std::string& event_id,
                                const std::vector<std::size_t>& unobservable,
                                const std::vector<AwarenessEntry>& awareness) {
    const MeasurementEvent& ev = state.event(event_id);
    const CompositeSpace& space = state.space();

    std::set<std::size_t> traced(unobservable.begin(), unobservable.end());
    for (std::size_t f : traced)
        if (f >= space.factor_count())
            throw std::out_of_range("analyze_refined: factor index out of range");
    if (traced.count(ev.spec.apparatus.factor))
        throw std::invalid_argument(
            "analyze_refined: the event's pointer record cannot be unobservable");

    std::vector<std::size_t> keep;
    for (std::size_t f = 0; f < space.factor_count(); ++f)
        if (!traced.count(f)) keep.push_back(f);

    const StateVector psi = state.relative_vector(awareness);
    const DensityMatrix reduced = partial_trace(from_pure(psi), keep);

    // Apparatus factor position inside the kept space.
    std::size_t app_kept = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i] == ev.spec.apparatus.factor) app_kept = i;

    const std::size_t outcomes = ev.spec.observable.outcome_count();
    std::vector<Matrix> sector(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k)
        sector[k] = embed(outer_product(ev.spec.apparatus.pointers[k],
                                        ev.spec.apparatus.pointers[k]),
                          reduced.space(), app_kept);

    RefinedAnalysis out;
    for (std::size_t k = 0; k < outcomes; ++k)
        for (std::size_t l = 0; l < outcomes; ++l) {
            if (k == l) continue;
            out.off_diagonal_weight = std::max(
                out.off_diagonal_weight, (sector[k] * reduced.matrix() * sector[l]).max_abs());
        }
    out.interference_accessible = out.off_diagonal_weight > eps_diag;

    const std::vector<std::string> labels = event_labels(ev);
    double total = 0.0;
    std::vector<double> probs(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k) {
        probs[k] = std::clamp((reduced.matrix() * sector[k]).trace().real(), 0.0, 1.0);
        total += probs[k];
    }
    for (std::size_t k = 0; k < outcomes; ++k)
        out.sector_probabilities.emplace_back(labels[k], total > 0.0 ? probs[k] / total : 0.0);

    if (out.interference_accessible) {
        const EigenSystem es = eigh(reduced.matrix());
        // Descending by eigenvalue; drop numerically-zero weights.
        for (std::size_t k = es.values.size(); k-- > 0;) {
            const double p = std::max(es.values[k], 0.0);
            if (p < eps_prune) continue;
            out.eigen_probabilities.push_back(p);
            std::size_t best = 0;
            double best_overlap = -1.0;
            for (std::size_t s = 0; s < outcomes; ++s) {
                cplx overlap{0.0, 0.0};
                for (std::size_t i = 0; i < reduced.dimension(); ++i)
                    for (std::size_t j = 0; j < reduced.dimension(); ++j)
                        overlap += std::conj(es.vectors(i, k)) * sector[s](i, j) *
                                   es.vectors(j, k);
                if (overlap.real() > best_overlap) {
                    best_overlap = overlap.real();
                    best = s;
                }
            }
            out.eigen_labels.push_back(labels[best]);
        }
    }
    return out;
}

namespace {

// FNV-1a; std::hash would be implementation-defined and break reproducibility.
std::uint64_t hash_id(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

Observer::Observer(std::string id, std::uint64_t seed)
    : id_(std::move(id)), rng_(Rng::substream(seed, hash_id(id_))) {}

bool Observer::has_hung_up(const std::string& event_id) const {
    for (const AwarenessEntry& e : awareness_)
        if (!e.via_query && e.event_id == event_id) return true;
    return false;
}

std::string Observer::sample_and_record(const BranchedState& state,
                                        const std::string& event_id, bool via_query) {
    const auto weights = state.outcome_weights(awareness_, event_id);
    double total = 0.0;
    std::vector<double> w;
    for (const auto& [label, weight] : weights) {
        w.push_back(weight);
        total += weight;
    }
    if (total <= 0.0) throw std::logic_error("empty candidate set: state corruption");
    const std::size_t k = rng_.pick(w);
    const std::string label = weights[k].first;
    awareness_.push_back(AwarenessEntry{next_seq_++, event_id, label, via_query});
    return label;
}

std::string Observer::hang_up(const BranchedState& state, const std::string& event_id) {
    if (!state.has_event(event_id)) throw std::invalid_argument("event unknown: " + event_id);
    if (has_hung_up(event_id))
        throw std::invalid_argument("already hung up on event: " + event_id);
    return sample_and_record(state, event_id, /*via_query=*/false);
}

RefinedOutcome Observer::refined_hang_up(const BranchedState& state,
                                         const std::string& event_id,
                                         const std::vector<std::size_t>& unobservable) {
    if (!state.has_event(event_id)) throw std::invalid_argument("event unknown: " + event_id);
    if (has_hung_up(event_id))
        throw std::invalid_argument("already hung up on event: " + event_id);

    RefinedOutcome out;
    out.analysis = analyze_refined(state, event_id, unobservable, awareness_);
    out.interference_accessible = out.analysis.interference_accessible;

    if (!out.interference_accessible) {
        std::vector<double> w;
        for (const auto& [label, p] : out.analysis.sector_probabilities) w.push_back(p);
        const std::size_t k = rng_.pick(w);
        out.label = out.analysis.sector_probabilities[k].first;
    } else {
        const std::size_t k = rng_.pick(out.analysis.eigen_probabilities);
        out.label = out.analysis.eigen_labels[k];
    }
    awareness_.push_back(AwarenessEntry{next_seq_++, event_id, out.label, false});
    return out;
}

std::string Observer::query(const BranchedState& state, const Observer& askee,
                            const std::string& event_id) {
    const MeasurementEvent& ev = state.event(event_id);
    const bool participated =
        std::any_of(ev.participants.begin(), ev.participants.end(),
                    [&](const Participant& p) { return p.observer_id == askee.id(); });
    if (!participated)
        throw std::invalid_argument("askee " + askee.id() + " is not a participant in event " +
                                    event_id);
    return sample_and_record(state, event_id, /*via_query=*/true);
}

std::string Observer::serialize() const {
    std::ostringstream os;
    os << "qsim-observer v1\n";
    os << "id " << id_ << "\n";
    os << "awareness " << awareness_.size() << "\n";
    for (const AwarenessEntry& e : awareness_)
        os << "  " << e.seq << " " << e.event_id << " " << e.label << " "
           << (e.via_query ? "query" : "hang-up") << "\n";
    os << "rng " << rng_.state_string() << "\n";
    return os.str();
}

}  // namespace qsim
