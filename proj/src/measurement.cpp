#include "qsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsim/rng.hpp"

namespace qsim {

PointerRecord PointerRecord::basis_pointers(const CompositeSpace& space, std::size_t factor,
                                            std::size_t outcome_count) {
    const CompositeSpace sub = space.subspace(factor);
    if (sub.dimension() < outcome_count)
        throw std::invalid_argument("ancilla factor too small for outcome count");
    PointerRecord rec;
    rec.factor = factor;
    rec.ready = StateVector::basis_state(sub, 0);
    for (std::size_t k = 0; k < outcome_count; ++k)
        rec.pointers.push_back(StateVector::basis_state(sub, k));
    return rec;
}

std::string outcome_label(double eigenvalue) {
    if (eigenvalue > eps_num) return "+";
    if (eigenvalue < -eps_num) return "-";
    return "0";
}

void validate_pointer_record(const CompositeSpace& space, const PointerRecord& record,
                             std::size_t outcome_count, bool strict_orthonormal) {
    if (record.factor >= space.factor_count())
        throw std::out_of_range("pointer record: factor index out of range");
    const std::size_t d = space.factor(record.factor).dim;
    if (record.ready.dimension() != d)
        throw std::invalid_argument("pointer record: ready state dimension mismatch");
    if (!record.ready.is_normalized())
        throw std::invalid_argument("pointer record: ready state not normalized");
    if (record.pointers.size() != outcome_count)
        throw std::invalid_argument("pointer record: eigenvalue/pointer count mismatch");
    for (const StateVector& p : record.pointers) {
        if (p.dimension() != d)
            throw std::invalid_argument("pointer record: pointer state dimension mismatch");
        if (!p.is_normalized())
            throw std::invalid_argument("pointer record: pointer state not normalized");
    }
    if (strict_orthonormal) {
        for (std::size_t a = 0; a < record.pointers.size(); ++a)
            for (std::size_t b = a + 1; b < record.pointers.size(); ++b)
                if (std::abs(inner(record.pointers[a], record.pointers[b])) > eps_num)
                    throw std::invalid_argument("pointer record: pointers not orthonormal");
    }
}

void validate_spec(const CompositeSpace& space, const MeasurementSpec& spec) {
    if (spec.target >= space.factor_count())
        throw std::out_of_range("measurement spec: target index out of range");
    if (spec.observable.dimension() != space.factor(spec.target).dim)
        throw std::invalid_argument("measurement spec: observable/target dimension mismatch");
    const std::size_t outcomes = spec.observable.outcome_count();
    validate_pointer_record(space, spec.apparatus, outcomes, /*strict_orthonormal=*/true);
    if (spec.apparatus.factor == spec.target)
        throw std::invalid_argument("measurement spec: apparatus cannot be the target");
    if (spec.environment) {
        validate_pointer_record(space, *spec.environment, outcomes,
                                /*strict_orthonormal=*/false);
        if (spec.environment->factor == spec.target ||
            spec.environment->factor == spec.apparatus.factor)
            throw std::invalid_argument("measurement spec: duplicate ancilla factor");
    }
}

namespace {

Matrix outer_product(const StateVector& u, const StateVector& v) {
    Matrix m(u.dimension(), v.dimension());
    for (std::size_t i = 0; i < u.dimension(); ++i)
        for (std::size_t j = 0; j < v.dimension(); ++j)
            m(i, j) = u.amplitude(i) * std::conj(v.amplitude(j));
    return m;
}

bool factor_in_state(const CompositeSpace& space, std::size_t factor,
                     const StateVector& single, std::span<const cplx> amps) {
    // True when (|s⟩⟨s| on `factor` ⊗ I)·amps == amps, i.e. the factor is in
    // the product state |s⟩.
    const std::vector<cplx> projected =
        apply_on_factor(outer_product(single, single), space, factor, amps);
    double diff = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i)
        diff = std::max(diff, std::abs(projected[i] - amps[i]));
    return diff <= eps_norm;
}

}  // namespace

std::vector<cplx> premeasure_action(const CompositeSpace& space, std::size_t target,
                                    const Observable& observable,
                                    std::span<const PointerRecord> records,
                                    std::span<const cplx> amps) {
    std::vector<cplx> out(amps.size(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < observable.outcome_count(); ++k) {
        std::vector<cplx> part =
            apply_on_factor(observable.projector(k), space, target, amps);
        for (const PointerRecord& rec : records) {
            part = apply_on_factor(outer_product(rec.pointers[k], rec.ready), space,
                                   rec.factor, part);
        }
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
    }
    return out;
}

StateVector premeasure(const StateVector& state, const MeasurementSpec& spec) {
    const CompositeSpace& space = state.space();
    validate_spec(space, spec);
    std::vector<PointerRecord> records{spec.apparatus};
    if (spec.environment) records.push_back(*spec.environment);
    for (const PointerRecord& rec : records)
        if (!factor_in_state(space, rec.factor, rec.ready, state.amplitudes()))
            throw std::invalid_argument("premeasure: ancilla factor " +
                                        space.factor(rec.factor).label +
                                        " is not in its ready state");
    return StateVector(space,
                       premeasure_action(space, spec.target, spec.observable, records,
                                         state.amplitudes()));
}

namespace {

// Orthonormal spanning set of a projector's range (Gram–Schmidt over its
// columns).
std::vector<std::vector<cplx>> range_basis(const Matrix& projector) {
    std::vector<std::vector<cplx>> basis;
    for (std::size_t c = 0; c < projector.cols(); ++c) {
        std::vector<cplx> v(projector.rows());
        for (std::size_t r = 0; r < projector.rows(); ++r) v[r] = projector(r, c);
        for (const auto& b : basis) {
            const cplx ip = dot_conj(b, v);
            for (std::size_t r = 0; r < v.size(); ++r) v[r] -= ip * b[r];
        }
        const double n = norm(v);
        if (n > 1e-8) {
            for (cplx& x : v) x /= n;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

// Product vector over the whole space with vec_f on each factor.
std::vector<cplx> assemble_product(const CompositeSpace& space,
                                   const std::vector<std::vector<cplx>>& per_factor) {
    std::vector<cplx> out(space.dimension());
    for (std::size_t flat = 0; flat < space.dimension(); ++flat) {
        const std::vector<std::size_t> multi = space.multi_index(flat);
        cplx a{1.0, 0.0};
        for (std::size_t f = 0; f < space.factor_count(); ++f) a *= per_factor[f][multi[f]];
        out[flat] = a;
    }
    return out;
}

void gs_append(std::vector<std::vector<cplx>>& set, std::vector<cplx> v) {
    for (const auto& b : set) {
        const cplx ip = dot_conj(b, v);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] -= ip * b[r];
    }
    const double n = norm(v);
    if (n > 1e-8) {
        for (cplx& x : v) x /= n;
        set.push_back(std::move(v));
    }
}

}  // namespace

Matrix premeasure_unitary(const CompositeSpace& space, std::size_t target,
                          const Observable& observable,
                          std::span<const PointerRecord> records) {
    const std::size_t dim = space.dimension();
    std::vector<bool> is_ancilla(space.factor_count(), false);
    for (const PointerRecord& rec : records) is_ancilla[rec.factor] = true;

    // Orthonormal (domain, image) pairs on the ready slice: for each outcome
    // sector of the target and each basis state of the bystander factors,
    //   |w⟩|rest⟩|ready…⟩  →  |w⟩|rest⟩|pointer_k…⟩.
    std::vector<std::vector<cplx>> domain, image;
    for (std::size_t k = 0; k < observable.outcome_count(); ++k) {
        const auto sector = range_basis(observable.projector(k));
        // Enumerate bystander factor configurations via a multi-index over
        // non-target, non-ancilla factors.
        std::vector<std::size_t> bystanders;
        for (std::size_t f = 0; f < space.factor_count(); ++f)
            if (f != target && !is_ancilla[f]) bystanders.push_back(f);
        std::size_t configs = 1;
        for (std::size_t f : bystanders) configs *= space.factor(f).dim;

        for (const auto& w : sector) {
            for (std::size_t cfg = 0; cfg < configs; ++cfg) {
                std::vector<std::vector<cplx>> dom_parts(space.factor_count()),
                    img_parts(space.factor_count());
                std::size_t rem = cfg;
                for (std::size_t b = bystanders.size(); b-- > 0;) {
                    const std::size_t f = bystanders[b];
                    const std::size_t d = space.factor(f).dim;
                    std::vector<cplx> e(d, cplx{0.0, 0.0});
                    e[rem % d] = 1.0;
                    rem /= d;
                    dom_parts[f] = e;
                    img_parts[f] = std::move(e);
                }
                dom_parts[target] = w;
                img_parts[target] = w;
                for (const PointerRecord& rec : records) {
                    dom_parts[rec.factor] = rec.ready.amplitudes();
                    img_parts[rec.factor] = rec.pointers[k].amplitudes();
                }
                domain.push_back(assemble_product(space, dom_parts));
                image.push_back(assemble_product(space, img_parts));
            }
        }
    }

    // Complete both orthonormal systems over the standard basis and pair the
    // completions in order of acceptance.
    std::vector<std::vector<cplx>> dom_full = domain, img_full = image;
    for (std::size_t m = 0; m < dim; ++m) {
        std::vector<cplx> e(dim, cplx{0.0, 0.0});
        e[m] = 1.0;
        gs_append(dom_full, e);
        gs_append(img_full, std::move(e));
    }
    if (dom_full.size() != dim || img_full.size() != dim)
        throw std::logic_error("premeasure_unitary: completion failed");

    Matrix u(dim, dim);
    for (std::size_t p = 0; p < dim; ++p)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                u(i, j) += img_full[p][i] * std::conj(dom_full[p][j]);
    return u;
}

Matrix premeasure_unitary(const CompositeSpace& space, const MeasurementSpec& spec) {
    validate_spec(space, spec);
    std::vector<PointerRecord> records{spec.apparatus};
    if (spec.environment) records.push_back(*spec.environment);
    return premeasure_unitary(space, spec.target, spec.observable, records);
}

StateVector reduce(const StateVector& state, const Matrix& projector) {
    if (projector.rows() != state.dimension() || projector.cols() != state.dimension())
        throw std::invalid_argument("reduce: projector dimension mismatch");
    const StateVector projected = apply(projector, state);
    const double p = projected.norm();
    if (p * p < eps_prune)
        throw std::domain_error("reduce: zero-probability projection");
    return projected.normalized();
}

EnvironmentModel EnvironmentModel::parametric(double tau_d) {
    if (tau_d <= 0.0) throw std::invalid_argument("decay time must be positive");
    EnvironmentModel m;
    m.mode_ = Mode::Parametric;
    m.tau_ = tau_d;
    return m;
}

EnvironmentModel EnvironmentModel::finite(std::size_t env_dim, std::uint64_t seed) {
    if (env_dim < 2) throw std::invalid_argument("environment dimension must be at least 2");
    EnvironmentModel m;
    m.mode_ = Mode::Finite;
    m.env_dim_ = env_dim;
    for (std::size_t b = 0; b < 2; ++b) {
        Rng rng = Rng::substream(seed, b);
        Matrix h(env_dim, env_dim);
        for (std::size_t i = 0; i < env_dim; ++i) {
            h(i, i) = rng.normal();
            for (std::size_t j = i + 1; j < env_dim; ++j) {
                const cplx v{rng.normal() / std::sqrt(2.0), rng.normal() / std::sqrt(2.0)};
                h(i, j) = v;
                h(j, i) = std::conj(v);
            }
        }
        m.branch_hamiltonians_[b] = eigh(h);
    }
    return m;
}

std::vector<cplx> EnvironmentModel::environment_amplitudes(std::size_t branch,
                                                           double t) const {
    if (mode_ != Mode::Finite)
        throw std::logic_error("environment_amplitudes: parametric model has no vectors");
    if (branch >= 2) throw std::out_of_range("environment branch index");
    const EigenSystem& es = branch_hamiltonians_[branch];
    std::vector<cplx> out(env_dim_, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < env_dim_; ++k) {
        const cplx coeff = std::exp(cplx{0.0, -es.values[k] * t}) * std::conj(es.vectors(0, k));
        for (std::size_t i = 0; i < env_dim_; ++i) out[i] += coeff * es.vectors(i, k);
    }
    return out;
}

cplx EnvironmentModel::z(double t) const {
    if (t < 0.0) throw std::invalid_argument("Z(t) requires t >= 0");
    if (mode_ == Mode::Parametric) return cplx{std::exp(-t / tau_), 0.0};
    const std::vector<cplx> e1 = environment_amplitudes(0, t);
    const std::vector<cplx> e2 = environment_amplitudes(1, t);
    return dot_conj(e2, e1);
}

DensityMatrix decohered_reduced_matrix(cplx alpha, cplx beta, const EnvironmentModel& env,
                                       double t) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > eps_norm)
        throw std::invalid_argument("decohered_reduced_matrix: invalid amplitudes");
    const cplx zt = env.z(t);
    Matrix m(2, 2);
    m(0, 0) = std::norm(alpha);
    m(1, 1) = std::norm(beta);
    m(0, 1) = zt * alpha * std::conj(beta);
    m(1, 0) = std::conj(m(0, 1));
    return DensityMatrix(CompositeSpace::single(FactorRole::System, "SA", 2), std::move(m),
                         Provenance::Reduced);
}

Observable pointer_basis(const Matrix& h_int, const std::vector<Observable>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("pointer_basis: no candidates");
    if (!h_int.is_hermitian(eps_num))
        throw std::invalid_argument("pointer_basis: interaction Hamiltonian not hermitian");
    const std::size_t app_dim = candidates.front().dimension();
    if (h_int.rows() % app_dim != 0)
        throw std::invalid_argument("pointer_basis: Hamiltonian/apparatus dimension mismatch");
    const std::size_t env_dim = h_int.rows() / app_dim;
    for (const Observable& cand : candidates) {
        if (cand.dimension() != app_dim)
            throw std::invalid_argument("pointer_basis: candidate dimension mismatch");
        const Matrix extended = Matrix::kron(cand.matrix(), Matrix::identity(env_dim));
        if (commutator(extended, h_int).max_abs() <= eps_num) return cand;
    }
    throw std::domain_error("no pointer basis");
}

BasisAmbiguityReport basis_ambiguity_check(cplx alpha, cplx beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > eps_norm)
        throw std::invalid_argument("basis_ambiguity_check: invalid amplitudes");

    const CompositeSpace space = qubit_space("S").tensor(
        CompositeSpace::single(FactorRole::Apparatus, "A", 2));

    MeasurementSpec spec;
    spec.target = 0;
    spec.observable = pauli_z();
    spec.apparatus = PointerRecord::basis_pointers(space, 1, 2);

    const StateVector system(qubit_space("S"), {alpha, beta});
    const StateVector ready =
        StateVector::basis_state(CompositeSpace::single(FactorRole::Apparatus, "A", 2), 0);
    const StateVector entangled = premeasure(tensor(system, ready), spec);

    BasisAmbiguityReport report;
    report.premeasured = entangled;
    report.single_branch = std::norm(alpha) < eps_prune || std::norm(beta) < eps_prune;
    double sa = std::abs(alpha), sb = std::abs(beta);
    if (sa < sb) std::swap(sa, sb);
    report.schmidt_coefficients = {sa, sb};
    report.x_rewriting_exists = !report.single_branch && std::abs(sa - sb) <= eps_num;

    if (report.x_rewriting_exists) {
        // With β = α·e^{iφ}:
        //   α|0⟩|⇑⟩ + β|1⟩|⇓⟩ = α·( |+⟩x⊗t₊ + |−⟩x⊗t₋ ),  t± = (|⇑⟩ ± e^{iφ}|⇓⟩)/√2,
        // so each x-eigenstate pairs with a superposed apparatus state.
        const cplx phase = beta / alpha;
        const double r = 1.0 / std::sqrt(2.0);
        const CompositeSpace app = CompositeSpace::single(FactorRole::Apparatus, "A", 2);
        const StateVector plus_x(qubit_space("S"), {r, r});
        const StateVector minus_x(qubit_space("S"), {r, -r});
        const StateVector superposed_up(app, {r, r * phase});
        const StateVector superposed_down(app, {r, -r * phase});
        const StateVector rewritten =
            (tensor(plus_x, superposed_up) + tensor(minus_x, superposed_down)) * (alpha);
        report.rewriting_deviation = entangled.max_abs_diff(rewritten);
    }
    return report;
}

}  // namespace qsim
