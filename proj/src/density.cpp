#include "qsim/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsim {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Pure: return "pure";
        case Provenance::ProperMixture: return "proper-mixture";
        case Provenance::Reduced: return "reduced";
    }
    return "?";
}

namespace {

double purity_of(const Matrix& m) {
    // Tr(ρ²) for hermitian ρ: Σ_{ij} |ρ_ij|².
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return s;
}

}  // namespace

DensityMatrix::DensityMatrix(CompositeSpace space, Matrix matrix, Provenance provenance)
    : space_(std::move(space)), matrix_(std::move(matrix)), provenance_(provenance) {
    const std::size_t n = matrix_.rows();
    if (n != matrix_.cols() || n != space_.dimension())
        throw std::invalid_argument("density matrix does not match its space");
    if (!matrix_.is_hermitian(eps_num))
        throw std::invalid_argument("density matrix is not hermitian");
    if (std::abs(matrix_.trace() - cplx{1.0, 0.0}) > eps_num)
        throw std::invalid_argument("density matrix trace is not 1");
    // PSD with a small negative floor for roundoff on reduced matrices.
    const EigenSystem es = eigh(matrix_);
    if (es.values.front() < -eps_norm)
        throw std::invalid_argument("density matrix is not positive semidefinite");
    const double p = purity_of(matrix_);
    if (p < 1.0 / static_cast<double>(n) - eps_num || p > 1.0 + eps_num)
        throw std::invalid_argument("density matrix purity out of range");
}

DensityMatrix from_pure(const StateVector& s) {
    if (!s.is_normalized())
        throw std::invalid_argument("from_pure: state is not normalized");
    return DensityMatrix(s.space(), projector_onto(s), Provenance::Pure);
}

DensityMatrix from_mixture(const MixtureSpec& m) {
    if (m.components.empty()) throw std::invalid_argument("from_mixture: empty mixture");
    double total = 0.0;
    const std::size_t n = m.components.front().second.dimension();
    Matrix rho(n, n);
    for (const auto& [weight, state] : m.components) {
        if (weight < -eps_num) throw std::invalid_argument("from_mixture: negative weight");
        if (state.dimension() != n)
            throw std::invalid_argument("from_mixture: component dimension mismatch");
        if (!state.is_normalized())
            throw std::invalid_argument("from_mixture: component is not normalized");
        total += weight;
        const auto& amps = state.amplitudes();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rho(i, j) += weight * amps[i] * std::conj(amps[j]);
    }
    if (std::abs(total - 1.0) > eps_num)
        throw std::invalid_argument("from_mixture: weights do not sum to 1");
    return DensityMatrix(m.components.front().second.space(), std::move(rho),
                         Provenance::ProperMixture);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    const CompositeSpace& space = rho.space();
    std::vector<bool> kept(space.factor_count(), false);
    for (std::size_t k : keep) {
        if (k >= space.factor_count())
            throw std::out_of_range("partial_trace: factor index out of range");
        if (kept[k]) throw std::invalid_argument("partial_trace: duplicate factor index");
        kept[k] = true;
    }

    std::vector<std::size_t> keep_sorted, traced;
    for (std::size_t f = 0; f < space.factor_count(); ++f)
        (kept[f] ? keep_sorted : traced).push_back(f);

    CompositeSpace out_space = space.keep(keep_sorted);
    const std::size_t dk = out_space.dimension();
    std::size_t dt = 1;
    for (std::size_t f : traced) dt *= space.factor(f).dim;

    // Map (kept multi-index, traced multi-index) back to a flat index of the
    // full space.
    auto full_index = [&](std::size_t kp, std::size_t tr) {
        std::vector<std::size_t> multi(space.factor_count());
        for (std::size_t f = keep_sorted.size(); f-- > 0;) {
            multi[keep_sorted[f]] = kp % space.factor(keep_sorted[f]).dim;
            kp /= space.factor(keep_sorted[f]).dim;
        }
        for (std::size_t f = traced.size(); f-- > 0;) {
            multi[traced[f]] = tr % space.factor(traced[f]).dim;
            tr /= space.factor(traced[f]).dim;
        }
        return space.flat_index(multi);
    };

    Matrix out(dk, dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
            cplx s{0.0, 0.0};
            for (std::size_t e = 0; e < dt; ++e)
                s += rho.matrix()(full_index(a, e), full_index(b, e));
            out(a, b) = s;
        }
    return DensityMatrix(std::move(out_space), std::move(out), Provenance::Reduced);
}

double expectation(const DensityMatrix& rho, const Observable& a) {
    if (a.dimension() != rho.dimension())
        throw std::invalid_argument("expectation: dimension mismatch");
    return (rho.matrix() * a.matrix()).trace().real();
}

double outcome_probability(const DensityMatrix& rho, const Matrix& projector) {
    if (projector.rows() != rho.dimension() || projector.cols() != rho.dimension())
        throw std::invalid_argument("outcome_probability: dimension mismatch");
    if (!projector.is_hermitian(eps_num) ||
        (projector * projector).max_abs_diff(projector) > eps_num)
        throw std::invalid_argument("outcome_probability: not a projector");
    const double p = (rho.matrix() * projector).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) { return purity_of(rho.matrix()); }

double off_diagonal_weight(const DensityMatrix& rho, const std::vector<StateVector>& basis) {
    const std::size_t n = rho.dimension();
    if (basis.size() != n)
        throw std::invalid_argument("off_diagonal_weight: basis does not span the space");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx ip = inner(basis[i], basis[j]);
            const cplx want = i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(ip - want) > eps_num)
                throw std::invalid_argument("off_diagonal_weight: basis is not orthonormal");
        }
    }
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<cplx> rho_bi = rho.matrix().apply(basis[i].amplitudes());
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            w += std::abs(dot_conj(basis[j].amplitudes(), rho_bi));
        }
    }
    return w;
}

std::pair<double, double> joint_prediction_gap(const DensityMatrix& global,
                                               const MixtureSpec& mixture,
                                               const Matrix& joint_projector) {
    const DensityMatrix mixed = from_mixture(mixture);
    if (mixed.dimension() != global.dimension())
        throw std::invalid_argument("joint_prediction_gap: dimension mismatch");
    return {outcome_probability(global, joint_projector),
            outcome_probability(mixed, joint_projector)};
}

DensityMatrix evolve(const DensityMatrix& rho, const Matrix& u) {
    if (u.rows() != rho.dimension() || u.cols() != rho.dimension())
        throw std::invalid_argument("evolve: dimension mismatch");
    if (!u.is_unitary(eps_num)) throw std::invalid_argument("evolve: matrix is not unitary");
    return DensityMatrix(rho.space(), u * rho.matrix() * u.adjoint(), rho.provenance());
}

}  // namespace qsim
