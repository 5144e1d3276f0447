#include "qsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qsim {

std::string role_name(FactorRole role) {
    switch (role) {
        case FactorRole::System: return "System";
        case FactorRole::Apparatus: return "Apparatus";
        case FactorRole::Environment: return "Environment";
        case FactorRole::Brain: return "Brain";
    }
    return "?";
}

CompositeSpace::CompositeSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::set<std::string> labels;
    dim_ = 1;
    for (const Factor& f : factors_) {
        if (f.dim == 0) throw std::invalid_argument("factor dimension must be positive");
        if (!labels.insert(f.label).second)
            throw std::invalid_argument("duplicate factor label: " + f.label);
        dim_ *= f.dim;
    }
}

CompositeSpace CompositeSpace::single(FactorRole role, std::string label, std::size_t dim) {
    return CompositeSpace({Factor{role, std::move(label), dim}});
}

CompositeSpace CompositeSpace::tensor(const CompositeSpace& other) const {
    std::vector<Factor> fs = factors_;
    fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
    return CompositeSpace(std::move(fs));
}

CompositeSpace CompositeSpace::subspace(std::size_t i) const {
    return CompositeSpace({factor(i)});
}

CompositeSpace CompositeSpace::keep(const std::vector<std::size_t>& indices) const {
    std::vector<std::size_t> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Factor> fs;
    for (std::size_t i : sorted) fs.push_back(factor(i));
    return CompositeSpace(std::move(fs));
}

std::size_t CompositeSpace::flat_index(std::span<const std::size_t> multi) const {
    if (multi.size() != factors_.size())
        throw std::invalid_argument("multi-index arity mismatch");
    std::size_t flat = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        if (multi[f] >= factors_[f].dim) throw std::out_of_range("multi-index out of range");
        flat = flat * factors_[f].dim + multi[f];
    }
    return flat;
}

std::vector<std::size_t> CompositeSpace::multi_index(std::size_t flat) const {
    if (flat >= dim_) throw std::out_of_range("flat index out of range");
    std::vector<std::size_t> multi(factors_.size());
    for (std::size_t f = factors_.size(); f-- > 0;) {
        multi[f] = flat % factors_[f].dim;
        flat /= factors_[f].dim;
    }
    return multi;
}

std::optional<std::size_t> CompositeSpace::find(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].label == label) return i;
    return std::nullopt;
}

bool CompositeSpace::operator==(const CompositeSpace& o) const {
    if (factors_.size() != o.factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].role != o.factors_[i].role || factors_[i].dim != o.factors_[i].dim ||
            factors_[i].label != o.factors_[i].label)
            return false;
    }
    return true;
}

StateVector::StateVector(CompositeSpace space, std::vector<cplx> amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.dimension())
        throw std::invalid_argument("amplitude count does not match space dimension");
    for (const cplx& a : amps_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("non-finite amplitude");
}

StateVector StateVector::basis_state(CompositeSpace space, std::size_t flat_index) {
    std::vector<cplx> amps(space.dimension(), cplx{0.0, 0.0});
    amps.at(flat_index) = 1.0;
    return StateVector(std::move(space), std::move(amps));
}

StateVector StateVector::zero(CompositeSpace space) {
    std::vector<cplx> amps(space.dimension(), cplx{0.0, 0.0});
    return StateVector(std::move(space), std::move(amps));
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm() * norm() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n < 1e-300) throw std::invalid_argument("cannot normalize a zero vector");
    std::vector<cplx> amps = amps_;
    for (cplx& a : amps) a /= n;
    return StateVector(space_, std::move(amps));
}

StateVector StateVector::operator+(const StateVector& o) const {
    if (amps_.size() != o.amps_.size()) throw std::invalid_argument("dimension mismatch");
    std::vector<cplx> amps(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) amps[i] = amps_[i] + o.amps_[i];
    return StateVector(space_, std::move(amps));
}

StateVector StateVector::operator-(const StateVector& o) const {
    if (amps_.size() != o.amps_.size()) throw std::invalid_argument("dimension mismatch");
    std::vector<cplx> amps(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) amps[i] = amps_[i] - o.amps_[i];
    return StateVector(space_, std::move(amps));
}

StateVector StateVector::operator*(cplx s) const {
    std::vector<cplx> amps = amps_;
    for (cplx& a : amps) a *= s;
    return StateVector(space_, std::move(amps));
}

double StateVector::max_abs_diff(const StateVector& o) const {
    if (amps_.size() != o.amps_.size()) throw std::invalid_argument("dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        m = std::max(m, std::abs(amps_[i] - o.amps_[i]));
    return m;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    CompositeSpace space = a.space().tensor(b.space());
    const std::size_t db = b.dimension();
    std::vector<cplx> amps(a.dimension() * db);
    for (std::size_t i = 0; i < a.dimension(); ++i)
        for (std::size_t j = 0; j < db; ++j) amps[i * db + j] = a.amplitude(i) * b.amplitude(j);
    return StateVector(std::move(space), std::move(amps));
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("inner: dimension mismatch");
    return dot_conj(a.amplitudes(), b.amplitudes());
}

StateVector apply(const Matrix& op, const StateVector& s) {
    if (op.cols() != s.dimension())
        throw std::invalid_argument("apply: operator/state dimension mismatch");
    return StateVector(s.space(), op.apply(s.amplitudes()));
}

Matrix projector_onto(const StateVector& s) {
    if (s.norm() < 1e-300) throw std::invalid_argument("projector_onto: zero vector");
    if (!s.is_normalized())
        throw std::invalid_argument("projector_onto: state is not normalized");
    const std::size_t n = s.dimension();
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) = s.amplitude(i) * std::conj(s.amplitude(j));
    return p;
}

Matrix embed(const Matrix& op, const CompositeSpace& space, std::size_t target) {
    if (target >= space.factor_count()) throw std::out_of_range("embed: bad factor index");
    if (op.rows() != space.factor(target).dim || op.cols() != space.factor(target).dim)
        throw std::invalid_argument("embed: operator does not match factor dimension");
    Matrix m = Matrix::identity(1);
    for (std::size_t f = 0; f < space.factor_count(); ++f) {
        m = Matrix::kron(m, f == target ? op : Matrix::identity(space.factor(f).dim));
    }
    return m;
}

std::vector<cplx> apply_on_factor(const Matrix& op, const CompositeSpace& space,
                                  std::size_t target, std::span<const cplx> amps) {
    if (target >= space.factor_count())
        throw std::out_of_range("apply_on_factor: bad factor index");
    const std::size_t d = space.factor(target).dim;
    if (op.rows() != d || op.cols() != d)
        throw std::invalid_argument("apply_on_factor: operator does not match factor dimension");
    if (amps.size() != space.dimension())
        throw std::invalid_argument("apply_on_factor: amplitude count mismatch");

    // Split the flat index as (outer, t, inner) with `inner` covering factors
    // after the target.
    std::size_t inner = 1;
    for (std::size_t f = target + 1; f < space.factor_count(); ++f)
        inner *= space.factor(f).dim;
    const std::size_t outer = space.dimension() / (inner * d);

    std::vector<cplx> out(amps.size(), cplx{0.0, 0.0});
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = o * d * inner + in;
            for (std::size_t i = 0; i < d; ++i) {
                cplx s{0.0, 0.0};
                for (std::size_t j = 0; j < d; ++j) s += op(i, j) * amps[base + j * inner];
                out[base + i * inner] = s;
            }
        }
    }
    return out;
}

Observable Observable::from_spectrum(std::vector<std::pair<double, Matrix>> spectrum) {
    if (spectrum.empty()) throw std::invalid_argument("observable needs at least one eigenvalue");
    const std::size_t n = spectrum.front().second.rows();
    Matrix sum(n, n);
    Matrix recon(n, n);
    for (const auto& [value, proj] : spectrum) {
        if (proj.rows() != n || proj.cols() != n)
            throw std::invalid_argument("projector dimension mismatch");
        if (!proj.is_hermitian())
            throw std::invalid_argument("projector is not hermitian");
        if ((proj * proj).max_abs_diff(proj) > eps_num)
            throw std::invalid_argument("projector is not idempotent");
        sum = sum + proj;
        recon = recon + proj * cplx{value, 0.0};
    }
    for (std::size_t a = 0; a < spectrum.size(); ++a)
        for (std::size_t b = a + 1; b < spectrum.size(); ++b)
            if ((spectrum[a].second * spectrum[b].second).max_abs() > eps_num)
                throw std::invalid_argument("projectors are not mutually orthogonal");
    if (!sum.is_identity(eps_num))
        throw std::invalid_argument("projectors do not resolve the identity");

    Observable obs;
    obs.matrix_ = std::move(recon);
    obs.spectrum_ = std::move(spectrum);
    return obs;
}

Observable Observable::from_basis_pair(const StateVector& plus, const StateVector& minus) {
    if (std::abs(inner(plus, minus)) > eps_num)
        throw std::invalid_argument("basis pair is not orthogonal");
    return from_spectrum({{+1.0, projector_onto(plus)}, {-1.0, projector_onto(minus)}});
}

Matrix pauli_x_matrix() {
    return Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

Matrix pauli_y_matrix() {
    return Matrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}});
}

Matrix pauli_z_matrix() {
    return Matrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

namespace {

// ±1 observable whose +1 eigenvector is (plus0, plus1).
Observable qubit_observable(const cplx plus0, const cplx plus1) {
    CompositeSpace q = qubit_space();
    const StateVector plus(q, {plus0, plus1});
    const StateVector minus(q, {std::conj(plus1), -std::conj(plus0)});
    return Observable::from_basis_pair(plus, minus);
}

}  // namespace

Observable pauli_x() {
    const double r = 1.0 / std::sqrt(2.0);
    return qubit_observable(r, r);
}

Observable pauli_y() {
    const double r = 1.0 / std::sqrt(2.0);
    return qubit_observable(r, cplx{0.0, r});
}

Observable pauli_z() { return qubit_observable(1.0, 0.0); }

CompositeSpace qubit_space(const std::string& label) {
    return CompositeSpace::single(FactorRole::System, label, 2);
}

StateVector spin_up(const CompositeSpace& space) { return StateVector::basis_state(space, 0); }
StateVector spin_down(const CompositeSpace& space) { return StateVector::basis_state(space, 1); }

namespace {

StateVector canonical_sign(StateVector v) {
    for (std::size_t i = 0; i < v.dimension(); ++i) {
        const double re = v.amplitude(i).real();
        if (re > eps_num) return v;
        if (re < -eps_num) return v * cplx{-1.0, 0.0};
    }
    return v;
}

}  // namespace

std::pair<StateVector, StateVector> rotated_spin_basis(double angle,
                                                       const CompositeSpace& space) {
    if (space.dimension() != 2)
        throw std::invalid_argument("rotated_spin_basis needs a two-dimensional space");
    const double c = std::cos(angle), s = std::sin(angle);
    StateVector plus = canonical_sign(StateVector(space, {c, s}));
    StateVector minus = canonical_sign(StateVector(space, {s, -c}));
    return {std::move(plus), std::move(minus)};
}

std::pair<StateVector, StateVector> rotated_spin_basis(double angle) {
    return rotated_spin_basis(angle, qubit_space());
}

Observable rotated_spin_observable(double angle) {
    auto [plus, minus] = rotated_spin_basis(angle);
    return Observable::from_basis_pair(plus, minus);
}

}  // namespace qsim
