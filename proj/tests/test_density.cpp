#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsim/density.hpp"
#include "qsim/rng.hpp"
#include "qsim/scenarios.hpp"

using namespace qsim;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

StateVector random_state(const CompositeSpace& space, Rng& rng) {
    std::vector<cplx> amps(space.dimension());
    for (cplx& a : amps) a = cplx{rng.normal(), rng.normal()};
    return StateVector(space, amps).normalized();
}

Matrix random_unitary(std::size_t n, Rng& rng) {
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v{rng.normal(), rng.normal()};
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return unitary_from_hamiltonian(h, 1.0);
}

}  // namespace

TEST_CASE("from_pure: balanced state, basis state, outer-product oracle") {
    const CompositeSpace q = qubit_space();
    const DensityMatrix balanced = from_pure(StateVector(q, {kR, kR}));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(balanced.matrix()(i, j) - cplx{0.5, 0.0}) < 1e-12);
    CHECK(balanced.provenance() == Provenance::Pure);

    const DensityMatrix up = from_pure(spin_up(q));
    CHECK(up.matrix().max_abs_diff(Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}})) < 1e-15);

    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const StateVector s = random_state(q, rng);
        const DensityMatrix rho = from_pure(s);
        const cplx alpha = s.amplitude(0), beta = s.amplitude(1);
        CHECK(std::abs(rho.matrix()(0, 1) - alpha * std::conj(beta)) < 1e-12);
        CHECK(std::abs(rho.matrix()(1, 0) - std::conj(alpha) * beta) < 1e-12);
    }

    CHECK_THROWS_AS(from_pure(StateVector(q, {1.0, 1.0})), std::invalid_argument);
}

TEST_CASE("from_mixture: diagonal case, single component, summation oracle") {
    const CompositeSpace q = qubit_space();
    const DensityMatrix half = from_mixture({{{0.5, spin_up(q)}, {0.5, spin_down(q)}}});
    CHECK(half.matrix().max_abs_diff(Matrix::from_rows({{0.5, 0.0}, {0.0, 0.5}})) < 1e-12);
    CHECK(half.provenance() == Provenance::ProperMixture);

    Rng rng(32);
    const StateVector s = random_state(q, rng);
    CHECK(from_mixture({{{1.0, s}}}).matrix().max_abs_diff(from_pure(s).matrix()) < 1e-12);

    // Three-component qutrit mixture against a raw weighted outer-product sum.
    const CompositeSpace qutrit = CompositeSpace::single(FactorRole::System, "T", 3);
    const double w[3] = {0.5, 0.3, 0.2};
    std::vector<StateVector> comps;
    for (int k = 0; k < 3; ++k) comps.push_back(random_state(qutrit, rng));
    Matrix oracle(3, 3);
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                oracle(i, j) +=
                    w[k] * comps[k].amplitude(i) * std::conj(comps[k].amplitude(j));
    const DensityMatrix mixed =
        from_mixture({{{w[0], comps[0]}, {w[1], comps[1]}, {w[2], comps[2]}}});
    CHECK(mixed.matrix().max_abs_diff(oracle) < 1e-12);

    CHECK_THROWS_AS(from_mixture({{{0.6, spin_up(q)}, {0.6, spin_down(q)}}}),
                    std::invalid_argument);
}

TEST_CASE("partial_trace: singlet, product states, and the double-sum oracle") {
    const DensityMatrix singlet = from_pure(singlet_state());
    const DensityMatrix reduced = partial_trace(singlet, {0});
    CHECK(reduced.matrix().max_abs_diff(Matrix::identity(2) * cplx{0.5, 0.0}) < 1e-12);
    CHECK(reduced.provenance() == Provenance::Reduced);
    CHECK(std::abs(reduced.matrix().trace() - cplx{1.0, 0.0}) < 1e-12);

    Rng rng(33);
    const CompositeSpace a = qubit_space("a");
    const CompositeSpace b = CompositeSpace::single(FactorRole::System, "b", 3);
    const StateVector sa = random_state(a, rng);
    const StateVector sb = random_state(b, rng);
    const DensityMatrix product = from_pure(tensor(sa, sb));
    CHECK(partial_trace(product, {0}).matrix().max_abs_diff(from_pure(sa).matrix()) < 1e-12);
    CHECK(partial_trace(product, {1}).matrix().max_abs_diff(from_pure(sb).matrix()) < 1e-12);

    // Entangled 2x3 bipartite state: element-wise index-summation oracle.
    const CompositeSpace ab = a.tensor(b);
    const StateVector psi = random_state(ab, rng);
    const DensityMatrix rho = from_pure(psi);
    const DensityMatrix left = partial_trace(rho, {0});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t e = 0; e < 3; ++e)
                s += psi.amplitude(i * 3 + e) * std::conj(psi.amplitude(j * 3 + e));
            CHECK(std::abs(left.matrix()(i, j) - s) < 1e-12);
        }
    const DensityMatrix right = partial_trace(rho, {1});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t e = 0; e < 2; ++e)
                s += psi.amplitude(e * 3 + i) * std::conj(psi.amplitude(e * 3 + j));
            CHECK(std::abs(right.matrix()(i, j) - s) < 1e-12);
        }

    CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {5}), std::out_of_range);
}

TEST_CASE("partial_trace preserves trace, hermiticity, positivity") {
    Rng rng(34);
    const CompositeSpace space =
        qubit_space("a").tensor(CompositeSpace::single(FactorRole::System, "b", 3))
            .tensor(qubit_space("c"));
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix rho = from_pure(random_state(space, rng));
        for (const std::vector<std::size_t>& keep :
             {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}}) {
            const DensityMatrix red = partial_trace(rho, keep);
            CHECK(std::abs(red.matrix().trace() - cplx{1.0, 0.0}) < 1e-10);
            CHECK(red.matrix().is_hermitian(1e-10));
            const EigenSystem es = eigh(red.matrix());
            CHECK(es.values.front() > -1e-9);
        }
    }
}

TEST_CASE("expectation: symmetry, eigenstates, spectral-sum oracle") {
    const CompositeSpace q = qubit_space();
    const DensityMatrix maximally_mixed =
        from_mixture({{{0.5, spin_up(q)}, {0.5, spin_down(q)}}});
    CHECK(expectation(maximally_mixed, pauli_z()) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(expectation(from_pure(spin_up(q)), pauli_z()) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(35);
    for (int rep = 0; rep < 20; ++rep) {
        const DensityMatrix rho = from_pure(random_state(q, rng));
        for (const Observable& obs : {pauli_x(), pauli_y(), pauli_z()}) {
            double spectral_sum = 0.0;
            for (const auto& [value, proj] : obs.spectrum())
                spectral_sum += value * (rho.matrix() * proj).trace().real();
            CHECK(expectation(rho, obs) == doctest::Approx(spectral_sum).epsilon(1e-10));
            CHECK(std::abs(expectation(rho, obs)) < 1.0 + 1e-10);
        }
    }
}

TEST_CASE("outcome_probability: reduced singlet, eigenstates, joint projector") {
    const DensityMatrix reduced = partial_trace(from_pure(singlet_state()), {0});
    CHECK(outcome_probability(reduced, projector_onto(spin_up(qubit_space("U")))) ==
          doctest::Approx(0.5).epsilon(1e-12));

    CHECK(outcome_probability(from_pure(spin_up(qubit_space())),
                              projector_onto(spin_down(qubit_space()))) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Balanced two-spin state with a z⊗u joint projector.
    const DensityMatrix rho = from_pure(phi_plus_state());
    const auto [plus_u, minus_u] = rotated_spin_basis(std::numbers::pi / 3.0);
    const Matrix joint =
        Matrix::kron(projector_onto(spin_up(qubit_space())), projector_onto(plus_u));
    CHECK(outcome_probability(rho, joint) == doctest::Approx(0.125).epsilon(1e-10));

    // Probabilities over a complete projector set sum to 1.
    double total = 0.0;
    for (const StateVector& first : {spin_up(qubit_space()), spin_down(qubit_space())})
        for (const StateVector& second : {plus_u, minus_u})
            total += outcome_probability(
                rho, Matrix::kron(projector_onto(first), projector_onto(second)));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(outcome_probability(rho, Matrix::kron(pauli_x_matrix(), pauli_x_matrix())),
                    std::invalid_argument);
}

TEST_CASE("purity: pure states, maximally mixed, diagonal algebra") {
    const CompositeSpace q = qubit_space();
    CHECK(purity(from_pure(spin_up(q))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(from_mixture({{{0.5, spin_up(q)}, {0.5, spin_down(q)}}})) ==
          doctest::Approx(0.5).epsilon(1e-12));

    for (const double p : {0.1, 0.3, 0.7}) {
        const DensityMatrix rho = from_mixture({{{p, spin_up(q)}, {1.0 - p, spin_down(q)}}});
        CHECK(purity(rho) == doctest::Approx(p * p + (1 - p) * (1 - p)).epsilon(1e-12));
    }
}

TEST_CASE("off_diagonal_weight in the natural and rotated bases") {
    const CompositeSpace q = qubit_space();
    const std::vector<StateVector> z_basis{spin_up(q), spin_down(q)};
    const std::vector<StateVector> x_basis{StateVector(q, {kR, kR}),
                                           StateVector(q, {kR, -kR})};

    const DensityMatrix diagonal = from_mixture({{{0.5, spin_up(q)}, {0.5, spin_down(q)}}});
    CHECK(off_diagonal_weight(diagonal, z_basis) == doctest::Approx(0.0).epsilon(1e-12));

    const DensityMatrix balanced = from_pure(StateVector(q, {kR, kR}));
    CHECK(off_diagonal_weight(balanced, z_basis) == doctest::Approx(1.0).epsilon(1e-12));

    // Change-of-basis oracle: that same matrix is diagonal in the x basis.
    CHECK(off_diagonal_weight(balanced, x_basis) < 1e-12);

    CHECK_THROWS_AS(off_diagonal_weight(balanced, {spin_up(q), spin_up(q)}),
                    std::invalid_argument);
}

TEST_CASE("joint_prediction_gap separates the singlet from the z-definite mixture") {
    const DensityMatrix singlet = from_pure(singlet_state());
    const StateVector up_u = spin_up(qubit_space("U")), down_u = spin_down(qubit_space("U"));
    const StateVector up_v = spin_up(qubit_space("V")), down_v = spin_down(qubit_space("V"));
    const MixtureSpec mixture{{{0.5, tensor(up_u, down_v)}, {0.5, tensor(down_u, up_v)}}};

    const Matrix plus_x = projector_onto(StateVector(qubit_space(), {kR, kR}));
    const auto [g1, m1] = joint_prediction_gap(singlet, mixture, Matrix::kron(plus_x, plus_x));
    CHECK(g1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m1 == doctest::Approx(0.25).epsilon(1e-12));

    const auto [g2, m2] = joint_prediction_gap(singlet, mixture, Matrix::identity(4));
    CHECK(g2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));

    // Both agree on the defining axis: direct trace oracle.
    const Matrix joint_z = Matrix::kron(projector_onto(spin_up(qubit_space())),
                                        projector_onto(spin_down(qubit_space())));
    const auto [g3, m3] = joint_prediction_gap(singlet, mixture, joint_z);
    CHECK(g3 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m3 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("diagonal reduced states of entangled systems are never pure") {
    Rng rng(36);
    for (int rep = 0; rep < 20; ++rep) {
        // Both squared amplitudes bounded away from 0.
        const double p = 0.1 + 0.8 * rng.uniform();
        const cplx a{std::sqrt(p), 0.0}, b{std::sqrt(1.0 - p), 0.0};
        const CompositeSpace two = qubit_space("s").tensor(qubit_space("e"));
        std::vector<cplx> amps(4, cplx{0.0, 0.0});
        amps[0] = a;   // |0⟩|0⟩
        amps[3] = b;   // |1⟩|1⟩
        const DensityMatrix reduced =
            partial_trace(from_pure(StateVector(two, amps)), {0});
        CHECK(purity(reduced) < 1.0 - 1e-10);
        CHECK(std::abs(reduced.matrix()(0, 1)) < 1e-12);
    }
}

TEST_CASE("superposition probabilities carry interference terms") {
    Rng rng(37);
    const CompositeSpace q3 = CompositeSpace::single(FactorRole::System, "S", 3);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix nu = random_unitary(3, rng);
        std::vector<cplx> mu(3);
        double n2 = 0.0;
        for (cplx& m : mu) {
            m = cplx{rng.normal(), rng.normal()};
            n2 += std::norm(m);
        }
        for (cplx& m : mu) m /= std::sqrt(n2);

        std::vector<cplx> amps(3, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) amps[i] += mu[j] * nu(i, j);
        const DensityMatrix rho = from_pure(StateVector(q3, amps).normalized());

        double max_gap = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            cplx coherent_amp{0.0, 0.0};
            double incoherent = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                coherent_amp += mu[j] * nu(i, j);
                incoherent += std::norm(mu[j]) * std::norm(nu(i, j));
            }
            const double born = outcome_probability(
                rho, projector_onto(StateVector::basis_state(q3, i)));
            CHECK(born == doctest::Approx(std::norm(coherent_amp)).epsilon(1e-10));
            max_gap = std::max(max_gap, std::abs(std::norm(coherent_amp) - incoherent));
        }
        CHECK(max_gap > 1e-6);  // interference terms are generically nonzero
    }
}

TEST_CASE("evolve: identity, basis flip, spectrum preservation") {
    const CompositeSpace q = qubit_space();
    const DensityMatrix up = from_pure(spin_up(q));
    CHECK(evolve(up, Matrix::identity(2)).matrix().max_abs_diff(up.matrix()) < 1e-12);

    const DensityMatrix flipped = evolve(up, pauli_x_matrix());
    CHECK(flipped.matrix().max_abs_diff(Matrix::from_rows({{0.0, 0.0}, {0.0, 1.0}})) < 1e-12);

    Rng rng(38);
    for (int rep = 0; rep < 10; ++rep) {
        const double p = 0.2 + 0.6 * rng.uniform();
        const DensityMatrix rho = from_mixture({{{p, spin_up(q)}, {1 - p, spin_down(q)}}});
        const Matrix u = random_unitary(2, rng);
        const DensityMatrix evolved = evolve(rho, u);
        CHECK(purity(evolved) == doctest::Approx(purity(rho)).epsilon(1e-10));
        CHECK(std::abs(evolved.matrix().trace() - cplx{1.0, 0.0}) < 1e-10);
        const EigenSystem before = eigh(rho.matrix());
        const EigenSystem after = eigh(evolved.matrix());
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(after.values[k] == doctest::Approx(before.values[k]).epsilon(1e-9));
    }

    CHECK_THROWS_AS(evolve(up, Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}})),
                    std::invalid_argument);
}

TEST_CASE("density matrix construction rejects invalid data") {
    const CompositeSpace q = qubit_space();
    // Trace != 1.
    CHECK_THROWS_AS(DensityMatrix(q, Matrix::identity(2), Provenance::Pure),
                    std::invalid_argument);
    // Not positive semidefinite.
    CHECK_THROWS_AS(DensityMatrix(q, Matrix::from_rows({{1.5, 0.0}, {0.0, -0.5}}),
                                  Provenance::Pure),
                    std::invalid_argument);
}
