#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsim/hilbert.hpp"
#include "qsim/rng.hpp"

using namespace qsim;

namespace {

const double kR = 1.0 / std::sqrt(2.0);
const double kHalf = 0.5;
const double kRoot3Half = std::sqrt(3.0) / 2.0;

StateVector random_state(const CompositeSpace& space, Rng& rng) {
    std::vector<cplx> amps(space.dimension());
    for (cplx& a : amps) a = cplx{rng.normal(), rng.normal()};
    return StateVector(space, amps).normalized();
}

}  // namespace

TEST_CASE("tensor of basis states gives the lexicographic product basis") {
    const CompositeSpace a = qubit_space("a"), b = qubit_space("b");
    const StateVector t = tensor(spin_up(a), spin_down(b));
    CHECK(t.dimension() == 4);
    CHECK(std::abs(t.amplitude(0)) < 1e-15);
    CHECK(std::abs(t.amplitude(1) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(t.amplitude(2)) < 1e-15);
    CHECK(std::abs(t.amplitude(3)) < 1e-15);
}

TEST_CASE("antisymmetric two-spin combination is normalized") {
    const CompositeSpace a = qubit_space("a"), b = qubit_space("b");
    const StateVector s =
        (tensor(spin_up(a), spin_down(b)) - tensor(spin_down(a), spin_up(b))) * cplx{kR, 0.0};
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.space().factor_count() == 2);
}

TEST_CASE("tensor multiplies dimensions") {
    const CompositeSpace d2 = qubit_space("a");
    const CompositeSpace d3 = CompositeSpace::single(FactorRole::System, "b", 3);
    Rng rng(5);
    const StateVector t = tensor(random_state(d2, rng), random_state(d3, rng));
    CHECK(t.dimension() == 6);
}

TEST_CASE("inner products of the rotated bases") {
    const auto [plus_u, minus_u] = rotated_spin_basis(std::numbers::pi / 3.0);

    CHECK(std::abs(inner(spin_up(qubit_space()), spin_up(qubit_space())) - cplx{1.0, 0.0}) <
          1e-15);

    // Frozen arithmetic: (1/2)·(√3/2) − (√3/2)·(1/2) = 0.
    const double expected_cross = kHalf * kRoot3Half - kRoot3Half * kHalf;
    CHECK(std::abs(inner(plus_u, minus_u) - cplx{expected_cross, 0.0}) < 1e-12);

    CHECK(std::abs(inner(spin_up(qubit_space()), plus_u) - cplx{0.5, 0.0}) < 1e-12);
}

TEST_CASE("apply: eigenvectors, flips, and the dense product oracle") {
    const CompositeSpace q = qubit_space();
    const StateVector up = spin_up(q);

    const StateVector zup = apply(pauli_z_matrix(), up);
    CHECK(zup.max_abs_diff(up) < 1e-15);

    const StateVector flipped = apply(pauli_x_matrix(), up);
    CHECK(flipped.max_abs_diff(spin_down(q)) < 1e-15);

    // Two-qubit operator built with kron versus a raw 4x4 product oracle.
    const CompositeSpace two = qubit_space("1").tensor(qubit_space("2"));
    const StateVector phi =
        (tensor(spin_up(qubit_space("1")), spin_up(qubit_space("2"))) +
         tensor(spin_down(qubit_space("1")), spin_down(qubit_space("2")))) *
        cplx{kR, 0.0};
    const Matrix op = Matrix::kron(pauli_x_matrix(), pauli_y_matrix());

    std::vector<cplx> oracle(4, cplx{0.0, 0.0});
    const Matrix sx = pauli_x_matrix(), sy = pauli_y_matrix();
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j1 = 0; j1 < 2; ++j1)
                for (std::size_t j2 = 0; j2 < 2; ++j2)
                    oracle[i1 * 2 + i2] += sx(i1, j1) * sy(i2, j2) * phi.amplitude(j1 * 2 + j2);

    const StateVector applied = apply(op, phi);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(applied.amplitude(i) - oracle[i]) < 1e-14);
    (void)two;
}

TEST_CASE("rotated_spin_basis reproduces the pinned amplitude tables") {
    const auto [pu, mu] = rotated_spin_basis(std::numbers::pi / 3.0);
    CHECK(std::abs(pu.amplitude(0) - cplx{kHalf, 0.0}) < 1e-12);
    CHECK(std::abs(pu.amplitude(1) - cplx{kRoot3Half, 0.0}) < 1e-12);
    CHECK(std::abs(mu.amplitude(0) - cplx{kRoot3Half, 0.0}) < 1e-12);
    CHECK(std::abs(mu.amplitude(1) - cplx{-kHalf, 0.0}) < 1e-12);

    const auto [pv, mv] = rotated_spin_basis(-std::numbers::pi / 3.0);
    CHECK(std::abs(pv.amplitude(0) - cplx{kHalf, 0.0}) < 1e-12);
    CHECK(std::abs(pv.amplitude(1) - cplx{-kRoot3Half, 0.0}) < 1e-12);
    CHECK(std::abs(mv.amplitude(0) - cplx{kRoot3Half, 0.0}) < 1e-12);
    CHECK(std::abs(mv.amplitude(1) - cplx{kHalf, 0.0}) < 1e-12);

    const auto [pz, mz] = rotated_spin_basis(0.0);
    CHECK(pz.max_abs_diff(spin_up(qubit_space())) < 1e-15);
    CHECK(mz.max_abs_diff(spin_down(qubit_space())) < 1e-15);
}

TEST_CASE("rotated bases are orthonormal for random angles") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const double angle = (rng.uniform() - 0.5) * std::numbers::pi;
        const auto [plus, minus] = rotated_spin_basis(angle);
        CHECK(std::abs(inner(plus, plus) - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(inner(minus, minus) - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(inner(plus, minus)) < 1e-12);
    }
}

TEST_CASE("projector_onto: basis state, balanced state, idempotence") {
    const CompositeSpace q = qubit_space();
    const Matrix p_up = projector_onto(spin_up(q));
    CHECK(std::abs(p_up(0, 0) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(p_up.max_abs_diff(Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}})) < 1e-15);

    const StateVector balanced(q, {kR, kR});
    const Matrix p = projector_onto(balanced);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(p(i, j) - cplx{0.5, 0.0}) < 1e-12);

    CHECK((p * p).max_abs_diff(p) < 1e-12);
    CHECK(std::abs(p.trace() - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("projector_onto rejects unnormalized and zero input") {
    const CompositeSpace q = qubit_space();
    CHECK_THROWS_AS(projector_onto(StateVector(q, {2.0, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(projector_onto(StateVector::zero(q)), std::invalid_argument);
}

TEST_CASE("norm multiplicativity for random states") {
    Rng rng(21);
    const CompositeSpace a = CompositeSpace::single(FactorRole::System, "a", 3);
    const CompositeSpace b = qubit_space("b");
    for (int rep = 0; rep < 25; ++rep) {
        StateVector sa = random_state(a, rng) * cplx{rng.uniform() + 0.2, 0.0};
        StateVector sb = random_state(b, rng) * cplx{rng.uniform() + 0.2, 0.0};
        CHECK(tensor(sa, sb).norm() ==
              doctest::Approx(sa.norm() * sb.norm()).epsilon(1e-10));
    }
}

TEST_CASE("tensor is associative up to index reordering") {
    Rng rng(22);
    const CompositeSpace a = qubit_space("a");
    const CompositeSpace b = CompositeSpace::single(FactorRole::System, "b", 3);
    const CompositeSpace c = qubit_space("c");
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector sa = random_state(a, rng);
        const StateVector sb = random_state(b, rng);
        const StateVector sc = random_state(c, rng);
        const StateVector left = tensor(tensor(sa, sb), sc);
        const StateVector right = tensor(sa, tensor(sb, sc));
        CHECK(left.max_abs_diff(right) < 1e-12);
    }
}

TEST_CASE("balanced two-spin state is invariant under the rotated bases") {
    const StateVector phi =
        (tensor(spin_up(qubit_space("1")), spin_up(qubit_space("2"))) +
         tensor(spin_down(qubit_space("1")), spin_down(qubit_space("2")))) *
        cplx{kR, 0.0};
    for (const double angle : {std::numbers::pi / 3.0, -std::numbers::pi / 3.0}) {
        const auto [p1, m1] = rotated_spin_basis(angle, qubit_space("1"));
        const auto [p2, m2] = rotated_spin_basis(angle, qubit_space("2"));
        const StateVector rebuilt = (tensor(p1, p2) + tensor(m1, m2)) * cplx{kR, 0.0};
        CHECK(phi.max_abs_diff(rebuilt) < 1e-12);
    }
}

TEST_CASE("observables reconstruct from their spectra") {
    for (const Observable& obs : {pauli_x(), pauli_y(), pauli_z(),
                                  rotated_spin_observable(std::numbers::pi / 3.0)}) {
        Matrix recon(2, 2);
        for (const auto& [value, proj] : obs.spectrum())
            recon = recon + proj * cplx{value, 0.0};
        CHECK(recon.max_abs_diff(obs.matrix()) < 1e-10);
        Matrix sum(2, 2);
        for (const auto& [value, proj] : obs.spectrum()) sum = sum + proj;
        CHECK(sum.is_identity(1e-10));
    }
    CHECK(pauli_x().matrix().max_abs_diff(pauli_x_matrix()) < 1e-12);
    CHECK(pauli_y().matrix().max_abs_diff(pauli_y_matrix()) < 1e-12);
    CHECK(pauli_z().matrix().max_abs_diff(pauli_z_matrix()) < 1e-12);
}

TEST_CASE("pauli products per factor") {
    const Matrix xyz = pauli_x_matrix() * pauli_y_matrix() * pauli_z_matrix();
    const Matrix i_id = Matrix::identity(2) * cplx{0.0, 1.0};
    CHECK(xyz.max_abs_diff(i_id) < 1e-14);

    const Matrix yxz = pauli_y_matrix() * pauli_x_matrix() * pauli_z_matrix();
    const Matrix minus_i_id = Matrix::identity(2) * cplx{0.0, -1.0};
    CHECK(yxz.max_abs_diff(minus_i_id) < 1e-14);

    // On a two-qubit space, per factor.
    const Matrix left = Matrix::kron(xyz, Matrix::identity(2));
    CHECK(left.max_abs_diff(Matrix::kron(i_id, Matrix::identity(2))) < 1e-14);
}

TEST_CASE("observable construction rejects invalid spectra") {
    // Projectors that do not resolve the identity.
    CHECK_THROWS_AS(
        Observable::from_spectrum({{1.0, projector_onto(spin_up(qubit_space()))}}),
        std::invalid_argument);
    // Non-idempotent "projector".
    CHECK_THROWS_AS(Observable::from_spectrum({{1.0, pauli_x_matrix()},
                                               {-1.0, Matrix::identity(2)}}),
                    std::invalid_argument);
}

TEST_CASE("composite space index round-trip and labels") {
    const CompositeSpace space =
        qubit_space("S").tensor(CompositeSpace::single(FactorRole::Apparatus, "A", 3));
    CHECK(space.dimension() == 6);
    for (std::size_t flat = 0; flat < 6; ++flat) {
        const auto multi = space.multi_index(flat);
        CHECK(space.flat_index(multi) == flat);
    }
    CHECK(space.find("A").value() == 1);
    CHECK(!space.find("missing").has_value());
    CHECK_THROWS_AS(qubit_space("S").tensor(qubit_space("S")), std::invalid_argument);
}

TEST_CASE("inner and apply reject dimension mismatches") {
    const StateVector a = spin_up(qubit_space());
    const StateVector b =
        StateVector::basis_state(CompositeSpace::single(FactorRole::System, "t", 3), 0);
    CHECK_THROWS_AS(inner(a, b), std::invalid_argument);
    CHECK_THROWS_AS(apply(Matrix::identity(3), a), std::invalid_argument);
}
