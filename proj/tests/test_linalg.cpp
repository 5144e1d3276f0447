#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qsim/linalg.hpp"
#include "qsim/rng.hpp"

using namespace qsim;

namespace {

Matrix random_hermitian(std::size_t n, Rng& rng) {
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v{rng.normal(), rng.normal()};
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

// Independent Kronecker-product oracle with plain index arithmetic.
Matrix kron_oracle(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    return m;
}

// Matrix exponential by scaling and squaring of the Taylor series; used as an
// independent route to exp(-iHt).
Matrix expm_series(const Matrix& m) {
    const std::size_t n = m.rows();
    int scale = 0;
    double norm = m.max_abs() * n;
    while (norm > 0.5) {
        norm /= 2.0;
        ++scale;
    }
    Matrix scaled = m * cplx{std::pow(0.5, scale), 0.0};
    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = term * scaled * cplx{1.0 / k, 0.0};
        result = result + term;
    }
    for (int s = 0; s < scale; ++s) result = result * result;
    return result;
}

}  // namespace

TEST_CASE("eigh diagonalizes known 2x2 matrices") {
    const Matrix sx = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const EigenSystem es = eigh(sx);
    CHECK(es.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(es.values[1] == doctest::Approx(+1.0).epsilon(1e-12));

    const Matrix sy = Matrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}});
    const EigenSystem esy = eigh(sy);
    CHECK(esy.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(esy.values[1] == doctest::Approx(+1.0).epsilon(1e-12));
}

TEST_CASE("eigh reconstructs random hermitian matrices") {
    Rng rng(2024);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.next_u64() % 7;
        const Matrix h = random_hermitian(n, rng);
        const EigenSystem es = eigh(h);

        // V unitary.
        CHECK(es.vectors.is_unitary(1e-10));

        // V diag(λ) V† == H.
        Matrix recon(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx s{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k)
                    s += es.vectors(i, k) * es.values[k] * std::conj(es.vectors(j, k));
                recon(i, j) = s;
            }
        CHECK(recon.max_abs_diff(h) < 1e-9);

        // Ascending order.
        for (std::size_t k = 1; k < n; ++k) CHECK(es.values[k - 1] <= es.values[k]);
    }
}

TEST_CASE("kron matches the index-arithmetic oracle") {
    Rng rng(7);
    const Matrix a = random_hermitian(2, rng);
    const Matrix b = random_hermitian(3, rng);
    CHECK(Matrix::kron(a, b).max_abs_diff(kron_oracle(a, b)) < 1e-14);
}

TEST_CASE("unitary_from_hamiltonian matches the power-series route") {
    Rng rng(99);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix h = random_hermitian(4, rng);
        const double t = 0.25 + 0.5 * rng.uniform();
        const Matrix u = unitary_from_hamiltonian(h, t);
        CHECK(u.is_unitary(1e-10));
        const Matrix series = expm_series(h * cplx{0.0, -t});
        CHECK(u.max_abs_diff(series) < 1e-9);
    }
}

TEST_CASE("commutator basics") {
    const Matrix sx = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const Matrix sz = Matrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    CHECK(commutator(sx, sx).max_abs() < 1e-15);
    CHECK(commutator(sx, sz).max_abs() > 1.0);
}

TEST_CASE("matrix predicates") {
    CHECK(Matrix::identity(3).is_identity());
    CHECK(Matrix::identity(3).is_unitary());
    CHECK(Matrix::identity(3).is_hermitian());
    Matrix m(2, 2);
    m(0, 1) = cplx{0.0, 1.0};
    CHECK(!m.is_hermitian());
}
