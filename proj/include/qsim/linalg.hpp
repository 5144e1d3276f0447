// Dense complex linear algebra for small Hilbert spaces.
//
// Everything here is sized for state spaces of at most a few hundred
// dimensions: row-major storage, straightforward O(n^3) products, and a
// cyclic-Jacobi eigensolver for hermitian matrices. No attempt is made at
// sparsity or blocking.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qsim {

using cplx = std::complex<double>;

// Tolerances used across the project.
// eps_num:  algebraic identities (hermiticity, commutators, spectral sums)
// eps_norm: state normalization
// eps_diag: diagonality of reduced matrices in the refined hang-up
// eps_prune: branch squared-amplitude below which an outcome is dropped
inline constexpr double eps_num = 1e-10;
inline constexpr double eps_norm = 1e-9;
inline constexpr double eps_diag = 1e-8;
inline constexpr double eps_prune = 1e-12;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<const cplx> data() const { return a_; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(cplx s) const;

    Matrix adjoint() const;
    cplx trace() const;

    /// Largest absolute entry; the matrix norm used for commutator and
    /// diagonality thresholds.
    double max_abs() const;

    double max_abs_diff(const Matrix& o) const;

    bool is_hermitian(double tol = eps_num) const;
    bool is_identity(double tol = eps_num) const;
    bool is_unitary(double tol = eps_num) const;

    /// Kronecker product, row-major convention: (a ⊗ b)(i*rb+k, j*cb+l) = a(i,j)·b(k,l).
    static Matrix kron(const Matrix& a, const Matrix& b);

    std::vector<cplx> apply(std::span<const cplx> v) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector for values[k]
};

/// Cyclic-Jacobi diagonalization of a hermitian matrix.
EigenSystem eigh(const Matrix& hermitian);

/// exp(-i·H·t) for hermitian H, via its eigendecomposition.
Matrix unitary_from_hamiltonian(const Matrix& hamiltonian, double t);

/// Commutator [a, b] = ab - ba.
Matrix commutator(const Matrix& a, const Matrix& b);

double norm(std::span<const cplx> v);
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);  // Σ conj(a_i)·b_i

}  // namespace qsim
