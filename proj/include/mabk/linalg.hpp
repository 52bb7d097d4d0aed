#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <vector>

namespace mabk {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. The substrate for states, observables and
/// projectors; column vectors are n x 1 matrices.
class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);
    static ComplexMatrix diagonal(const std::vector<cplx>& d);
    static ComplexMatrix column(const std::vector<cplx>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }

    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<cplx>& entries() const { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    cplx trace() const;

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(cplx s) const;
    ComplexMatrix& operator+=(const ComplexMatrix& o);

    double max_abs() const;
    double frobenius_norm() const;
    /// max entry magnitude of (*this - o); matrices must share dimensions
    double max_abs_diff(const ComplexMatrix& o) const;

    bool is_hermitian(double tol = 1e-9) const;
    /// Hermitian + unit trace + spectrum >= -psd_tol
    bool is_density_matrix(double herm_tol = 1e-9, double trace_tol = 1e-8,
                           double psd_tol = 1e-8) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> entries_;
};

ComplexMatrix operator*(cplx s, const ComplexMatrix& m);

struct HermitianEigenDecomposition {
    std::vector<double> values;  // sorted descending, ties keep solver order
    ComplexMatrix vectors;       // columns are orthonormal eigenvectors
};

/// Kronecker product, dims (a.rows*b.rows, a.cols*b.cols).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);

/// Partial trace over the subsystems NOT in `keep`; kept subsystems stay in
/// their original order. `dims` lists every subsystem dimension, leftmost
/// factor first; their product must equal rho.rows.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& keep);

/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
/// Off-diagonal Frobenius threshold 1e-12 (relative), cap 100 sweeps.
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// Eigenvalues only (same solver, no eigenvector accumulation).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Purification via spectral decomposition: sum_k sqrt(l_k) |v_k> (x) |e_k>,
/// ancilla in the computational basis, ancilla dim == rho dim. Column vector.
ComplexMatrix purify(const ComplexMatrix& rho);

/// -sum l log2 l over the spectrum, 0 log 0 := 0. Input must pass density
/// checks; eigenvalues in [-1e-9, 0) are clamped to 0.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Shannon entropy in bits of a nonnegative vector (need not be normalized
/// exactly; entries below 0 by more than 1e-12 are rejected).
double shannon_entropy(const std::vector<double>& p);

/// h(p) = -p log2 p - (1-p) log2 (1-p)
double binary_entropy(double p);

// Pauli matrices and friends (2x2).
const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
const ComplexMatrix& qubit_identity();

}  // namespace mabk
