#include "mabk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mabk {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0.0, 0.0)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0 || entries_.size() != rows * cols) {
        throw std::invalid_argument("ComplexMatrix: entries do not match dimensions");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<cplx>& v) {
    return ComplexMatrix(v.size(), 1, v);
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = std::conj(entries_[i]);
    return m;
}

cplx ComplexMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace: matrix not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("+: shape mismatch");
    ComplexMatrix m = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] += o.entries_[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("-: shape mismatch");
    ComplexMatrix m = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] -= o.entries_[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("*: inner dimensions mismatch");
    ComplexMatrix m(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx v = (*this)(r, k);
            if (v == cplx(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < o.cols_; ++c) m(r, c) += v * o(k, c);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator*(cplx s) const {
    ComplexMatrix m = *this;
    for (auto& e : m.entries_) e *= s;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("+=: shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& m) { return m * s; }

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) m = std::max(m, std::abs(entries_[i] - o.entries_[i]));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_density_matrix(double herm_tol, double trace_tol, double psd_tol) const {
    if (rows_ != cols_) return false;
    if (!is_hermitian(herm_tol)) return false;
    if (std::abs(trace() - cplx(1.0, 0.0)) > trace_tol) return false;
    const auto eigs = hermitian_eigenvalues(*this);
    return eigs.empty() || eigs.back() >= -psd_tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx v = a(ar, ac);
            if (v == cplx(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    m(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
        }
    return m;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
    if (factors.size() == 0) throw std::invalid_argument("kron: empty factor list");
    auto it = factors.begin();
    ComplexMatrix acc = *it++;
    for (; it != factors.end(); ++it) acc = kron(acc, *it);
    return acc;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& keep) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("partial_trace: matrix not square");
    std::size_t prod = 1;
    for (std::size_t d : dims) prod *= d;
    if (prod != rho.rows()) throw std::invalid_argument("partial_trace: dims do not factor the matrix");
    for (std::size_t k : keep)
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<std::size_t> kept, traced;
    for (std::size_t i = 0; i < dims.size(); ++i)
        (keep.count(i) ? kept : traced).push_back(i);

    std::size_t dk = 1, dt = 1;
    for (std::size_t i : kept) dk *= dims[i];
    for (std::size_t i : traced) dt *= dims[i];

    // strides of each subsystem in the flattened computational index
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    auto unpack = [&](std::size_t flat, const std::vector<std::size_t>& subsys) {
        std::size_t idx = 0;
        for (auto it = subsys.rbegin(); it != subsys.rend(); ++it) {
            const std::size_t d = dims[*it];
            idx += (flat % d) * stride[*it];
            flat /= d;
        }
        return idx;
    };

    ComplexMatrix out(dk == 0 ? 1 : dk, dk == 0 ? 1 : dk);
    for (std::size_t r = 0; r < dk; ++r) {
        const std::size_t rbase = unpack(r, kept);
        for (std::size_t c = 0; c < dk; ++c) {
            const std::size_t cbase = unpack(c, kept);
            cplx acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                const std::size_t tbase = unpack(t, traced);
                acc += rho(rbase + tbase, cbase + tbase);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

// One cyclic Jacobi pass zeroing every off-diagonal pair once. V may be null.
void jacobi_sweep(ComplexMatrix& a, ComplexMatrix* v) {
    const std::size_t n = a.rows();
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const cplx apq = a(p, q);
            const double r = std::abs(apq);
            if (r == 0.0) continue;
            const cplx phase = apq / r;  // e^{i theta}, so that phase-stripped block is real
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();
            const double tau = (aqq - app) / (2.0 * r);
            const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                          : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            // unitary on the (p,q) plane: col p <- c*p - s*conj(phase)*q handled below
            const cplx sp = s * phase;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx akp = a(k, p);
                const cplx akq = a(k, q);
                a(k, p) = c * akp - std::conj(sp) * akq;
                a(k, q) = sp * akp + c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const cplx apk = a(p, k);
                const cplx aqk = a(q, k);
                a(p, k) = c * apk - sp * aqk;
                a(q, k) = std::conj(sp) * apk + c * aqk;
            }
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            a(p, p) = cplx(a(p, p).real(), 0.0);
            a(q, q) = cplx(a(q, q).real(), 0.0);
            if (v) {
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = (*v)(k, p);
                    const cplx vkq = (*v)(k, q);
                    (*v)(k, p) = c * vkp - std::conj(sp) * vkq;
                    (*v)(k, q) = sp * vkp + c * vkq;
                }
            }
        }
    }
}

constexpr double kJacobiTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
    if (!a.is_hermitian(1e-9)) throw std::invalid_argument("hermitian_eig: matrix not Hermitian within 1e-9");
    const double scale = std::max(1.0, a.frobenius_norm());
    int sweep = 0;
    while (off_diagonal_norm(a) > kJacobiTol * scale) {
        if (++sweep > kJacobiMaxSweeps) throw std::runtime_error("hermitian_eig: no convergence after 100 sweeps");
        jacobi_sweep(a, v);
    }
}

}  // namespace

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a) {
    ComplexMatrix work = a;
    ComplexMatrix v = ComplexMatrix::identity(a.rows());
    jacobi_diagonalize(work, &v);

    const std::size_t n = a.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return work(i, i).real() > work(j, j).real(); });

    HermitianEigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = work(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
    ComplexMatrix work = a;
    jacobi_diagonalize(work, nullptr);
    std::vector<double> vals(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) vals[i] = work(i, i).real();
    std::stable_sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

ComplexMatrix purify(const ComplexMatrix& rho) {
    if (!rho.is_density_matrix()) throw std::invalid_argument("purify: input is not a density matrix");
    const auto eig = hermitian_eig(rho);
    const std::size_t d = rho.rows();
    ComplexMatrix psi(d * d, 1);
    for (std::size_t k = 0; k < d; ++k) {
        const double lk = std::max(0.0, eig.values[k]);
        if (lk == 0.0) continue;
        const double sq = std::sqrt(lk);
        for (std::size_t r = 0; r < d; ++r) psi(r * d + k, 0) += sq * eig.vectors(r, k);
    }
    return psi;
}

double shannon_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) {
        if (x < -1e-12) throw std::invalid_argument("shannon_entropy: negative probability");
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

double binary_entropy(double p) {
    if (p < -1e-12 || p > 1.0 + 1e-12) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    p = std::min(1.0, std::max(0.0, p));
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    if (!rho.is_density_matrix()) throw std::invalid_argument("von_neumann_entropy: input is not a density matrix");
    auto eigs = hermitian_eigenvalues(rho);
    for (double& l : eigs) {
        if (l < 0.0) l = 0.0;  // clamp round-off from kron chains
    }
    return shannon_entropy(eigs);
}

namespace {
ComplexMatrix make_pauli(int which) {
    ComplexMatrix m(2, 2);
    switch (which) {
        case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
        case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 2: m(0, 1) = cplx(0.0, -1.0); m(1, 0) = cplx(0.0, 1.0); break;
        default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    }
    return m;
}
}  // namespace

const ComplexMatrix& pauli_x() { static const ComplexMatrix m = make_pauli(1); return m; }
const ComplexMatrix& pauli_y() { static const ComplexMatrix m = make_pauli(2); return m; }
const ComplexMatrix& pauli_z() { static const ComplexMatrix m = make_pauli(3); return m; }
const ComplexMatrix& qubit_identity() { static const ComplexMatrix m = make_pauli(0); return m; }

}  // namespace mabk
