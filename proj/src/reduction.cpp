#include "mabk/reduction.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "mabk/entropy.hpp"
#include "mabk/ghz.hpp"
#include "mabk/rng.hpp"

namespace mabk {

namespace {

void require_projector(const ComplexMatrix& p, const char* name) {
    if (p.rows() != p.cols()) throw std::invalid_argument(std::string(name) + ": not square");
    if (!p.is_hermitian(1e-9)) throw std::invalid_argument(std::string(name) + ": not Hermitian");
    if ((p * p).max_abs_diff(p) > 1e-8) throw std::invalid_argument(std::string(name) + ": not idempotent");
}

// orthonormal basis of range(P) from eigenvectors with eigenvalue near 1
std::vector<ComplexMatrix> range_basis(const ComplexMatrix& p) {
    const auto eig = hermitian_eig(p);
    std::vector<ComplexMatrix> cols;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        if (eig.values[k] > 0.5) {
            ComplexMatrix v(p.rows(), 1);
            for (std::size_t r = 0; r < p.rows(); ++r) v(r, 0) = eig.vectors(r, k);
            cols.push_back(std::move(v));
        }
    }
    return cols;
}

cplx inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    cplx acc = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) acc += std::conj(a(r, 0)) * b(r, 0);
    return acc;
}

double vec_norm(const ComplexMatrix& a) { return std::sqrt(std::abs(inner(a, a).real())); }

ComplexMatrix scaled(const ComplexMatrix& a, cplx s) { return a * s; }

// 2x2 restriction [e_i^+ M e_j] for a one- or two-column basis (artificial
// second column treated as 0 for the physical operator part)
ComplexMatrix restrict_to(const ComplexMatrix& m, const ComplexMatrix& e0,
                          const ComplexMatrix* e1) {
    ComplexMatrix out(2, 2);
    const ComplexMatrix m_e0 = m * e0;
    out(0, 0) = inner(e0, m_e0);
    if (e1) {
        const ComplexMatrix m_e1 = m * (*e1);
        out(0, 1) = inner(e0, m_e1);
        out(1, 0) = inner(*e1, m_e0);
        out(1, 1) = inner(*e1, m_e1);
    }
    return out;
}

constexpr double kBlockEdge = 1e-9;  // split threshold between {0,1} and the interior

}  // namespace

BlockDecomposition block_diagonalize(const ComplexMatrix& p0, const ComplexMatrix& p1,
                                     const ComplexMatrix& q0, const ComplexMatrix& q1) {
    require_projector(p0, "P0");
    require_projector(p1, "P1");
    require_projector(q0, "Q0");
    require_projector(q1, "Q1");
    const std::size_t dim = p0.rows();
    const ComplexMatrix id = ComplexMatrix::identity(dim);
    if ((p0 + p1).max_abs_diff(id) > 1e-8 || (q0 + q1).max_abs_diff(id) > 1e-8)
        throw std::invalid_argument("block_diagonalize: projector pairs are not complementary");

    BlockDecomposition out;
    out.embedding_dim = 0;

    // process range(P0) fully (interior eigenvalues give the genuine 2x2
    // blocks, each containing one range(P1) partner), then collect the
    // remaining 1x1 joint eigenvectors from range(P1)
    for (int side = 0; side < 2; ++side) {
        const ComplexMatrix& p_own = side == 0 ? p0 : p1;
        const auto basis = range_basis(p_own);
        if (basis.empty()) continue;
        const std::size_t k = basis.size();

        // restriction of Q0 to range(P): eigenvalues are cos^2 of principal angles
        ComplexMatrix r(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            const ComplexMatrix q0_bi = q0 * basis[i];
            for (std::size_t j = 0; j < k; ++j) r(j, i) = inner(basis[j], q0_bi);
        }
        const auto reig = hermitian_eig(r);
        for (std::size_t e = 0; e < k; ++e) {
            const double mu = reig.values[e];
            ComplexMatrix v(dim, 1);
            for (std::size_t i = 0; i < k; ++i) v += scaled(basis[i], reig.vectors(i, e));

            if (mu > kBlockEdge && mu < 1.0 - kBlockEdge) {
                if (side == 1) continue;  // partner of a block already found from P0
                // genuine 2x2 block spanned by v and its Q0-image component
                ComplexMatrix w = q0 * v - v * cplx(mu, 0.0);
                const double nw = vec_norm(w);
                w = scaled(w, 1.0 / nw);
                MeasurementBlock blk;
                blk.basis = ComplexMatrix(dim, 2);
                for (std::size_t rr = 0; rr < dim; ++rr) {
                    blk.basis(rr, 0) = v(rr, 0);
                    blk.basis(rr, 1) = w(rr, 0);
                }
                blk.restrictions = {restrict_to(p0, v, &w), restrict_to(p1, v, &w),
                                    restrict_to(q0, v, &w), restrict_to(q1, v, &w)};
                out.blocks.push_back(std::move(blk));
            } else {
                // 1x1 joint eigenvector: embed with an artificial dimension,
                // restricted projectors per the enlarged construction
                MeasurementBlock blk;
                blk.artificial = true;
                blk.basis = v;
                const double pv0 = side == 0 ? 1.0 : 0.0;
                const double qv0 = mu > 0.5 ? 1.0 : 0.0;
                auto embed = [](double on_v) {
                    ComplexMatrix m(2, 2);
                    m(0, 0) = on_v;
                    m(1, 1) = 1.0 - on_v;
                    return m;
                };
                blk.restrictions = {embed(pv0), embed(1.0 - pv0), embed(qv0), embed(1.0 - qv0)};
                out.blocks.push_back(std::move(blk));
            }
        }
    }
    std::size_t physical = 0;
    for (const auto& b : out.blocks) physical += b.artificial ? 1 : 2;
    if (physical != dim) throw std::runtime_error("block_diagonalize: blocks do not partition the space");
    out.embedding_dim = 2 * out.blocks.size();
    return out;
}

ComplexMatrix symmetrize(const ComplexMatrix& rho, int n) {
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("symmetrize: dimension mismatch");
    if (!rho.is_density_matrix()) throw std::invalid_argument("symmetrize: input is not a density matrix");

    // elementwise mask: avg over even-weight x of (-1)^{<x, r xor c>}
    std::vector<double> mask(dim, 0.0);
    const std::size_t strings = dim;
    double count = 0.0;
    for (std::size_t x = 0; x < strings; ++x) {
        if (std::popcount(x) % 2 != 0) continue;
        count += 1.0;
        for (std::size_t d = 0; d < dim; ++d)
            mask[d] += (std::popcount(x & d) % 2 == 0) ? 1.0 : -1.0;
    }
    for (auto& v : mask) v /= count;

    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out(r, c) = rho(r, c) * mask[r ^ c];
    return out;
}

GhzBlockReport ghz_block_check(const ComplexMatrix& rho, int n, double tol) {
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("ghz_block_check: dimension mismatch");
    const ComplexMatrix& u = ghz_basis_unitary(n);
    const ComplexMatrix g = u.adjoint() * rho * u;
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            if (r / 2 == c / 2) continue;  // same u block
            worst = std::max(worst, std::abs(g(r, c)));
        }
    return {worst <= tol, worst};
}

ComplexMatrix apply_local_z_rotations(const ComplexMatrix& rho, const std::vector<double>& thetas) {
    const int n = int(thetas.size());
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("apply_local_z_rotations: dimension mismatch");
    // R_i(t) = diag(e^{i t/2}, e^{-i t/2}); the product is diagonal
    std::vector<cplx> phases(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        double angle = 0.0;
        for (int i = 0; i < n; ++i) {
            const int bit = int((r >> (n - 1 - i)) & 1u);
            angle += 0.5 * thetas[i] * (bit ? -1.0 : 1.0);
        }
        phases[r] = std::polar(1.0, angle);
    }
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out(r, c) = phases[r] * rho(r, c) * std::conj(phases[c]);
    return out;
}

double beta_angle(const std::vector<double>& thetas, std::uint32_t u, int n) {
    double beta = thetas.at(0);
    for (int j = 1; j < n; ++j) {
        const int bit = int((u >> (n - 1 - j)) & 1u);
        beta += (bit ? -1.0 : 1.0) * thetas[j];
    }
    return beta;
}

std::optional<std::vector<double>> solve_rotation_angles(
    const std::vector<std::pair<std::uint32_t, double>>& targets, int n) {
    if (int(targets.size()) != n) throw std::invalid_argument("solve_rotation_angles: need N constraints");
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
    for (int row = 0; row < n; ++row) {
        const std::uint32_t u = targets[row].first;
        m[row][0] = 1.0;
        for (int j = 1; j < n; ++j) m[row][j] = ((u >> (n - 1 - j)) & 1u) ? -1.0 : 1.0;
        m[row][n] = targets[row].second;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12) return std::nullopt;
        std::swap(m[col], m[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::vector<double> thetas(n);
    for (int r = 0; r < n; ++r) thetas[r] = m[r][n] / m[r][r];
    return thetas;
}

ComplexMatrix flip_real_offdiagonals(const ComplexMatrix& rho, int n) {
    const auto report = ghz_block_check(rho, n, 1e-10);
    if (!report.block_diagonal)
        throw std::invalid_argument("flip_real_offdiagonals: state is not GHZ-block-diagonal");
    const std::size_t dim = std::size_t(1) << n;
    const ComplexMatrix& u = ghz_basis_unitary(n);
    ComplexMatrix g = u.adjoint() * rho * u;
    for (std::size_t blk = 0; blk < dim / 2; ++blk) {
        const std::size_t b = 2 * blk;
        const cplx z = g(b, b + 1);
        g(b, b + 1) = cplx(-z.real(), z.imag());
        g(b + 1, b) = std::conj(g(b, b + 1));
    }
    return u * g * u.adjoint();
}

std::vector<double> statistics(const ComplexMatrix& rho, int n, const std::vector<double>& angles) {
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("statistics: dimension mismatch");
    if (int(angles.size()) != n) throw std::invalid_argument("statistics: need one angle per party");

    std::vector<double> probs(dim, 0.0);
    const double inv = std::pow(0.5, 0.5 * n);
    for (std::size_t outcome = 0; outcome < dim; ++outcome) {
        // |o> = tensor of (|0> + (-1)^{o_i} e^{i phi_i} |1>)/sqrt2
        ComplexMatrix v(dim, 1);
        for (std::size_t r = 0; r < dim; ++r) {
            cplx amp = inv;
            for (int i = 0; i < n; ++i) {
                const int rbit = int((r >> (n - 1 - i)) & 1u);
                if (!rbit) continue;
                const int obit = int((outcome >> (n - 1 - i)) & 1u);
                amp *= std::polar(1.0, angles[i]) * (obit ? -1.0 : 1.0);
            }
            v(r, 0) = amp;
        }
        const ComplexMatrix rv = rho * v;
        probs[outcome] = std::max(0.0, inner(v, rv).real());
    }
    return probs;
}

EntropyNonincreaseReport entropy_nonincrease_check(const ComplexMatrix& rho, int trials, std::uint64_t seed) {
    EntropyNonincreaseReport report;
    report.trials = trials;
    report.worst_margin = 1e9;
    const ComplexMatrix bar = symmetrize(rho, 3);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const double phi = rng.uniform(0.0, 6.283185307179586);
        const double margin = cond_entropy_single(rho, phi) - cond_entropy_single(bar, phi);
        report.worst_margin = std::min(report.worst_margin, margin);
        if (margin < -1e-8) ++report.violations;
    }
    return report;
}

ComplexMatrix random_density_matrix(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
    ComplexMatrix rho = g * g.adjoint();
    const double tr = rho.trace().real();
    return rho * cplx(1.0 / tr, 0.0);
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed ^ 0xabcdef12345ull);
    ComplexMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
    // modified Gram-Schmidt on columns
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            cplx proj = 0.0;
            for (std::size_t r = 0; r < dim; ++r) proj += std::conj(g(r, prev)) * g(r, c);
            for (std::size_t r = 0; r < dim; ++r) g(r, c) -= proj * g(r, prev);
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(g(r, c));
        nrm = std::sqrt(nrm);
        for (std::size_t r = 0; r < dim; ++r) g(r, c) /= nrm;
    }
    return g;
}

}  // namespace mabk
