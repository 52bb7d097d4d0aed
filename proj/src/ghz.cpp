#include "mabk/ghz.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mabk {

AlmostGhzState AlmostGhzState::zero(int n_parties) {
    if (n_parties < 2) throw std::invalid_argument("AlmostGhzState: need at least 2 parties");
    const std::size_t blocks = std::size_t(1) << (n_parties - 1);
    AlmostGhzState st;
    st.n_parties = n_parties;
    st.lambda0.assign(blocks, 0.0);
    st.lambda1.assign(blocks, 0.0);
    st.s.assign(blocks, 0.0);
    return st;
}

bool AlmostGhzState::is_valid(double tol) const {
    const std::size_t blocks = std::size_t(1) << (n_parties - 1);
    if (lambda0.size() != blocks || lambda1.size() != blocks || s.size() != blocks) return false;
    double sum = 0.0;
    for (std::size_t u = 0; u < blocks; ++u) {
        if (lambda0[u] < -tol || lambda1[u] < -tol) return false;
        if (s[u] * s[u] > lambda0[u] * lambda1[u] + tol) return false;
        sum += lambda0[u] + lambda1[u];
    }
    return std::abs(sum - 1.0) <= tol * 10.0;
}

void AlmostGhzState::require_valid(double tol) const {
    if (!is_valid(tol)) throw std::invalid_argument("AlmostGhzState: invariants violated");
}

bool AlmostGhzState::in_normal_form(int zero_blocks, double tol) const {
    int count = 0;
    for (std::size_t u = 0; u < block_count(); ++u) {
        if (std::abs(s[u]) <= tol && lambda0[u] >= lambda1[u] - tol) ++count;
    }
    return count >= zero_blocks;
}

std::size_t ghz_matrix_index(const GhzBasisLabel& label) {
    return 2 * std::size_t(label.u) + std::size_t(label.sigma);
}

ComplexMatrix ghz_basis_vector(int n, const GhzBasisLabel& label) {
    if (n < 2) throw std::invalid_argument("ghz_basis_vector: need n >= 2");
    if (label.u_bits != std::uint32_t(n - 1)) throw std::invalid_argument("ghz_basis_vector: u length mismatch");
    if (label.u >> (n - 1)) throw std::invalid_argument("ghz_basis_vector: u out of range");
    const std::size_t dim = std::size_t(1) << n;
    const std::uint32_t mask = (std::uint32_t(1) << (n - 1)) - 1;
    const std::size_t idx0 = label.u;                                    // |0,u>
    const std::size_t idx1 = (std::size_t(1) << (n - 1)) | (label.u ^ mask);  // |1,~u>
    ComplexMatrix v(dim, 1);
    const double inv = 1.0 / std::sqrt(2.0);
    v(idx0, 0) = inv;
    v(idx1, 0) = (label.sigma ? -inv : inv);
    return v;
}

const ComplexMatrix& ghz_basis_unitary(int n) {
    static std::map<int, ComplexMatrix> cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const std::size_t dim = std::size_t(1) << n;
    ComplexMatrix u(dim, dim);
    for (std::uint32_t ubits = 0; ubits < (std::uint32_t(1) << (n - 1)); ++ubits) {
        for (int sigma = 0; sigma < 2; ++sigma) {
            const GhzBasisLabel label{sigma, ubits, std::uint32_t(n - 1)};
            const ComplexMatrix col = ghz_basis_vector(n, label);
            const std::size_t k = ghz_matrix_index(label);
            for (std::size_t r = 0; r < dim; ++r) u(r, k) = col(r, 0);
        }
    }
    return cache.emplace(n, std::move(u)).first->second;
}

ComplexMatrix to_density_matrix(const AlmostGhzState& state) {
    state.require_valid();
    const int n = state.n_parties;
    const std::size_t dim = std::size_t(1) << n;
    ComplexMatrix g(dim, dim);
    for (std::size_t u = 0; u < state.block_count(); ++u) {
        const std::size_t b = 2 * u;
        g(b, b) = state.lambda0[u];
        g(b + 1, b + 1) = state.lambda1[u];
        g(b, b + 1) = cplx(0.0, state.s[u]);
        g(b + 1, b) = cplx(0.0, -state.s[u]);
    }
    const ComplexMatrix& basis = ghz_basis_unitary(n);
    return basis * g * basis.adjoint();
}

std::array<double, 8> eigvals_almost_ghz3(const AlmostGhzState& state) {
    if (state.n_parties != 3) throw std::invalid_argument("eigvals_almost_ghz3: state is not 3-party");
    std::array<double, 8> rho{};
    for (std::size_t u = 0; u < 3; ++u) {
        rho[0 * 4 + u] = state.lambda0[u];
        rho[1 * 4 + u] = state.lambda1[u];
    }
    const double l0 = state.lambda0[3];
    const double l1 = state.lambda1[3];
    const double rad = std::sqrt((l0 - l1) * (l0 - l1) + 4.0 * state.s[3] * state.s[3]);
    rho[0 * 4 + 3] = 0.5 * (l0 + l1 + rad);
    rho[1 * 4 + 3] = 0.5 * (l0 + l1 - rad);
    return rho;
}

double t_parameter(double lambda011, double lambda111, double s) {
    const double gap = lambda011 - lambda111;
    if (s == 0.0) {
        // degenerate block keeps the GHZ basis; a reversed gap needs the
        // quarter-turn so the rotated basis still pairs with Eq. 6's ordering
        return gap >= 0.0 ? 0.0 : 1.5707963267948966192313;
    }
    const double rad = std::sqrt(gap * gap + 4.0 * s * s);
    return std::atan2(2.0 * s, gap + rad);
}

std::array<ComplexMatrix, 8> eigvecs_almost_ghz3(const AlmostGhzState& state) {
    if (state.n_parties != 3) throw std::invalid_argument("eigvecs_almost_ghz3: state is not 3-party");
    const double t = t_parameter(state.lambda0[3], state.lambda1[3], state.s[3]);
    const double ct = std::cos(t);
    const double st = std::sin(t);

    auto psi = [&](int sigma, std::uint32_t u) {
        return ghz_basis_vector(3, GhzBasisLabel{sigma, u, 2});
    };

    std::array<ComplexMatrix, 8> vecs{
        ComplexMatrix(8, 1), ComplexMatrix(8, 1), ComplexMatrix(8, 1), ComplexMatrix(8, 1),
        ComplexMatrix(8, 1), ComplexMatrix(8, 1), ComplexMatrix(8, 1), ComplexMatrix(8, 1)};
    for (std::uint32_t u = 0; u < 3; ++u) {
        vecs[0 * 4 + u] = psi(0, u);
        vecs[1 * 4 + u] = psi(1, u);
    }
    const ComplexMatrix p0 = psi(0, 3);
    const ComplexMatrix p1 = psi(1, 3);
    vecs[0 * 4 + 3] = p0 * cplx(ct, 0.0) - p1 * cplx(0.0, st);
    vecs[1 * 4 + 3] = p1 * cplx(ct, 0.0) - p0 * cplx(0.0, st);
    return vecs;
}

AlmostGhzState tau_family_state(int n_parties, double nu) {
    if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("tau_family_state: nu outside [0,1]");
    AlmostGhzState st = AlmostGhzState::zero(n_parties);
    const std::size_t all_ones = st.block_count() - 1;
    st.lambda0[0] = nu;
    st.lambda0[all_ones] += 1.0 - nu;
    return st;
}

AlmostGhzState almost_ghz3_from_eigs(const std::array<double, 8>& eigs, double t) {
    AlmostGhzState st = AlmostGhzState::zero(3);
    for (std::size_t u = 0; u < 3; ++u) {
        st.lambda0[u] = eigs[0 * 4 + u];
        st.lambda1[u] = eigs[1 * 4 + u];
    }
    const double s011 = eigs[0 * 4 + 3];
    const double s111 = eigs[1 * 4 + 3];
    const double g = s011 - s111;  // the (1,1) block radical
    st.lambda0[3] = 0.5 * (s011 + s111 + g * std::cos(2.0 * t));
    st.lambda1[3] = 0.5 * (s011 + s111 - g * std::cos(2.0 * t));
    st.s[3] = 0.5 * g * std::sin(2.0 * t);
    return st;
}

ComplexMatrix density_from_eigs_ghz3(const std::array<double, 8>& eigs, double t) {
    return to_density_matrix(almost_ghz3_from_eigs(eigs, t));
}

}  // namespace mabk
