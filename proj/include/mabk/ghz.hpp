#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mabk/linalg.hpp"

namespace mabk {

/// Label of a GHZ basis vector: sigma in {0,1} and an (N-1)-bit string u.
/// u is stored big-endian (party 2 = most significant bit of u).
struct GhzBasisLabel {
    int sigma = 0;
    std::uint32_t u = 0;
    std::uint32_t u_bits = 0;  // length of u, i.e. N-1
};

/// Reduced adversarial state family: diagonal in the GHZ basis except for a
/// purely imaginary off-diagonal term i*s_u inside each (0,u)/(1,u) block.
struct AlmostGhzState {
    int n_parties = 3;
    std::vector<double> lambda0;  // lambda_{0,u}, indexed by u big-endian
    std::vector<double> lambda1;  // lambda_{1,u}
    std::vector<double> s;        // s_u

    static AlmostGhzState zero(int n_parties);
    std::size_t block_count() const { return lambda0.size(); }

    /// sum lambda == 1 and every 2x2 block PSD: s_u^2 <= l0*l1 + tol
    bool is_valid(double tol = 1e-9) const;
    void require_valid(double tol = 1e-9) const;

    /// Theorem 1 normal form predicate: at least `zero_blocks` of the s_u are
    /// zero with the corresponding diagonal pairs ordered l0 >= l1.
    bool in_normal_form(int zero_blocks, double tol = 1e-12) const;
};

/// Basis-vector index used for matrix layouts in the GHZ basis: blocks are
/// contiguous, u-major with sigma inside, matching the row order of the
/// 3-party block matrix.
std::size_t ghz_matrix_index(const GhzBasisLabel& label);

/// |psi_{sigma,u}> = (|0,u> + (-1)^sigma |1,~u>)/sqrt(2), dimension 2^n.
ComplexMatrix ghz_basis_vector(int n, const GhzBasisLabel& label);

/// Unitary whose k-th column is the GHZ basis vector with ghz_matrix_index k.
const ComplexMatrix& ghz_basis_unitary(int n);

/// Computational-basis density matrix of an AlmostGhzState.
ComplexMatrix to_density_matrix(const AlmostGhzState& state);

/// Closed-form eigenvalues of the 3-party family, indexed rho[i*4 + (j<<1|k)].
/// rho_{i11} = (l011 + l111 + (-1)^i sqrt((l011-l111)^2 + 4 s^2)) / 2.
std::array<double, 8> eigvals_almost_ghz3(const AlmostGhzState& state);

/// Block-diagonalizing angle: t = arctan(2s / (l011 - l111 + radical)),
/// t in [-pi/2, pi/2]; the doubly-degenerate origin maps to t = 0.
double t_parameter(double lambda011, double lambda111, double s);

/// Eigenvectors of the 3-party family, columns ordered like eigvals. The
/// (1,1) block pair is rotated by t: |rho_011> = cos t |psi_011> - i sin t |psi_111>.
std::array<ComplexMatrix, 8> eigvecs_almost_ghz3(const AlmostGhzState& state);

/// tau(nu) = nu |psi_{0,0..0}><..| + (1-nu) |psi_{0,1..1}><..| as an AlmostGhzState.
AlmostGhzState tau_family_state(int n_parties, double nu);

/// Build a 3-party AlmostGhzState from eigenvalues (rho[i*4+jk] ordering) and
/// the rotation parameter t, inverting the (eigenvalue, t) <-> (lambda, s) map.
AlmostGhzState almost_ghz3_from_eigs(const std::array<double, 8>& eigs, double t);

/// Density matrix assembled directly from (eigs, t) via the eigvecs family.
ComplexMatrix density_from_eigs_ghz3(const std::array<double, 8>& eigs, double t);

}  // namespace mabk
