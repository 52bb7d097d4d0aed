#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mabk/linalg.hpp"

namespace mabk {

/// One simultaneous 2x2 block of two binary projective measurements. Blocks
/// coming from 1x1 joint eigenspaces are embedded with an artificial second
/// dimension and carry no second basis column.
struct MeasurementBlock {
    ComplexMatrix basis = ComplexMatrix(1, 1);  // dim x 1 or dim x 2, orthonormal columns
    bool artificial = false;
    std::array<ComplexMatrix, 4> restrictions{ComplexMatrix(2, 2), ComplexMatrix(2, 2),
                                              ComplexMatrix(2, 2), ComplexMatrix(2, 2)};  // P0,P1,Q0,Q1
};

struct BlockDecomposition {
    std::vector<MeasurementBlock> blocks;
    std::size_t embedding_dim = 0;
};

/// Simultaneous 2x2 block diagonalization of two complementary projector
/// pairs. 1x1 joint blocks are artificially enlarged so every restricted
/// projector is rank one within its block.
BlockDecomposition block_diagonalize(const ComplexMatrix& p0, const ComplexMatrix& p1,
                                     const ComplexMatrix& q0, const ComplexMatrix& q1);

/// Average over all even-weight Z-string conjugations: kills every in-plane
/// marginal of strict party subsets and all GHZ coherences across different u.
ComplexMatrix symmetrize(const ComplexMatrix& rho, int n);

struct GhzBlockReport {
    bool block_diagonal = false;
    double max_off_block = 0.0;
};
GhzBlockReport ghz_block_check(const ComplexMatrix& rho, int n, double tol = 1e-10);

/// Conjugation by the local z-rotations R_i(theta_i) = cos(t/2) id + i sin(t/2) Z.
ComplexMatrix apply_local_z_rotations(const ComplexMatrix& rho, const std::vector<double>& thetas);

/// Block rotation angle beta(theta, u) = theta_1 + sum_j (-1)^{u_j} theta_{j+1}.
double beta_angle(const std::vector<double>& thetas, std::uint32_t u, int n);

/// Solve theta_1 + sum (-1)^{u_j} theta_{j+1} = target_u for N (u, target)
/// constraints; nullopt when the sign matrix is singular.
std::optional<std::vector<double>> solve_rotation_angles(
    const std::vector<std::pair<std::uint32_t, double>>& targets, int n);

/// Negate the real part of every off-diagonal GHZ-block entry (r_u -> -r_u).
ComplexMatrix flip_real_offdiagonals(const ComplexMatrix& rho, int n);

/// Born-rule joint outcome distribution for one in-plane observable per party,
/// outcomes ordered with party 1 as the most significant bit.
std::vector<double> statistics(const ComplexMatrix& rho, int n, const std::vector<double>& angles);

struct EntropyNonincreaseReport {
    int trials = 0;
    int violations = 0;
    double worst_margin = 0.0;  // min over trials of H(X|E)_rho - H(X|E)_symmetrized
};

/// For `trials` angles, checks H(X|E)_rho >= H(X|E)_{symmetrize(rho)} - 1e-8.
EntropyNonincreaseReport entropy_nonincrease_check(const ComplexMatrix& rho, int trials,
                                                   std::uint64_t seed = 99);

/// Seeded full-rank random density matrix (Ginibre construction).
ComplexMatrix random_density_matrix(std::size_t dim, std::uint64_t seed);

/// Haar-ish random unitary from Gram-Schmidt on a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace mabk
