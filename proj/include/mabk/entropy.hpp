#pragma once

#include <array>
#include <vector>

#include "mabk/ghz.hpp"
#include "mabk/linalg.hpp"

namespace mabk {

/// Classical-quantum state: a distribution over classical outcomes with one
/// conditional density matrix of the side system per outcome.
struct CqState {
    std::vector<double> outcome_probs;
    std::vector<ComplexMatrix> conditional_states;

    void require_valid(double tol = 1e-8) const;
    /// H(outcome, side) - H(side), both computed blockwise.
    double conditional_entropy_of_outcome() const;
    /// Shannon entropy of the outcome distribution.
    double outcome_entropy() const;
};

/// cq-state of (X; E) for an in-plane measurement at angle phi_x on qubit 1 of
/// a 3-qubit state, with E the purifying system.
CqState measure_single_cq(const ComplexMatrix& rho, double phi_x);

/// cq-state of (XY; E) for in-plane measurements on qubits 1 and 2.
CqState measure_pair_cq(const ComplexMatrix& rho, double phi_x, double phi_y);

/// H(X|E) = H(XE) - H(E) from first principles (purification + measurement).
double cond_entropy_single(const ComplexMatrix& rho, double phi_x);

/// H(XY|E) = H(XYE) - H(E) from first principles.
double cond_entropy_pair(const ComplexMatrix& rho, double phi_x, double phi_y);

/// H(E|XY) = H(XYE) - H(XY) from first principles (oracle for the |C| form).
double cond_entropy_eve_given_pair(const ComplexMatrix& rho, double phi_x, double phi_y);

/// Closed form of H(X|E) at t = 0, phi = 0 for eigenvalues rho[i*4+jk]:
/// 1 - H({rho_ijk}) + H({rho_ijk + rho_i,~j,~k}).
double closed_form_hxe(const std::array<double, 8>& eigs);

/// Single-outcome bound: 1 - h(1/2 + sqrt(m^2/8 - 1)/2) for m in [2sqrt2, 4],
/// 0 below the GME threshold; rejects m < 0 or m > 4 (round-off clamped).
double bound_F(double m);

/// N-party generalization: 1 - h(1/2 + sqrt(m^2/2^N - 1)/2) on [2^{N/2}, 2^{(N+1)/2}].
double bound_F_nparty(int n, double m);

/// f(m) = 1/4 - (sqrt3/24) sqrt(m^2 - 4) on [2, 4].
double f_of_m(double m);

/// G(m) = 2 - H({1-3f, f, f, f}).
double bound_G(double m);

/// nu_m = 1/4 + (sqrt3/8) sqrt(m^2 - 4); equals 1 - 3 f(m).
double nu_m_pair(double m);

/// Closed form of H(E|XY): h((1 + |C|)/2) with the four-phase sum C, the
/// off-diagonal parameter entering through p = tan^2 t / (1 + tan^2 t).
double pair_entropy_via_C(const AlmostGhzState& state, double p, double phi_x, double phi_y);

/// Inverse of the tau-family violation: nu >= 1/2 with 4 sqrt(2nu^2-2nu+1) = m.
double nu_from_violation_single(double m);

}  // namespace mabk
