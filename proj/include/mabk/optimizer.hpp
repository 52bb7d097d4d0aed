#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mabk/entropy.hpp"
#include "mabk/ghz.hpp"
#include "mabk/mabk_ops.hpp"

namespace mabk {

struct OptimizerConfig {
    int restarts = 64;
    std::uint64_t seed = 12345;
    int max_iterations = 260;  // Nelder-Mead iterations per penalty stage
    std::vector<double> penalty_weight_schedule = {1e3, 1e6, 1e9};
    double simplex_step = 0.15;
    double convergence_tol = 1e-12;

    void require_valid() const;
};

struct OptimizationResult {
    double value = 0.0;                  // best feasible entropy (bits)
    AlmostGhzState argmin_state;
    std::array<double, 7> argmin_angles{};  // 6 in-plane angles, then t
    double achieved_violation = 0.0;
    bool feasible = false;
    long iterations_used = 0;
};

/// Swap within each (j,k) pair so that rho_{0jk} >= rho_{1jk}.
std::array<double, 8> normalize_ordering(const std::array<double, 8>& eigs);

/// min H(X_{A0}|E) over states (rho_ijk, t) and in-plane angles subject to
/// <M_3> >= m (penalty method + seeded multistart Nelder-Mead).
OptimizationResult minimize_hxe(double m, const OptimizerConfig& cfg = {});

/// min H(X_{A0} Y_{B0}|E), same constraint set.
OptimizationResult minimize_hxy(double m, const OptimizerConfig& cfg = {});

/// Maximum MABK expectation over rank-one settings (full Bloch sphere per
/// party), optionally also over fixed-outcome +-id settings. Grid-then-refine
/// coordinate search plus exact see-saw polish; deterministic per seed.
struct BruteForceResult {
    double max = 0.0;
    MeasurementConfig argmax;
};
BruteForceResult brute_force_mabk_max(const ComplexMatrix& rho, int n, bool allow_fixed,
                                      const OptimizerConfig& cfg = {});

/// Samples ordered eigenvalue vectors with corollary1_bound >= m and checks
/// the closed-form entropy against the tau-family value 1 - h(nu_m).
struct TauOptimalityReport {
    double m = 0.0;
    int samples = 0;
    int violations = 0;
    double worst_margin = 0.0;  // min of (closed_form_hxe - (1 - h(nu_m)))
};
TauOptimalityReport verify_tau_optimality(double m, int samples, const OptimizerConfig& cfg = {});

/// Evaluates every KKT critical case of the pair-entropy relaxation and
/// returns the entropy maximizer (case (iii) with nu_m on the open interval).
struct KktResult {
    std::string best_case;
    std::array<double, 4> distribution{};
    double entropy = 0.0;
};
KktResult kkt_enumerate(double m);

/// Fast evaluators used by the optimizer and exposed for tests: entropy and
/// violation of the 3-party reduced family parameterized by (eigs, t, angles).
double family_hxe(const std::array<double, 8>& eigs, double t, double phi_x);
double family_hxy(const std::array<double, 8>& eigs, double t, double phi_x, double phi_y);
double family_violation(const std::array<double, 8>& eigs, double t, const std::array<double, 6>& angles);

}  // namespace mabk
