#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mabk {

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;  // signed distance to the tolerance, >= 0 passes
    std::string detail;
};

/// Theorem 1 pipeline checks: symmetrization, block structure, rotations,
/// rho+/rho- equivalence, Lemma 1 blocks, entropy non-increase.
std::vector<CheckResult> verify_reduction_suite(std::uint64_t seed, int trials);

/// Appendix D/E/F checks: closed-form MABK, vector properties, tau
/// optimality, KKT enumeration, |C| formula, closed-form entropies.
std::vector<CheckResult> verify_appendices_suite(std::uint64_t seed, int trials);

/// Theorem 2 / Corollary 1 soundness and witness checks.
std::vector<CheckResult> verify_bounds_suite(std::uint64_t seed, int trials);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace mabk
