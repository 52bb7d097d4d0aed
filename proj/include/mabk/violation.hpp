#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mabk/linalg.hpp"
#include "mabk/mabk_ops.hpp"

namespace mabk {

enum class CorrelationVariant { Standard, Prime, DoublePrime };

const char* variant_name(CorrelationVariant v);

/// Rectangular matrix of full-Pauli correlators Tr[rho s_{v1} x ... x s_{vN}]
/// with a fixed party bipartition. Standard splits parties (1..ceil(N/2)) into
/// rows; Prime/DoublePrime are the two alternative 3-party row/column choices.
struct CorrelationMatrix {
    CorrelationVariant variant = CorrelationVariant::Standard;
    int n = 3;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Theorem 2 output: bound 2*sqrt(t0+t1) with the top two eigenpairs of T T^T.
struct ViolationBound {
    double bound = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<double> tvec0;  // unit eigenvectors of T T^T (row space)
    std::vector<double> tvec1;
    CorrelationVariant variant = CorrelationVariant::Standard;
    int n = 3;
    CorrelationMatrix corr;                  // the matrix the bound came from
    std::optional<MeasurementConfig> tight;  // witness, when one was found
};

/// Tr[rho s_{v1} x ... x s_{vN}] with nu components in {1,2,3} (X,Y,Z).
double pauli_string_correlator(const ComplexMatrix& rho, const std::vector<int>& nus);

CorrelationMatrix correlation_matrix(const ComplexMatrix& rho, int n,
                                     CorrelationVariant variant = CorrelationVariant::Standard);

ViolationBound theorem2_bound(const ComplexMatrix& rho, int n,
                              CorrelationVariant variant = CorrelationVariant::Standard);

/// min over all three variants (n = 3 only).
ViolationBound theorem2_bound_min_variant(const ComplexMatrix& rho);

/// Corollary 1: 4*sqrt(sum_{jk} (rho_{0jk} - rho_{1jk})^2) for ordered eigenvalues
/// (eigs indexed i*4 + jk; requires rho_{0jk} >= rho_{1jk}).
double corollary1_bound(const std::array<double, 8>& eigs);

/// The structured tensor-sum vectors of the closed-form MABK expectation
/// <M_N> = prefactor * (v0.T u0 + v1.T u1) for rank-one settings.
struct AppendixDVectors {
    std::vector<double> v0, v1, u0, u1;
    double prefactor = 1.0;
};
AppendixDVectors appendix_d_vectors(const MeasurementConfig& config, int n);

/// <M_N> evaluated through the correlation matrix (rank-one settings only).
double mabk_expectation_rank1(const ComplexMatrix& rho, int n, const MeasurementConfig& config);
double mabk_expectation_from_corr(const CorrelationMatrix& t, const MeasurementConfig& config);

struct WitnessSearchConfig {
    int restarts = 32;
    int als_sweeps = 80;
    int polish_rounds = 60;
    double residual_threshold = 1e-6;
    std::uint64_t seed = 12345;
};

/// Search for measurements satisfying the tightness system: returns a config
/// whose MABK expectation equals bound.bound within the residual threshold.
/// Absence of a witness does not disprove tightness.
std::optional<MeasurementConfig> tightness_witness(const ViolationBound& bound, int n,
                                                   const WitnessSearchConfig& cfg = {});

}  // namespace mabk
