#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mabk/linalg.hpp"

namespace mabk {

/// One binary observable: an in-plane angle, a full Bloch vector, or the
/// fixed-outcome +-identity of rank-two projective measurements.
struct MeasurementSetting {
    enum class Kind { InPlane, Bloch, Fixed };

    Kind kind = Kind::InPlane;
    double phi = 0.0;                       // InPlane, normalized to [0, 2pi)
    std::array<double, 3> axis{1, 0, 0};    // Bloch, unit norm
    int sign = +1;                          // Fixed

    static MeasurementSetting in_plane(double phi);
    static MeasurementSetting bloch(const std::array<double, 3>& a);
    static MeasurementSetting fixed(int sign);

    /// Bloch vector for rank-one kinds; throws for Fixed.
    std::array<double, 3> bloch_vector() const;
    bool is_fixed() const { return kind == Kind::Fixed; }
};

/// Two binary observables per party.
struct MeasurementConfig {
    std::vector<std::pair<MeasurementSetting, MeasurementSetting>> parties;

    std::size_t n_parties() const { return parties.size(); }
    const MeasurementSetting& setting(std::size_t party, int x) const {
        return x == 0 ? parties[party].first : parties[party].second;
    }
    /// Config with every party's setting pair swapped (the bar operation).
    MeasurementConfig swapped() const;

    static MeasurementConfig in_plane_angles(const std::vector<double>& phis);
};

/// 2x2 Hermitian observable of a setting: a.sigma, or +-id for Fixed.
ComplexMatrix observable_matrix(const MeasurementSetting& s);

/// MABK operator built by the CHSH recursion M_N = (1/2) G(M_{N-1}, barM_{N-1}, A0, A1).
ComplexMatrix mabk_recursive(int n, const MeasurementConfig& config);

/// MABK operator from the closed forms (three parity branches over bit strings,
/// party 1 = most significant bit). Equals mabk_recursive entrywise.
ComplexMatrix mabk_closed(int n, const MeasurementConfig& config);

/// <M_N> = Tr[M_N rho]
double mabk_expectation(const ComplexMatrix& rho, int n, const MeasurementConfig& config);

struct MabkBounds {
    double classical;  // 2
    double gme;        // 2^{N/2}
    double quantum;    // 2^{(N+1)/2}
};
MabkBounds mabk_bounds(int n);

}  // namespace mabk
