#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mabk/ghz.hpp"
#include "mabk/mabk_ops.hpp"
#include "mabk/rng.hpp"

using namespace mabk;

namespace {

const double kPi = 3.14159265358979323846;
const double kRoot2 = std::sqrt(2.0);

MeasurementConfig random_bloch_config(Rng& rng, int n) {
    MeasurementConfig c;
    for (int i = 0; i < n; ++i) {
        auto rand_setting = [&]() {
            const double z = rng.uniform(-1.0, 1.0);
            const double phi = rng.uniform(0.0, 2 * kPi);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            return MeasurementSetting::bloch({r * std::cos(phi), r * std::sin(phi), z});
        };
        c.parties.emplace_back(rand_setting(), rand_setting());
    }
    return c;
}

ComplexMatrix ghz_state(int n) {
    return to_density_matrix(tau_family_state(n, 1.0));
}

}  // namespace

TEST_CASE("observable matrices for the three setting kinds") {
    CHECK(observable_matrix(MeasurementSetting::in_plane(0.0)).max_abs_diff(pauli_x()) < 1e-15);
    CHECK(observable_matrix(MeasurementSetting::in_plane(kPi / 2)).max_abs_diff(pauli_y()) < 1e-15);
    CHECK(observable_matrix(MeasurementSetting::bloch({0, 0, 1})).max_abs_diff(pauli_z()) == 0.0);
    CHECK(observable_matrix(MeasurementSetting::fixed(-1))
              .max_abs_diff(ComplexMatrix::identity(2) * cplx(-1.0, 0.0)) == 0.0);

    // rank-one observables square to the identity
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto cfg = random_bloch_config(rng, 1);
        const ComplexMatrix a = observable_matrix(cfg.setting(0, 0));
        CHECK((a * a).max_abs_diff(ComplexMatrix::identity(2)) < 1e-14);
        CHECK(a.is_hermitian(1e-14));
    }

    CHECK_THROWS_AS(MeasurementSetting::bloch({1, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(MeasurementSetting::fixed(2), std::invalid_argument);
}

TEST_CASE("in-plane settings equal their Bloch form") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const double phi = rng.uniform(0.0, 2 * kPi);
        const ComplexMatrix a = observable_matrix(MeasurementSetting::in_plane(phi));
        const ComplexMatrix b = observable_matrix(MeasurementSetting::bloch({std::cos(phi), std::sin(phi), 0.0}));
        CHECK(a.max_abs_diff(b) < 1e-15);
    }
    // angle normalization to [0, 2pi)
    CHECK(MeasurementSetting::in_plane(-kPi / 2).phi == doctest::Approx(1.5 * kPi));
    CHECK(MeasurementSetting::in_plane(5 * kPi).phi == doctest::Approx(kPi));
}

TEST_CASE("M2 is the CHSH combination") {
    Rng rng(9);
    const MeasurementConfig cfg = random_bloch_config(rng, 2);
    const ComplexMatrix a0 = observable_matrix(cfg.setting(0, 0));
    const ComplexMatrix a1 = observable_matrix(cfg.setting(0, 1));
    const ComplexMatrix b0 = observable_matrix(cfg.setting(1, 0));
    const ComplexMatrix b1 = observable_matrix(cfg.setting(1, 1));
    const ComplexMatrix expect = kron(a0, b0) + kron(a0, b1) + kron(a1, b0) - kron(a1, b1);
    CHECK(mabk_recursive(2, cfg).max_abs_diff(expect) < 1e-14);
    CHECK_THROWS_AS(mabk_recursive(1, MeasurementConfig{}), std::invalid_argument);
}

TEST_CASE("M3 matches the four-term expansion") {
    Rng rng(10);
    const MeasurementConfig cfg = random_bloch_config(rng, 3);
    const ComplexMatrix a0 = observable_matrix(cfg.setting(0, 0));
    const ComplexMatrix a1 = observable_matrix(cfg.setting(0, 1));
    const ComplexMatrix b0 = observable_matrix(cfg.setting(1, 0));
    const ComplexMatrix b1 = observable_matrix(cfg.setting(1, 1));
    const ComplexMatrix c0 = observable_matrix(cfg.setting(2, 0));
    const ComplexMatrix c1 = observable_matrix(cfg.setting(2, 1));
    const ComplexMatrix expect = kron({a0, b0, c1}) + kron({a0, b1, c0}) + kron({a1, b0, c0}) - kron({a1, b1, c1});
    CHECK(mabk_recursive(3, cfg).max_abs_diff(expect) < 1e-14);
    CHECK(mabk_closed(3, cfg).max_abs_diff(expect) < 1e-14);
}

TEST_CASE("closed forms equal the recursion on every parity branch") {
    Rng rng(11);
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const MeasurementConfig cfg = random_bloch_config(rng, n);
            CHECK(mabk_closed(n, cfg).max_abs_diff(mabk_recursive(n, cfg)) < 1e-10);
        }
        // fixed-outcome settings pass through both constructions
        MeasurementConfig fixed_cfg = random_bloch_config(rng, n);
        fixed_cfg.parties[0] = {MeasurementSetting::fixed(+1), MeasurementSetting::fixed(-1)};
        CHECK(mabk_closed(n, fixed_cfg).max_abs_diff(mabk_recursive(n, fixed_cfg)) < 1e-10);
    }
}

TEST_CASE("setting swap produces the bar operator with the same spectrum") {
    Rng rng(12);
    for (int n = 2; n <= 4; ++n) {
        const MeasurementConfig cfg = random_bloch_config(rng, n);
        const auto s0 = hermitian_eigenvalues(mabk_recursive(n, cfg));
        const auto s1 = hermitian_eigenvalues(mabk_recursive(n, cfg.swapped()));
        for (std::size_t i = 0; i < s0.size(); ++i) CHECK(s0[i] == doctest::Approx(s1[i]).epsilon(1e-10));
    }
}

TEST_CASE("GHZ with the Mermin angles reaches the quantum bound") {
    const MeasurementConfig cfg = MeasurementConfig::in_plane_angles(
        {kPi / 2, kPi, kPi / 2, kPi, kPi / 2, kPi});
    CHECK(mabk_expectation(ghz_state(3), 3, cfg) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("the Remark 1 state reaches 2 sqrt 2 only with fixed settings") {
    // id/2 (x) Bell projector, first party measuring the identity
    ComplexMatrix bell(4, 1);
    bell(0, 0) = bell(3, 0) = 1.0 / kRoot2;
    const ComplexMatrix rho = kron(ComplexMatrix::identity(2) * cplx(0.5, 0.0), bell * bell.adjoint());

    MeasurementConfig cfg;
    cfg.parties.push_back({MeasurementSetting::fixed(+1), MeasurementSetting::fixed(+1)});
    // CHSH-optimal pair for <XX> = 1, <YY> = -1 correlations
    cfg.parties.push_back({MeasurementSetting::in_plane(0.0), MeasurementSetting::in_plane(-kPi / 2)});
    cfg.parties.push_back({MeasurementSetting::in_plane(kPi / 4), MeasurementSetting::in_plane(-kPi / 4)});
    CHECK(mabk_expectation(rho, 3, cfg) == doctest::Approx(2.0 * kRoot2).epsilon(1e-12));

    // with in-plane settings the value stays within the classical bound
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> phis(6);
        for (auto& p : phis) p = rng.uniform(0.0, 2 * kPi);
        const double v = mabk_expectation(rho, 3, MeasurementConfig::in_plane_angles(phis));
        CHECK(std::abs(v) <= 2.0 + 1e-9);
    }
}

TEST_CASE("product states with in-plane settings stay within the classical bound") {
    ComplexMatrix ket(8, 1);
    ket(0, 0) = 1.0;
    const ComplexMatrix rho = ket * ket.adjoint();
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> phis(6);
        for (auto& p : phis) p = rng.uniform(0.0, 2 * kPi);
        CHECK(std::abs(mabk_expectation(rho, 3, MeasurementConfig::in_plane_angles(phis))) <= 2.0 + 1e-9);
    }
}

TEST_CASE("expectation is linear in the state") {
    Rng rng(15);
    const MeasurementConfig cfg = random_bloch_config(rng, 3);
    const ComplexMatrix ghz = ghz_state(3);
    const ComplexMatrix mixed = ComplexMatrix::identity(8) * cplx(0.125, 0.0);
    for (double w : {0.0, 0.3, 0.72, 1.0}) {
        const ComplexMatrix mix = ghz * cplx(w, 0.0) + mixed * cplx(1.0 - w, 0.0);
        const double lhs = mabk_expectation(mix, 3, cfg);
        const double rhs = w * mabk_expectation(ghz, 3, cfg) + (1.0 - w) * mabk_expectation(mixed, 3, cfg);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("spectrum of the MABK operator respects the quantum bound") {
    Rng rng(16);
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const MeasurementConfig cfg = random_bloch_config(rng, n);
            const auto spec = hermitian_eigenvalues(mabk_recursive(n, cfg));
            const double qb = std::exp2(0.5 * (n + 1));
            CHECK(spec.front() <= qb + 1e-9);
            CHECK(spec.back() >= -qb - 1e-9);
        }
    }
}

TEST_CASE("threshold values") {
    auto b2 = mabk_bounds(2);
    CHECK(b2.classical == 2.0);
    CHECK(b2.gme == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(b2.quantum == doctest::Approx(2.0 * kRoot2).epsilon(1e-15));
    auto b3 = mabk_bounds(3);
    CHECK(b3.gme == doctest::Approx(2.0 * kRoot2).epsilon(1e-15));
    CHECK(b3.quantum == doctest::Approx(4.0).epsilon(1e-15));
    auto b5 = mabk_bounds(5);
    CHECK(b5.gme == doctest::Approx(4.0 * kRoot2).epsilon(1e-15));
    CHECK(b5.quantum == doctest::Approx(8.0).epsilon(1e-15));
}
