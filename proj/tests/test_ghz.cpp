#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mabk/ghz.hpp"
#include "mabk/rng.hpp"

using namespace mabk;

namespace {

AlmostGhzState random_family_state(Rng& rng, bool keep_all_s = false) {
    AlmostGhzState st = AlmostGhzState::zero(3);
    double sum = 0.0;
    for (std::size_t u = 0; u < 4; ++u) {
        st.lambda0[u] = rng.uniform();
        st.lambda1[u] = rng.uniform();
        sum += st.lambda0[u] + st.lambda1[u];
    }
    for (std::size_t u = 0; u < 4; ++u) {
        st.lambda0[u] /= sum;
        st.lambda1[u] /= sum;
    }
    for (std::size_t u = 0; u < 4; ++u) {
        if (u == 3 || keep_all_s) {
            const double cap = std::sqrt(st.lambda0[u] * st.lambda1[u]);
            st.s[u] = rng.uniform(-cap, cap);
        }
    }
    return st;
}

}  // namespace

TEST_CASE("GHZ basis vectors match the definition at N = 3 and N = 2") {
    const double inv = 1.0 / std::sqrt(2.0);

    const ComplexMatrix v000 = ghz_basis_vector(3, {0, 0b00, 2});
    CHECK(std::abs(v000(0, 0) - inv) < 1e-15);  // |000>
    CHECK(std::abs(v000(7, 0) - inv) < 1e-15);  // +|111>

    const ComplexMatrix v101 = ghz_basis_vector(3, {1, 0b01, 2});
    CHECK(std::abs(v101(1, 0) - inv) < 1e-15);  // |001>
    CHECK(std::abs(v101(6, 0) + inv) < 1e-15);  // -|110>

    const ComplexMatrix bell = ghz_basis_vector(2, {0, 0, 1});
    CHECK(std::abs(bell(0, 0) - inv) < 1e-15);
    CHECK(std::abs(bell(3, 0) - inv) < 1e-15);

    CHECK_THROWS_AS(ghz_basis_vector(3, {0, 0, 3}), std::invalid_argument);
}

TEST_CASE("GHZ basis is orthonormal for N in 2..5") {
    for (int n = 2; n <= 5; ++n) {
        const ComplexMatrix& u = ghz_basis_unitary(n);
        const ComplexMatrix gram = u.adjoint() * u;
        CHECK(gram.max_abs_diff(ComplexMatrix::identity(u.rows())) < 1e-12);
    }
}

TEST_CASE("to_density_matrix reproduces the block matrix elements") {
    // pure GHZ
    AlmostGhzState ghz = AlmostGhzState::zero(3);
    ghz.lambda0[0] = 1.0;
    const ComplexMatrix rho = to_density_matrix(ghz);
    const ComplexMatrix v = ghz_basis_vector(3, {0, 0, 2});
    CHECK(rho.max_abs_diff(v * v.adjoint()) < 1e-15);

    // the (1,1) block with maximal s is the rank-one projector onto
    // (|psi_011> - i |psi_111>)/sqrt2 (unit eigenvector of [[.5,.5i],[-.5i,.5]])
    AlmostGhzState edge = AlmostGhzState::zero(3);
    edge.lambda0[3] = edge.lambda1[3] = 0.5;
    edge.s[3] = 0.5;
    const ComplexMatrix a = ghz_basis_vector(3, {0, 3, 2});
    const ComplexMatrix b = ghz_basis_vector(3, {1, 3, 2});
    const ComplexMatrix vec = (a - b * cplx(0.0, 1.0)) * cplx(1.0 / std::sqrt(2.0), 0.0);
    CHECK(to_density_matrix(edge).max_abs_diff(vec * vec.adjoint()) < 1e-15);

    // tau family: two GHZ-diagonal weights
    const ComplexMatrix tau = to_density_matrix(tau_family_state(3, 0.7));
    const ComplexMatrix p0 = ghz_basis_vector(3, {0, 0, 2});
    const ComplexMatrix p3 = ghz_basis_vector(3, {0, 3, 2});
    CHECK(tau.max_abs_diff(p0 * p0.adjoint() * cplx(0.7, 0.0) + p3 * p3.adjoint() * cplx(0.3, 0.0)) < 1e-15);

    AlmostGhzState bad = AlmostGhzState::zero(3);
    bad.lambda0[0] = 0.5;  // trace 0.5
    CHECK_THROWS_AS(to_density_matrix(bad), std::invalid_argument);
}

TEST_CASE("density matrices are unit trace and PSD") {
    Rng rng(314);
    for (int trial = 0; trial < 25; ++trial) {
        const AlmostGhzState st = random_family_state(rng, true);
        const ComplexMatrix rho = to_density_matrix(st);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
        CHECK(hermitian_eigenvalues(rho).back() > -1e-10);
    }
}

TEST_CASE("all-diagonal states commute with each other") {
    Rng rng(217);
    for (int trial = 0; trial < 10; ++trial) {
        AlmostGhzState a = random_family_state(rng);
        AlmostGhzState b = random_family_state(rng);
        a.s[3] = b.s[3] = 0.0;
        const ComplexMatrix ra = to_density_matrix(a);
        const ComplexMatrix rb = to_density_matrix(b);
        CHECK((ra * rb - rb * ra).max_abs() < 1e-13);
    }
}

TEST_CASE("closed-form eigenvalues match the radical and the eigensolver") {
    // s = 0: eigenvalues are the lambdas (the radical orders the (1,1) pair)
    Rng rng(3);
    AlmostGhzState diag = random_family_state(rng);
    diag.s[3] = 0.0;
    if (diag.lambda0[3] < diag.lambda1[3]) std::swap(diag.lambda0[3], diag.lambda1[3]);
    const auto de = eigvals_almost_ghz3(diag);
    for (std::uint32_t u = 0; u < 4; ++u) {
        CHECK(de[u] == doctest::Approx(diag.lambda0[u]).epsilon(1e-14));
        CHECK(de[4 + u] == doctest::Approx(diag.lambda1[u]).epsilon(1e-14));
    }

    // degenerate block with maximal s collapses to (1, 0)
    AlmostGhzState edge = AlmostGhzState::zero(3);
    edge.lambda0[3] = edge.lambda1[3] = 0.5;
    edge.s[3] = 0.5;
    const auto ee = eigvals_almost_ghz3(edge);
    CHECK(ee[3] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ee[7] == doctest::Approx(0.0).epsilon(1e-14));

    // agreement with the generic eigensolver on 50 random states
    for (int trial = 0; trial < 50; ++trial) {
        const AlmostGhzState st = random_family_state(rng);
        auto closed = eigvals_almost_ghz3(st);
        std::sort(closed.begin(), closed.end(), std::greater<double>());
        const auto numeric = hermitian_eigenvalues(to_density_matrix(st));
        for (int i = 0; i < 8; ++i) CHECK(std::abs(closed[i] - numeric[i]) < 1e-10);
    }

    AlmostGhzState two = AlmostGhzState::zero(2);
    two.lambda0[0] = 1.0;
    CHECK_THROWS_AS(eigvals_almost_ghz3(two), std::invalid_argument);
}

TEST_CASE("t parameter limits and frozen value") {
    CHECK(t_parameter(0.4, 0.1, 0.0) == 0.0);
    CHECK(t_parameter(0.3, 0.3, 0.2) == doctest::Approx(0.78539816339744831).epsilon(1e-14));  // pi/4
    CHECK(t_parameter(0.3, 0.3, 0.0) == 0.0);  // removable singularity pinned to 0
    // (0.4, 0.2, 0.1): arctan(0.2 / (0.2 + sqrt(0.08))) = pi/8
    CHECK(t_parameter(0.4, 0.2, 0.1) == doctest::Approx(0.39269908169872415).epsilon(1e-13));
    // s = 0 with reversed gap pairs the eigenvector with psi_111
    CHECK(t_parameter(0.1, 0.4, 0.0) == doctest::Approx(1.5707963267948966));

    // rotating the block by t zeroes the off-diagonal
    const double l0 = 0.4, l1 = 0.2, s = 0.1;
    const double t = t_parameter(l0, l1, s);
    ComplexMatrix blk(2, 2, {l0, cplx(0, s), cplx(0, -s), l1});
    ComplexMatrix rot(2, 2, {std::cos(t), cplx(0, -std::sin(t)), cplx(0, -std::sin(t)), std::cos(t)});
    const ComplexMatrix diag = rot.adjoint() * blk * rot;
    CHECK(std::abs(diag(0, 1)) < 1e-15);
}

TEST_CASE("eigenvectors reconstruct the state") {
    // s = 0: eigenvectors are the GHZ basis
    AlmostGhzState diag = AlmostGhzState::zero(3);
    diag.lambda0 = {0.4, 0.1, 0.2, 0.05};
    diag.lambda1 = {0.05, 0.1, 0.05, 0.05};
    const auto vecs0 = eigvecs_almost_ghz3(diag);
    for (std::uint32_t u = 0; u < 4; ++u) {
        CHECK(vecs0[u].max_abs_diff(ghz_basis_vector(3, {0, u, 2})) < 1e-15);
        CHECK(vecs0[4 + u].max_abs_diff(ghz_basis_vector(3, {1, u, 2})) < 1e-15);
    }

    // maximal s at equal lambdas: |rho_011> = (|psi_011> - i |psi_111>)/sqrt2
    AlmostGhzState edge = AlmostGhzState::zero(3);
    edge.lambda0[3] = edge.lambda1[3] = 0.5;
    edge.s[3] = 0.5;
    const auto ve = eigvecs_almost_ghz3(edge);
    const ComplexMatrix expect =
        (ghz_basis_vector(3, {0, 3, 2}) - ghz_basis_vector(3, {1, 3, 2}) * cplx(0, 1)) *
        cplx(1.0 / std::sqrt(2.0), 0.0);
    CHECK(ve[3].max_abs_diff(expect) < 1e-14);

    // reconstruction and orthonormality over 50 random states
    Rng rng(88);
    for (int trial = 0; trial < 50; ++trial) {
        const AlmostGhzState st = random_family_state(rng);
        const auto eigs = eigvals_almost_ghz3(st);
        const auto vecs = eigvecs_almost_ghz3(st);
        ComplexMatrix recon(8, 8);
        for (int k = 0; k < 8; ++k) recon += vecs[k] * vecs[k].adjoint() * cplx(eigs[k], 0.0);
        CHECK(recon.max_abs_diff(to_density_matrix(st)) < 1e-10);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                const cplx ip = (vecs[i].adjoint() * vecs[j])(0, 0);
                CHECK(std::abs(ip - (i == j ? cplx(1) : cplx(0))) < 1e-12);
            }
    }
}

TEST_CASE("eigenvalue/t inverse map round-trips") {
    Rng rng(1212);
    for (int trial = 0; trial < 20; ++trial) {
        const AlmostGhzState st = random_family_state(rng);
        const auto eigs = eigvals_almost_ghz3(st);
        const double t = t_parameter(st.lambda0[3], st.lambda1[3], st.s[3]);
        const AlmostGhzState back = almost_ghz3_from_eigs(eigs, t);
        CHECK(to_density_matrix(back).max_abs_diff(to_density_matrix(st)) < 1e-12);
    }
}

TEST_CASE("normal-form predicate") {
    AlmostGhzState st = AlmostGhzState::zero(3);
    st.lambda0 = {0.3, 0.2, 0.1, 0.1};
    st.lambda1 = {0.1, 0.1, 0.05, 0.05};
    CHECK(st.in_normal_form(3));
    st.s[0] = 0.05;
    CHECK(st.in_normal_form(3));
    st.s[1] = 0.05;
    CHECK_FALSE(st.in_normal_form(3));
}
