#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "mabk/linalg.hpp"
#include "mabk/reduction.hpp"
#include "mabk/rng.hpp"

using namespace mabk;

namespace {

ComplexMatrix random_small(Rng& rng, std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
    return m;
}

// independent index-formula Kronecker product used as the oracle
ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            m(r, c) = a(r / b.rows(), c / b.cols()) * b(r % b.rows(), c % b.cols());
    return m;
}

}  // namespace

TEST_CASE("matrix construction validates dimensions") {
    CHECK_THROWS_AS(ComplexMatrix(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), std::invalid_argument);
    CHECK_NOTHROW(ComplexMatrix(2, 2, std::vector<cplx>(4)));
}

TEST_CASE("kron identity and diagonal cases") {
    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    CHECK(kron(id2, id2).max_abs_diff(ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix d1 = ComplexMatrix::diagonal({1.0, 2.0});
    const ComplexMatrix d2 = ComplexMatrix::diagonal({3.0, 4.0});
    CHECK(kron(d1, d2).max_abs_diff(ComplexMatrix::diagonal({3.0, 4.0, 6.0, 8.0})) == 0.0);
}

TEST_CASE("kron(X, Z) has the hand-expanded entries") {
    const ComplexMatrix m = kron(pauli_x(), pauli_z());
    ComplexMatrix expect(4, 4);
    expect(0, 2) = 1.0;
    expect(1, 3) = -1.0;
    expect(2, 0) = 1.0;
    expect(3, 1) = -1.0;
    CHECK(m.max_abs_diff(expect) == 0.0);
    CHECK(m.max_abs_diff(kron_oracle(pauli_x(), pauli_z())) == 0.0);
}

TEST_CASE("kron matches the index-formula oracle and associates") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_small(rng, 2, 2);
        const ComplexMatrix b = random_small(rng, 2, 2);
        const ComplexMatrix c = random_small(rng, 2, 2);
        CHECK(kron(a, b).max_abs_diff(kron_oracle(a, b)) < 1e-14);
        CHECK(kron(kron(a, b), c).max_abs_diff(kron(a, kron(b, c))) < 1e-12);
    }
}

TEST_CASE("partial trace on product and entangled states") {
    ComplexMatrix ket00(4, 1);
    ket00(0, 0) = 1.0;
    const ComplexMatrix rho00 = ket00 * ket00.adjoint();
    ComplexMatrix expect0(2, 2);
    expect0(0, 0) = 1.0;
    CHECK(partial_trace(rho00, {2, 2}, {0}).max_abs_diff(expect0) == 0.0);

    ComplexMatrix bell(4, 1);
    bell(0, 0) = bell(3, 0) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix rho_bell = bell * bell.adjoint();
    CHECK(partial_trace(rho_bell, {2, 2}, {0}).max_abs_diff(ComplexMatrix::identity(2) * cplx(0.5, 0.0)) < 1e-15);

    // GHZ3 reduced to the first two qubits: (|00><00| + |11><11|)/2
    ComplexMatrix ghz(8, 1);
    ghz(0, 0) = ghz(7, 0) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix reduced = partial_trace(ghz * ghz.adjoint(), {2, 2, 2}, {0, 1});
    ComplexMatrix expect(4, 4);
    expect(0, 0) = 0.5;
    expect(3, 3) = 0.5;
    CHECK(reduced.max_abs_diff(expect) < 1e-15);

    CHECK_THROWS_AS(partial_trace(rho_bell, {2, 3}, {0}), std::invalid_argument);
}

TEST_CASE("partial trace is linear and trace preserving") {
    Rng rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_small(rng, 8, 8);
        const ComplexMatrix b = random_small(rng, 8, 8);
        const cplx alpha(rng.normal(), rng.normal());
        const ComplexMatrix lhs = partial_trace(a * alpha + b, {2, 2, 2}, {1});
        const ComplexMatrix rhs = partial_trace(a, {2, 2, 2}, {1}) * alpha + partial_trace(b, {2, 2, 2}, {1});
        CHECK(lhs.max_abs_diff(rhs) < 1e-12);
        CHECK(std::abs(partial_trace(a, {2, 2, 2}, {0, 2}).trace() - a.trace()) < 1e-12);
    }
}

TEST_CASE("hermitian_eig on diagonal and Pauli matrices") {
    const auto diag = hermitian_eig(ComplexMatrix::diagonal({3.0, 1.0, 2.0}));
    CHECK(diag.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(diag.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(diag.values[2] == doctest::Approx(1.0).epsilon(1e-14));

    const auto x = hermitian_eig(pauli_x());
    CHECK(x.values[0] == doctest::Approx(1.0));
    CHECK(x.values[1] == doctest::Approx(-1.0));
    // eigenvectors are |+-> up to phase
    for (int k = 0; k < 2; ++k) {
        const double ratio = (x.vectors(1, k) / x.vectors(0, k)).real();
        CHECK(std::abs(ratio - (k == 0 ? 1.0 : -1.0)) < 1e-12);
    }
}

TEST_CASE("hermitian_eig of the imaginary 2x2 block follows the radical formula") {
    auto expect = [](double l0, double l1, double s) {
        const double rad = std::sqrt((l0 - l1) * (l0 - l1) + 4 * s * s);
        return std::pair{(l0 + l1 + rad) / 2, (l0 + l1 - rad) / 2};
    };
    for (auto [l0, l1, s] : {std::array{0.5, 0.3, 0.1}, std::array{0.5, 0.3, 0.2}, std::array{0.2, 0.7, -0.25}}) {
        ComplexMatrix blk(2, 2);
        blk(0, 0) = l0;
        blk(1, 1) = l1;
        blk(0, 1) = cplx(0.0, s);
        blk(1, 0) = cplx(0.0, -s);
        const auto eig = hermitian_eig(blk);
        const auto [hi, lo] = expect(l0, l1, s);
        CHECK(eig.values[0] == doctest::Approx(hi).epsilon(1e-13));
        CHECK(eig.values[1] == doctest::Approx(lo).epsilon(1e-13));
    }
    // frozen values for (0.5, 0.3, 0.1)
    const auto eig = hermitian_eig(ComplexMatrix(2, 2, {0.5, cplx(0, 0.1), cplx(0, -0.1), 0.3}));
    CHECK(eig.values[0] == doctest::Approx(0.54142135623730951).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(0.25857864376269049).epsilon(1e-14));
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        ComplexMatrix g = random_small(rng, 8, 8);
        ComplexMatrix a = (g + g.adjoint()) * cplx(0.5, 0.0);
        const auto eig = hermitian_eig(a);
        std::vector<cplx> d(eig.values.begin(), eig.values.end());
        const ComplexMatrix recon = eig.vectors * ComplexMatrix::diagonal(d) * eig.vectors.adjoint();
        CHECK(recon.max_abs_diff(a) < 1e-9);
        const ComplexMatrix gram = eig.vectors.adjoint() * eig.vectors;
        CHECK(gram.max_abs_diff(ComplexMatrix::identity(8)) < 1e-10);
        // residual per pair
        for (std::size_t k = 0; k < 8; ++k) {
            ComplexMatrix v(8, 1);
            for (std::size_t r = 0; r < 8; ++r) v(r, 0) = eig.vectors(r, k);
            CHECK((a * v - v * cplx(eig.values[k], 0.0)).max_abs() < 1e-9);
        }
    }
    CHECK_THROWS_AS(hermitian_eig(random_small(rng, 4, 4)), std::invalid_argument);
}

TEST_CASE("purify round-trips through the partial trace") {
    ComplexMatrix ket0(2, 2);
    ket0(0, 0) = 1.0;
    const ComplexMatrix psi0 = purify(ket0);
    CHECK(psi0.rows() == 4);
    CHECK(std::abs(psi0(0, 0)) == doctest::Approx(1.0));  // |0> (x) |e0> up to phase

    const ComplexMatrix mixed = ComplexMatrix::identity(2) * cplx(0.5, 0.0);
    const ComplexMatrix bell = purify(mixed);
    const auto schmidt = hermitian_eigenvalues(partial_trace(bell * bell.adjoint(), {2, 2}, {0}));
    CHECK(schmidt[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(schmidt[1] == doctest::Approx(0.5).epsilon(1e-12));

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix rho = random_density_matrix(8, 7000 + trial);
        const ComplexMatrix phi = purify(rho);
        const ComplexMatrix back = partial_trace(phi * phi.adjoint(), {8, 8}, {0});
        CHECK(back.max_abs_diff(rho) < 1e-10);
    }

    CHECK_THROWS_AS(purify(pauli_x()), std::invalid_argument);
}

TEST_CASE("von Neumann entropy basics") {
    ComplexMatrix pure(2, 2);
    pure(0, 0) = 1.0;
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0));
    CHECK(von_neumann_entropy(ComplexMatrix::identity(2) * cplx(0.5, 0.0)) == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(ComplexMatrix::diagonal({0.5, 0.25, 0.25})) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK_THROWS_AS(von_neumann_entropy(pauli_z()), std::invalid_argument);
}

TEST_CASE("entropy is invariant under unitary conjugation") {
    for (int trial = 0; trial < 6; ++trial) {
        const ComplexMatrix rho = random_density_matrix(8, 1234 + trial);
        const ComplexMatrix u = random_unitary(8, 4321 + trial);
        const double h0 = von_neumann_entropy(rho);
        const double h1 = von_neumann_entropy(u * rho * u.adjoint());
        CHECK(std::abs(h0 - h1) < 1e-9);
    }
}
