#include "mabk/mabk_ops.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace mabk {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double normalize_angle(double phi) {
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
}

// (-1)^k for possibly negative integer k
double sign_pow(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }
long floor_div2(long a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }
long ceil_div2(long a) { return -floor_div2(-a); }
}  // namespace

MeasurementSetting MeasurementSetting::in_plane(double phi) {
    MeasurementSetting s;
    s.kind = Kind::InPlane;
    s.phi = normalize_angle(phi);
    return s;
}

MeasurementSetting MeasurementSetting::bloch(const std::array<double, 3>& a) {
    const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    if (std::abs(n - 1.0) > 1e-12) throw std::invalid_argument("MeasurementSetting: Bloch vector not unit");
    MeasurementSetting s;
    s.kind = Kind::Bloch;
    s.axis = a;
    return s;
}

MeasurementSetting MeasurementSetting::fixed(int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("MeasurementSetting: fixed sign must be +-1");
    MeasurementSetting s;
    s.kind = Kind::Fixed;
    s.sign = sign;
    return s;
}

std::array<double, 3> MeasurementSetting::bloch_vector() const {
    switch (kind) {
        case Kind::InPlane: return {std::cos(phi), std::sin(phi), 0.0};
        case Kind::Bloch: return axis;
        default: throw std::invalid_argument("bloch_vector: fixed-outcome setting has no Bloch vector");
    }
}

MeasurementConfig MeasurementConfig::swapped() const {
    MeasurementConfig out = *this;
    for (auto& p : out.parties) std::swap(p.first, p.second);
    return out;
}

MeasurementConfig MeasurementConfig::in_plane_angles(const std::vector<double>& phis) {
    if (phis.size() % 2 != 0) throw std::invalid_argument("in_plane_angles: need two angles per party");
    MeasurementConfig c;
    for (std::size_t i = 0; i < phis.size(); i += 2) {
        c.parties.emplace_back(MeasurementSetting::in_plane(phis[i]), MeasurementSetting::in_plane(phis[i + 1]));
    }
    return c;
}

ComplexMatrix observable_matrix(const MeasurementSetting& s) {
    if (s.kind == MeasurementSetting::Kind::Fixed) {
        return qubit_identity() * cplx(double(s.sign), 0.0);
    }
    const auto a = s.bloch_vector();
    ComplexMatrix m(2, 2);
    m(0, 0) = a[2];
    m(1, 1) = -a[2];
    m(0, 1) = cplx(a[0], -a[1]);
    m(1, 0) = cplx(a[0], a[1]);
    return m;
}

ComplexMatrix mabk_recursive(int n, const MeasurementConfig& config) {
    if (n < 2) throw std::invalid_argument("mabk_recursive: need n >= 2");
    if (config.n_parties() != std::size_t(n)) throw std::invalid_argument("mabk_recursive: config party count mismatch");

    auto chsh = [](const ComplexMatrix& p, const ComplexMatrix& q, const ComplexMatrix& r,
                   const ComplexMatrix& s) {
        return kron(p, r) + kron(p, s) + kron(q, r) - kron(q, s);
    };

    ComplexMatrix m = chsh(observable_matrix(config.setting(0, 0)), observable_matrix(config.setting(0, 1)),
                           observable_matrix(config.setting(1, 0)), observable_matrix(config.setting(1, 1)));
    ComplexMatrix mbar = chsh(observable_matrix(config.setting(0, 1)), observable_matrix(config.setting(0, 0)),
                              observable_matrix(config.setting(1, 1)), observable_matrix(config.setting(1, 0)));
    for (int k = 2; k < n; ++k) {
        const ComplexMatrix a0 = observable_matrix(config.setting(k, 0));
        const ComplexMatrix a1 = observable_matrix(config.setting(k, 1));
        const ComplexMatrix next = (chsh(m, mbar, a0, a1)) * cplx(0.5, 0.0);
        const ComplexMatrix next_bar = (chsh(mbar, m, a1, a0)) * cplx(0.5, 0.0);
        m = next;
        mbar = next_bar;
    }
    return m;
}

ComplexMatrix mabk_closed(int n, const MeasurementConfig& config) {
    if (n < 2) throw std::invalid_argument("mabk_closed: need n >= 2");
    if (config.n_parties() != std::size_t(n)) throw std::invalid_argument("mabk_closed: config party count mismatch");

    const std::size_t dim = std::size_t(1) << n;
    ComplexMatrix sum(dim, dim);
    double prefactor;
    for (std::uint32_t x = 0; x < (std::uint32_t(1) << n); ++x) {
        const long w = std::popcount(x);
        double sign;
        if (n % 2 == 1) {
            // only strings with omega(x) = (N-1)/2 mod 2 contribute
            const long target = ((n - 1) / 2) % 2;
            if (w % 2 != target) continue;
            sign = sign_pow((((n - 1) / 2) - w) / 2);
        } else if ((n / 2) % 2 == 0) {
            sign = sign_pow(n / 4 - ceil_div2(w));
        } else {
            sign = sign_pow((n - 2) / 4 - floor_div2(w));
        }
        // party 1 = most significant bit of x
        ComplexMatrix term = observable_matrix(config.setting(0, (x >> (n - 1)) & 1));
        for (int i = 1; i < n; ++i) {
            term = kron(term, observable_matrix(config.setting(i, (x >> (n - 1 - i)) & 1)));
        }
        sum += term * cplx(sign, 0.0);
    }
    prefactor = (n % 2 == 1) ? std::ldexp(1.0, -(n - 3) / 2) : std::ldexp(1.0, -(n - 2) / 2);
    return sum * cplx(prefactor, 0.0);
}

double mabk_expectation(const ComplexMatrix& rho, int n, const MeasurementConfig& config) {
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("mabk_expectation: dimension mismatch");
    const ComplexMatrix m = mabk_recursive(n, config);
    cplx tr = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) tr += m(r, c) * rho(c, r);
    return tr.real();
}

MabkBounds mabk_bounds(int n) {
    if (n < 2) throw std::invalid_argument("mabk_bounds: need n >= 2");
    return {2.0, std::exp2(0.5 * n), std::exp2(0.5 * (n + 1))};
}

}  // namespace mabk
