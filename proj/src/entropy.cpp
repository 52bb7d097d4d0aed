#include "mabk/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace mabk {

namespace {

constexpr double kGmeThreshold3 = 2.8284271247461902909;  // 2 sqrt 2
constexpr double kDomainSlack = 1e-12;

// Collect eigenvalues of every conditional block scaled by its probability.
std::vector<double> joint_spectrum(const CqState& cq) {
    std::vector<double> out;
    for (std::size_t a = 0; a < cq.outcome_probs.size(); ++a) {
        const double p = cq.outcome_probs[a];
        if (p <= 0.0) continue;
        const auto eigs = hermitian_eigenvalues(cq.conditional_states[a]);
        for (double l : eigs) out.push_back(std::max(0.0, p * l));
    }
    return out;
}

}  // namespace

void CqState::require_valid(double tol) const {
    if (outcome_probs.size() != conditional_states.size())
        throw std::invalid_argument("CqState: probs/states size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < outcome_probs.size(); ++i) {
        if (outcome_probs[i] < -tol) throw std::invalid_argument("CqState: negative probability");
        if (outcome_probs[i] > tol && !conditional_states[i].is_density_matrix(1e-8, 1e-6, 1e-7))
            throw std::invalid_argument("CqState: conditional state is not a density matrix");
        sum += outcome_probs[i];
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("CqState: probabilities do not sum to 1");
}

double CqState::conditional_entropy_of_outcome() const {
    const double h_joint = shannon_entropy(joint_spectrum(*this));
    ComplexMatrix side = conditional_states.at(0) * cplx(outcome_probs.at(0), 0.0);
    for (std::size_t a = 1; a < outcome_probs.size(); ++a)
        side += conditional_states[a] * cplx(outcome_probs[a], 0.0);
    auto side_eigs = hermitian_eigenvalues(side);
    for (double& l : side_eigs) l = std::max(0.0, l);
    return h_joint - shannon_entropy(side_eigs);
}

double CqState::outcome_entropy() const { return shannon_entropy(outcome_probs); }

namespace {

// <a| applied to the given qubit of a purified column vector |phi> on
// (2^n system qubits) x (ancilla of dim 2^n); returns the projected vector
// on the remaining system qubits x ancilla.
ComplexMatrix project_qubit(const ComplexMatrix& phi, int n, int qubit, int outcome, double phi_angle) {
    const std::size_t anc = phi.rows() >> n;
    const std::size_t sys = std::size_t(1) << n;
    const std::size_t half = sys >> 1;
    const cplx w = std::polar(1.0, -phi_angle) * (outcome ? -1.0 : 1.0);
    const double inv = 1.0 / std::sqrt(2.0);
    ComplexMatrix out(half * anc, 1);
    const int shift = n - 1 - qubit;  // party 1 = most significant qubit
    for (std::size_t rest = 0; rest < half; ++rest) {
        // reinsert a 0/1 at position `qubit` of the system index
        const std::size_t hi = rest >> shift;
        const std::size_t lo = rest & ((std::size_t(1) << shift) - 1);
        const std::size_t idx0 = (hi << (shift + 1)) | lo;
        const std::size_t idx1 = idx0 | (std::size_t(1) << shift);
        for (std::size_t e = 0; e < anc; ++e) {
            out(rest * anc + e, 0) =
                inv * (phi(idx0 * anc + e, 0) + w * phi(idx1 * anc + e, 0));
        }
    }
    return out;
}

// Gram matrix of the ancilla part: same nonzero spectrum as the conditional
// side state, trace = outcome probability.
ComplexMatrix ancilla_gram(const ComplexMatrix& projected, std::size_t anc) {
    const std::size_t rest = projected.rows() / anc;
    ComplexMatrix g(anc, anc);
    for (std::size_t e = 0; e < anc; ++e) {
        for (std::size_t f = e; f < anc; ++f) {
            cplx acc = 0.0;
            for (std::size_t r = 0; r < rest; ++r)
                acc += std::conj(projected(r * anc + e, 0)) * projected(r * anc + f, 0);
            g(e, f) = acc;
            g(f, e) = std::conj(acc);
        }
    }
    return g;
}

void require_3qubit_state(const ComplexMatrix& rho) {
    if (rho.rows() != 8 || rho.cols() != 8) throw std::invalid_argument("expected a 3-qubit state");
    if (!rho.is_density_matrix()) throw std::invalid_argument("input is not a density matrix");
}

}  // namespace

CqState measure_single_cq(const ComplexMatrix& rho, double phi_x) {
    require_3qubit_state(rho);
    const ComplexMatrix phi = purify(rho);
    CqState cq;
    for (int a = 0; a < 2; ++a) {
        const ComplexMatrix proj = project_qubit(phi, 3, 0, a, phi_x);
        ComplexMatrix g = ancilla_gram(proj, 8);
        const double p = g.trace().real();
        cq.outcome_probs.push_back(p);
        if (p > 1e-15) g = g * cplx(1.0 / p, 0.0);
        cq.conditional_states.push_back(std::move(g));
    }
    return cq;
}

CqState measure_pair_cq(const ComplexMatrix& rho, double phi_x, double phi_y) {
    require_3qubit_state(rho);
    const ComplexMatrix phi = purify(rho);
    CqState cq;
    for (int a = 0; a < 2; ++a) {
        const ComplexMatrix pa = project_qubit(phi, 3, 0, a, phi_x);
        for (int b = 0; b < 2; ++b) {
            const ComplexMatrix pab = project_qubit(pa, 2, 0, b, phi_y);
            ComplexMatrix g = ancilla_gram(pab, 8);
            const double p = g.trace().real();
            cq.outcome_probs.push_back(p);
            if (p > 1e-15) g = g * cplx(1.0 / p, 0.0);
            cq.conditional_states.push_back(std::move(g));
        }
    }
    return cq;
}

double cond_entropy_single(const ComplexMatrix& rho, double phi_x) {
    const CqState cq = measure_single_cq(rho, phi_x);
    // H(E) equals H(rho) for a purification; the blockwise route recomputes it
    return shannon_entropy(joint_spectrum(cq)) - von_neumann_entropy(rho);
}

double cond_entropy_pair(const ComplexMatrix& rho, double phi_x, double phi_y) {
    const CqState cq = measure_pair_cq(rho, phi_x, phi_y);
    return shannon_entropy(joint_spectrum(cq)) - von_neumann_entropy(rho);
}

double cond_entropy_eve_given_pair(const ComplexMatrix& rho, double phi_x, double phi_y) {
    const CqState cq = measure_pair_cq(rho, phi_x, phi_y);
    return shannon_entropy(joint_spectrum(cq)) - shannon_entropy(cq.outcome_probs);
}

double closed_form_hxe(const std::array<double, 8>& eigs) {
    double sum = 0.0;
    for (double e : eigs) {
        if (e < -1e-9) throw std::invalid_argument("closed_form_hxe: negative probability");
        sum += e;
    }
    if (std::abs(sum - 1.0) > 1e-8) throw std::invalid_argument("closed_form_hxe: not a distribution");
    std::vector<double> full(eigs.begin(), eigs.end());
    for (double& e : full) e = std::max(0.0, e);
    // pair (i,j,k) with (i, ~j, ~k)
    std::vector<double> paired = {full[0] + full[3], full[1] + full[2], full[4] + full[7], full[5] + full[6]};
    return 1.0 - shannon_entropy(full) + shannon_entropy(paired);
}

double bound_F(double m) {
    if (m < -kDomainSlack || m > 4.0 + kDomainSlack) throw std::invalid_argument("bound_F: m outside [0, 4]");
    m = std::min(4.0, std::max(0.0, m));
    if (m < kGmeThreshold3) return 0.0;  // zero below the GME threshold
    const double arg = std::sqrt(std::max(0.0, m * m / 8.0 - 1.0));
    return 1.0 - binary_entropy(0.5 + 0.5 * arg);
}

double bound_F_nparty(int n, double m) {
    if (n < 2) throw std::invalid_argument("bound_F_nparty: need n >= 2");
    const double lo = std::exp2(0.5 * n);
    const double hi = std::exp2(0.5 * (n + 1));
    if (m < lo - kDomainSlack || m > hi + kDomainSlack)
        throw std::invalid_argument("bound_F_nparty: m outside [2^{N/2}, 2^{(N+1)/2}]");
    m = std::min(hi, std::max(lo, m));
    const double arg = std::sqrt(std::max(0.0, m * m / std::exp2(double(n)) - 1.0));
    return 1.0 - binary_entropy(0.5 + 0.5 * arg);
}

double f_of_m(double m) {
    if (m < 2.0 - kDomainSlack || m > 4.0 + kDomainSlack) throw std::invalid_argument("f_of_m: m outside [2, 4]");
    m = std::min(4.0, std::max(2.0, m));
    return 0.25 - std::sqrt(3.0) / 24.0 * std::sqrt(m * m - 4.0);
}

double bound_G(double m) {
    const double f = f_of_m(m);
    const double head = std::max(0.0, 1.0 - 3.0 * f);
    return 2.0 - shannon_entropy({head, f, f, f});
}

double nu_m_pair(double m) {
    if (m < 2.0 - kDomainSlack || m > 4.0 + kDomainSlack) throw std::invalid_argument("nu_m_pair: m outside [2, 4]");
    m = std::min(4.0, std::max(2.0, m));
    return 0.25 + std::sqrt(3.0) / 8.0 * std::sqrt(m * m - 4.0);
}

double pair_entropy_via_C(const AlmostGhzState& state, double p, double phi_x, double phi_y) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("pair_entropy_via_C: p outside [0,1]");
    const auto rho = eigvals_almost_ghz3(state);
    const cplx ex = std::polar(1.0, 2.0 * phi_x);
    const cplx ey_conj = std::polar(1.0, -2.0 * phi_y);
    const cplx last(1.0 - 2.0 * p, -2.0 * std::sqrt(p * (1.0 - p)));
    const cplx c = (rho[0] - rho[4]) * ex + (rho[1] - rho[5]) * ey_conj +
                   (rho[2] - rho[6]) * ex * ey_conj + (rho[3] - rho[7]) * last;
    const double mag = std::min(1.0, std::abs(c));
    return binary_entropy(0.5 * (1.0 + mag));
}

double nu_from_violation_single(double m) {
    if (m < kGmeThreshold3 - 1e-9 || m > 4.0 + kDomainSlack)
        throw std::invalid_argument("nu_from_violation_single: m outside [2sqrt2, 4]");
    m = std::min(4.0, std::max(kGmeThreshold3, m));
    // 4 sqrt(2nu^2 - 2nu + 1) = m, nu >= 1/2 branch
    return 0.5 + 0.5 * std::sqrt(std::max(0.0, m * m / 8.0 - 1.0));
}

}  // namespace mabk
