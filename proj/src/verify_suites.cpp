#include "mabk/verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mabk/entropy.hpp"
#include "mabk/ghz.hpp"
#include "mabk/linalg.hpp"
#include "mabk/mabk_ops.hpp"
#include "mabk/optimizer.hpp"
#include "mabk/reduction.hpp"
#include "mabk/rng.hpp"
#include "mabk/violation.hpp"

namespace mabk {

namespace {

constexpr double kTwoPi = 6.28318530717958647693;

// margin convention: pass iff worst_margin >= 0; for "error <= tol" checks the
// margin is tol - error
CheckResult make_check(const std::string& name, double margin, const std::string& detail = "") {
    return {name, margin >= 0.0, margin, detail};
}

MeasurementConfig random_inplane_config(Rng& rng, int n) {
    std::vector<double> phis(2 * n);
    for (auto& p : phis) p = rng.uniform(0.0, kTwoPi);
    return MeasurementConfig::in_plane_angles(phis);
}

MeasurementConfig random_bloch_config(Rng& rng, int n) {
    MeasurementConfig c;
    for (int i = 0; i < n; ++i) {
        auto rand_setting = [&]() {
            const double z = rng.uniform(-1.0, 1.0);
            const double phi = rng.uniform(0.0, kTwoPi);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            return MeasurementSetting::bloch({r * std::cos(phi), r * std::sin(phi), z});
        };
        c.parties.emplace_back(rand_setting(), rand_setting());
    }
    return c;
}

AlmostGhzState random_family_state(Rng& rng) {
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
    const double cap = std::sqrt(st.lambda0[3] * st.lambda1[3]);
    st.s[3] = rng.uniform(-cap, cap);
    return st;
}

// every in-plane marginal over a strict party subset, worst magnitude
double worst_subset_marginal(const ComplexMatrix& rho, int n, Rng& rng) {
    double worst = 0.0;
    std::vector<double> phis(n);
    for (auto& p : phis) p = rng.uniform(0.0, kTwoPi);
    for (std::uint32_t subset = 1; subset < (1u << n) - 1u; ++subset) {
        ComplexMatrix op = ComplexMatrix::identity(1);
        for (int i = 0; i < n; ++i) {
            if ((subset >> (n - 1 - i)) & 1u)
                op = kron(op, observable_matrix(MeasurementSetting::in_plane(phis[i])));
            else
                op = kron(op, qubit_identity());
        }
        cplx tr = 0.0;
        for (std::size_t r = 0; r < rho.rows(); ++r)
            for (std::size_t c = 0; c < rho.cols(); ++c) tr += op(r, c) * rho(c, r);
        worst = std::max(worst, std::abs(tr));
    }
    return worst;
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<CheckResult> verify_reduction_suite(std::uint64_t seed, int trials) {
    std::vector<CheckResult> out;
    Rng root(seed);

    {  // symmetrize: marginals vanish, correlators and state invariants preserved
        double worst_marg = 0.0, worst_corr = 0.0, worst_idem = 0.0, worst_psd = 0.0;
        for (int t = 0; t < trials; ++t) {
            Rng rng = root.split(t);
            const ComplexMatrix rho = random_density_matrix(8, seed * 31 + t);
            const ComplexMatrix bar = symmetrize(rho, 3);
            worst_marg = std::max(worst_marg, worst_subset_marginal(bar, 3, rng));
            const MeasurementConfig cfg = random_inplane_config(rng, 3);
            worst_corr = std::max(worst_corr, std::abs(mabk_expectation(rho, 3, cfg) -
                                                       mabk_expectation(bar, 3, cfg)));
            worst_idem = std::max(worst_idem, symmetrize(bar, 3).max_abs_diff(bar));
            const auto eigs = hermitian_eigenvalues(bar);
            worst_psd = std::max(worst_psd, std::max(0.0, -eigs.back()));
            if (!ghz_block_check(bar, 3).block_diagonal) worst_marg = 1.0;
        }
        out.push_back(make_check("symmetrize.marginals_vanish", 1e-10 - worst_marg));
        out.push_back(make_check("symmetrize.preserves_mabk", 1e-10 - worst_corr));
        out.push_back(make_check("symmetrize.idempotent", 1e-12 - worst_idem));
        out.push_back(make_check("symmetrize.psd_and_blocked", 1e-10 - worst_psd));
    }

    {  // local z rotations: spectrum and block transformation law
        double worst_spec = 0.0, worst_law = 0.0, worst_zero = 0.0, worst_swap = 0.0;
        for (int t = 0; t < trials; ++t) {
            Rng rng = root.split(1000 + t);
            const ComplexMatrix rho = symmetrize(random_density_matrix(8, seed * 77 + t), 3);
            std::vector<double> thetas = {rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi),
                                          rng.uniform(0.0, kTwoPi)};
            const ComplexMatrix rot = apply_local_z_rotations(rho, thetas);
            const auto s0 = hermitian_eigenvalues(rho);
            const auto s1 = hermitian_eigenvalues(rot);
            for (std::size_t i = 0; i < s0.size(); ++i) worst_spec = std::max(worst_spec, std::abs(s0[i] - s1[i]));

            // block law: lambda' and s' from beta
            const ComplexMatrix& u = ghz_basis_unitary(3);
            const ComplexMatrix g0 = u.adjoint() * rho * u;
            const ComplexMatrix g1 = u.adjoint() * rot * u;
            for (std::uint32_t ub = 0; ub < 4; ++ub) {
                const double beta = beta_angle(thetas, ub, 3);
                const double l0 = g0(2 * ub, 2 * ub).real();
                const double l1 = g0(2 * ub + 1, 2 * ub + 1).real();
                const double r = g0(2 * ub, 2 * ub + 1).real();
                const double s = g0(2 * ub, 2 * ub + 1).imag();
                const double l0p = 0.5 * (l0 + l1 + (l0 - l1) * std::cos(beta) + 2 * s * std::sin(beta));
                const double sp = s * std::cos(beta) - 0.5 * (l0 - l1) * std::sin(beta);
                const double l1p = 0.5 * (l0 + l1 - (l0 - l1) * std::cos(beta) - 2 * s * std::sin(beta));
                worst_law = std::max({worst_law, std::abs(g1(2 * ub, 2 * ub).real() - l0p),
                                      std::abs(g1(2 * ub, 2 * ub + 1).imag() - sp),
                                      std::abs(g1(2 * ub + 1, 2 * ub + 1).real() - l1p),
                                      std::abs(g1(2 * ub, 2 * ub + 1).real() - r)});
            }

            // choosing the szero angles kills the imaginary parts of blocks {00,01,10}
            std::vector<std::pair<std::uint32_t, double>> targets;
            for (std::uint32_t ub = 0; ub < 3; ++ub) {
                const double l0 = g0(2 * ub, 2 * ub).real();
                const double l1 = g0(2 * ub + 1, 2 * ub + 1).real();
                const double s = g0(2 * ub, 2 * ub + 1).imag();
                targets.emplace_back(ub, std::atan2(2.0 * s, l0 - l1));
            }
            const auto solved = solve_rotation_angles(targets, 3);
            if (!solved) {
                worst_zero = 1.0;
            } else {
                const ComplexMatrix fixed = apply_local_z_rotations(rho, *solved);
                const ComplexMatrix gf = u.adjoint() * fixed * u;
                for (std::uint32_t ub = 0; ub < 3; ++ub)
                    worst_zero = std::max(worst_zero, std::abs(gf(2 * ub, 2 * ub + 1).imag()));
            }

            // beta = pi on block u swaps the diagonal pair
            const auto swap_angles = solve_rotation_angles(
                {{0u, 3.14159265358979323846}, {1u, 0.0}, {2u, 0.0}}, 3);
            if (swap_angles) {
                const ComplexMatrix sw = apply_local_z_rotations(rho, *swap_angles);
                const ComplexMatrix gs = u.adjoint() * sw * u;
                worst_swap = std::max({worst_swap, std::abs(gs(0, 0).real() - g0(1, 1).real()),
                                       std::abs(gs(1, 1).real() - g0(0, 0).real())});
            }
        }
        out.push_back(make_check("rotations.spectrum_preserved", 1e-10 - worst_spec));
        out.push_back(make_check("rotations.block_law", 1e-10 - worst_law));
        out.push_back(make_check("rotations.szero_solves", 1e-10 - worst_zero));
        out.push_back(make_check("rotations.beta_pi_swaps", 1e-10 - worst_swap));
    }

    {  // rho_+ / rho_- equivalence and balanced mixture
        double worst_stats = 0.0, worst_hxe = 0.0, worst_hxy = 0.0, worst_mix = 0.0;
        const int reps = std::max(1, trials / 5);
        for (int t = 0; t < reps; ++t) {
            Rng rng = root.split(2000 + t);
            const ComplexMatrix plus = symmetrize(random_density_matrix(8, seed * 131 + t), 3);
            const ComplexMatrix minus = flip_real_offdiagonals(plus, 3);
            for (int rep = 0; rep < 20; ++rep) {
                const std::vector<double> phis = {rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi),
                                                  rng.uniform(0.0, kTwoPi)};
                const auto sp = statistics(plus, 3, phis);
                const auto sm = statistics(minus, 3, phis);
                for (std::size_t i = 0; i < sp.size(); ++i)
                    worst_stats = std::max(worst_stats, std::abs(sp[i] - sm[i]));
            }
            const double phi = rng.uniform(0.0, kTwoPi);
            const double hp = cond_entropy_single(plus, phi);
            const double hm = cond_entropy_single(minus, phi);
            worst_hxe = std::max(worst_hxe, std::abs(hp - hm));
            worst_hxy = std::max(worst_hxy, std::abs(cond_entropy_pair(plus, phi, 0.3) -
                                                     cond_entropy_pair(minus, phi, 0.3)));
            const ComplexMatrix mix = (plus + minus) * cplx(0.5, 0.0);
            worst_mix = std::max(worst_mix, cond_entropy_single(mix, phi) - hp);
        }
        out.push_back(make_check("rho_pm.statistics_agree", 1e-10 - worst_stats));
        out.push_back(make_check("rho_pm.hxe_agree", 1e-8 - worst_hxe));
        out.push_back(make_check("rho_pm.hxy_agree", 1e-8 - worst_hxy));
        out.push_back(make_check("rho_pm.mixture_nonincreasing", 1e-8 - worst_mix));
    }

    {  // Lemma 1 block structure on random projector pairs
        double worst = 0.0;
        const int reps = std::max(1, trials / 5);
        for (int t = 0; t < reps; ++t) {
            Rng rng = root.split(3000 + t);
            const std::size_t dim = 4 + 2 * (t % 3);
            const ComplexMatrix u1 = random_unitary(dim, seed * 7 + t);
            const ComplexMatrix u2 = random_unitary(dim, seed * 11 + t + 1);
            const std::size_t rank_p = 1 + std::size_t(rng.uniform() * double(dim - 1));
            const std::size_t rank_q = 1 + std::size_t(rng.uniform() * double(dim - 1));
            auto proj = [&](const ComplexMatrix& u, std::size_t rank) {
                ComplexMatrix d(dim, dim);
                for (std::size_t i = 0; i < rank; ++i) d(i, i) = 1.0;
                return u * d * u.adjoint();
            };
            const ComplexMatrix p0 = proj(u1, rank_p);
            const ComplexMatrix q0 = proj(u2, rank_q);
            const ComplexMatrix id = ComplexMatrix::identity(dim);
            const auto dec = block_diagonalize(p0, id - p0, q0, id - q0);
            for (const auto& blk : dec.blocks) {
                for (const auto& r : blk.restrictions) {
                    // rank-one projector: idempotent with unit trace
                    worst = std::max(worst, (r * r).max_abs_diff(r));
                    worst = std::max(worst, std::abs(r.trace().real() - 1.0));
                }
                // orthonormal basis columns
                const ComplexMatrix gram = blk.basis.adjoint() * blk.basis;
                worst = std::max(worst, gram.max_abs_diff(ComplexMatrix::identity(gram.rows())));
            }
        }
        out.push_back(make_check("lemma1.rank_one_blocks", 1e-9 - worst));
    }

    {  // Eve's uncertainty non-increasing under symmetrization
        double worst = 1e9;
        int bad = 0;
        const int reps = std::max(1, trials);
        for (int t = 0; t < reps; ++t) {
            const ComplexMatrix rho = random_density_matrix(8, seed * 613 + t);
            const auto rep = entropy_nonincrease_check(rho, 3, seed + t);
            worst = std::min(worst, rep.worst_margin);
            bad += rep.violations;
        }
        out.push_back(make_check("appendixB.nonincrease", worst + 1e-8,
                                 bad ? "violations=" + std::to_string(bad) : ""));
    }

    {  // Appendix B golden test: materialized flag register at N = 3
        const ComplexMatrix rho = random_density_matrix(8, seed * 997 + 5);
        Rng rng = root.split(4000);
        const double phi = rng.uniform(0.0, kTwoPi);
        const std::array<std::array<int, 3>, 4> flips = {{{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
        double worst_branch = 0.0;
        std::vector<double> joint, side;
        const double href = cond_entropy_single(rho, phi);
        for (const auto& f : flips) {
            ComplexMatrix zt = ComplexMatrix::identity(1);
            for (int i = 0; i < 3; ++i) zt = kron(zt, f[i] ? pauli_z() : qubit_identity());
            const ComplexMatrix rho_t = zt * rho * zt;
            worst_branch = std::max(worst_branch, std::abs(cond_entropy_single(rho_t, phi) - href));
            const CqState cq = measure_single_cq(rho_t, phi);
            for (std::size_t a = 0; a < cq.outcome_probs.size(); ++a) {
                const auto eigs = hermitian_eigenvalues(cq.conditional_states[a]);
                for (double l : eigs) joint.push_back(std::max(0.0, 0.25 * cq.outcome_probs[a] * l));
            }
            for (double l : hermitian_eigenvalues(rho_t)) side.push_back(std::max(0.0, 0.25 * l));
        }
        const double h_xet = shannon_entropy(joint) - shannon_entropy(side);
        const double h_sym = cond_entropy_single(symmetrize(rho, 3), phi);
        out.push_back(make_check("appendixB.branch_entropy_equal", 1e-9 - worst_branch));
        out.push_back(make_check("appendixB.flagged_register_identity", 1e-8 - std::abs(h_xet - href)));
        out.push_back(make_check("appendixB.strong_subadditivity_direction", h_xet - h_sym + 1e-8));
    }

    return out;
}

std::vector<CheckResult> verify_appendices_suite(std::uint64_t seed, int trials) {
    std::vector<CheckResult> out;
    Rng root(seed);

    {  // closed-form MABK operators vs the recursion, all parity branches
        double worst = 0.0;
        for (int n = 2; n <= 5; ++n) {
            const int reps = std::max(1, std::min(trials, 20));
            for (int t = 0; t < reps; ++t) {
                Rng rng = root.split(n * 100 + t);
                const MeasurementConfig cfg = random_bloch_config(rng, n);
                worst = std::max(worst, mabk_closed(n, cfg).max_abs_diff(mabk_recursive(n, cfg)));
            }
        }
        out.push_back(make_check("appendixD.closed_equals_recursive", 1e-10 - worst));
    }

    {  // Props 1-3 and the correlation-matrix contraction identity
        double worst_props = 0.0, worst_contract = 0.0;
        const int reps = std::max(1, std::min(trials, 50));
        for (int t = 0; t < reps; ++t) {
            for (int n : {3, 4}) {
                Rng rng = root.split(7000 + 10 * t + n);
                const MeasurementConfig cfg = random_bloch_config(rng, n);
                const auto vecs = appendix_d_vectors(cfg, n);
                auto nrm2 = [](const std::vector<double>& v) {
                    double s = 0.0;
                    for (double x : v) s += x * x;
                    return s;
                };
                const double expect_v = n % 2 == 0 ? std::exp2(n / 2.0) : std::exp2((n + 1) / 2.0);
                worst_props = std::max(worst_props, std::abs(nrm2(vecs.v0) + nrm2(vecs.v1) - expect_v));
                if (n % 2 == 0) {
                    worst_props = std::max(worst_props, std::abs(nrm2(vecs.u0) - std::exp2(n / 2.0)));
                    worst_props = std::max(worst_props, std::abs(nrm2(vecs.u1) - std::exp2(n / 2.0)));
                } else {
                    // N = 3: the u vectors are Charlie's unit Bloch vectors
                    worst_props = std::max(worst_props, std::abs(nrm2(vecs.u0) - 1.0));
                    worst_props = std::max(worst_props, std::abs(nrm2(vecs.u1) - 1.0));
                }
                double dot01 = 0.0;
                for (std::size_t i = 0; i < vecs.v0.size(); ++i) dot01 += vecs.v0[i] * vecs.v1[i];
                worst_props = std::max(worst_props, std::abs(dot01));

                const ComplexMatrix rho = random_density_matrix(std::size_t(1) << n, seed * 17 + t * 4 + n);
                worst_contract = std::max(worst_contract,
                                          std::abs(mabk_expectation(rho, n, cfg) -
                                                   mabk_expectation_rank1(rho, n, cfg)));
            }
        }
        out.push_back(make_check("appendixD.vector_props", 1e-10 - worst_props));
        out.push_back(make_check("appendixD.contraction_identity", 1e-10 - worst_contract));
    }

    {  // Appendix E: tau-family optimality
        double worst = 1e9;
        int violations = 0;
        for (double m : {2.9, 3.2, 3.6}) {
            OptimizerConfig cfg;
            cfg.seed = seed;
            const auto rep = verify_tau_optimality(m, std::max(10, trials * 10), cfg);
            worst = std::min(worst, rep.worst_margin);
            violations += rep.violations;
        }
        out.push_back(make_check("appendixE.tau_optimality", worst + 1e-9,
                                 violations ? "violations=" + std::to_string(violations) : ""));
    }

    {  // Appendix F: KKT winner and nu_m closed form
        double worst = 0.0;
        bool right_case = true;
        Rng rng = root.split(8000);
        for (int t = 0; t < 50; ++t) {
            const double m = rng.uniform(2.0 + 1e-6, 4.0 - 1e-6);
            const auto res = kkt_enumerate(m);
            if (res.best_case != "(iii)") right_case = false;
            const double nu = nu_m_pair(m);
            const double href = shannon_entropy({nu, (1 - nu) / 3, (1 - nu) / 3, (1 - nu) / 3});
            worst = std::max(worst, std::abs(res.entropy - href));
            worst = std::max(worst, std::abs(res.distribution[0] - nu));
        }
        out.push_back(make_check("appendixF.kkt_case_iii", right_case ? 1e-10 - worst : -1.0));
    }

    {  // Appendix F |C| formula vs first principles, and p = sin^2 t
        double worst = 0.0;
        const int reps = std::max(1, std::min(trials, 50));
        for (int t = 0; t < reps; ++t) {
            Rng rng = root.split(9000 + t);
            const AlmostGhzState st = random_family_state(rng);
            const double tt = t_parameter(st.lambda0[3], st.lambda1[3], st.s[3]);
            const double p = std::sin(tt) * std::sin(tt);
            const double phix = rng.uniform(0.0, kTwoPi);
            const double phiy = rng.uniform(0.0, kTwoPi);
            const double via_c = pair_entropy_via_C(st, p, phix, phiy);
            const double direct = cond_entropy_eve_given_pair(to_density_matrix(st), phix, phiy);
            worst = std::max(worst, std::abs(via_c - direct));
        }
        out.push_back(make_check("appendixF.C_formula", 1e-8 - worst));
    }

    {  // Eq. 6 eigenvalues and Eq. 22 closed form against first principles
        double worst_eig = 0.0, worst_h = 0.0;
        const int reps = std::max(1, std::min(trials, 50));
        for (int t = 0; t < reps; ++t) {
            Rng rng = root.split(10000 + t);
            const AlmostGhzState st = random_family_state(rng);
            auto closed = eigvals_almost_ghz3(st);
            std::sort(closed.begin(), closed.end(), std::greater<double>());
            const auto numeric = hermitian_eigenvalues(to_density_matrix(st));
            for (int i = 0; i < 8; ++i) worst_eig = std::max(worst_eig, std::abs(closed[i] - numeric[i]));

            AlmostGhzState diag = st;
            diag.s[3] = 0.0;
            const auto eigs = normalize_ordering(eigvals_almost_ghz3(diag));
            std::array<double, 8> raw = eigvals_almost_ghz3(diag);
            const double href = cond_entropy_single(to_density_matrix(diag), 0.0);
            worst_h = std::max(worst_h, std::abs(closed_form_hxe(raw) - href));
            worst_h = std::max(worst_h, std::abs(closed_form_hxe(eigs) - href));
        }
        out.push_back(make_check("eq6.eigenvalues", 1e-10 - worst_eig));
        out.push_back(make_check("eq22.closed_form_hxe", 1e-8 - worst_h));
    }

    return out;
}

std::vector<CheckResult> verify_bounds_suite(std::uint64_t seed, int trials) {
    std::vector<CheckResult> out;
    Rng root(seed);

    OptimizerConfig bf_cfg;
    bf_cfg.seed = seed;
    bf_cfg.restarts = 6;

    {  // Theorem 2 soundness over random states, all variants
        double worst = -1e9;
        for (int t = 0; t < trials; ++t) {
            const ComplexMatrix rho = random_density_matrix(8, seed * 3 + t);
            const double bf = brute_force_mabk_max(rho, 3, false, bf_cfg).max;
            for (auto v : {CorrelationVariant::Standard, CorrelationVariant::Prime,
                           CorrelationVariant::DoublePrime}) {
                worst = std::max(worst, bf - theorem2_bound(rho, 3, v).bound);
            }
        }
        out.push_back(make_check("theorem2.soundness", 1e-6 - worst,
                                 "worst brute-force minus bound = " + std::to_string(worst)));
    }

    {  // Corollary 1 soundness on the reduced family
        double worst = -1e9;
        const int reps = std::max(1, trials / 2);
        for (int t = 0; t < reps; ++t) {
            Rng rng = root.split(500 + t);
            const AlmostGhzState st = random_family_state(rng);
            const auto eigs = normalize_ordering(eigvals_almost_ghz3(st));
            const double bf = brute_force_mabk_max(to_density_matrix(st), 3, false, bf_cfg).max;
            worst = std::max(worst, bf - corollary1_bound(eigs));
        }
        out.push_back(make_check("corollary1.soundness", 1e-6 - worst));
    }

    {  // GHZ: quantum bound with a tightness witness
        const ComplexMatrix ghz = to_density_matrix(tau_family_state(3, 1.0));
        const ViolationBound vb = theorem2_bound(ghz, 3, CorrelationVariant::Standard);
        out.push_back(make_check("ghz.bound_is_4", 1e-9 - std::abs(vb.bound - 4.0)));
        WitnessSearchConfig wc;
        wc.seed = seed;
        const auto witness = tightness_witness(vb, 3, wc);
        double achieved = witness ? mabk_expectation(ghz, 3, *witness) : -1.0;
        out.push_back(make_check("ghz.witness_achieves_bound",
                                 witness ? 1e-6 - std::abs(achieved - 4.0) : -1.0));
    }

    {  // tau(1/2): Alice measuring Pauli X for both settings reaches 2 sqrt 2
        const ComplexMatrix tau = to_density_matrix(tau_family_state(3, 0.5));
        const ViolationBound vb = theorem2_bound(tau, 3, CorrelationVariant::Standard);
        const double threshold = 2.0 * std::sqrt(2.0);
        out.push_back(make_check("tau_half.bound", 1e-9 - std::abs(vb.bound - threshold)));
        // effective Bob/Charlie correlation block is diag(1, -1) in (X, Y), so
        // the CHSH-optimal completion is B = (X, -Y), C = ((X+Y)/sqrt2, (X-Y)/sqrt2)
        const double quarter = 0.78539816339744830962;
        const MeasurementConfig alice_x = MeasurementConfig::in_plane_angles(
            {0.0, 0.0, 0.0, -2.0 * quarter, quarter, -quarter});
        const double achieved = mabk_expectation(tau, 3, alice_x);
        out.push_back(make_check("tau_half.alice_x_witness", 1e-9 - std::abs(achieved - threshold)));
        WitnessSearchConfig wc;
        wc.seed = seed;
        const auto witness = tightness_witness(vb, 3, wc);
        const double wv = witness ? mabk_expectation(tau, 3, *witness) : -1.0;
        out.push_back(make_check("tau_half.search_witness",
                                 witness ? 1e-6 - std::abs(wv - threshold) : -1.0));
    }

    {  // bound invariance under local z rotations
        double worst = 0.0;
        const int reps = std::max(1, std::min(trials, 25));
        for (int t = 0; t < reps; ++t) {
            Rng rng = root.split(700 + t);
            const ComplexMatrix rho = random_density_matrix(8, seed * 41 + t);
            const std::vector<double> thetas = {rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi),
                                                rng.uniform(0.0, kTwoPi)};
            const ComplexMatrix rot = apply_local_z_rotations(rho, thetas);
            for (auto v : {CorrelationVariant::Standard, CorrelationVariant::Prime,
                           CorrelationVariant::DoublePrime}) {
                worst = std::max(worst, std::abs(theorem2_bound(rho, 3, v).bound -
                                                 theorem2_bound(rot, 3, v).bound));
            }
        }
        out.push_back(make_check("theorem2.z_rotation_invariance", 1e-9 - worst));
    }

    return out;
}

}  // namespace mabk
