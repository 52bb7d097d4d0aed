// mabk: device-independent entropy bounds for multiparty Bell scenarios.
//
// Subcommands: bound, mabk-max, sweep, verify. Exit codes: 0 success,
// 1 verification failure, 2 usage/domain error, 3 invalid state, 4 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mabk/entropy.hpp"
#include "mabk/ghz.hpp"
#include "mabk/optimizer.hpp"
#include "mabk/reduction.hpp"
#include "mabk/state_io.hpp"
#include "mabk/verify_suites.hpp"
#include "mabk/violation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBadState = 3;
constexpr int kExitIo = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MABK_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 12345;
}

int cmd_bound(const std::string& kind, double m, int n) {
    try {
        double value = 0.0;
        if (kind == "single") {
            value = mabk::bound_F(m);
        } else if (kind == "pair") {
            value = mabk::bound_G(m);
        } else {
            value = mabk::bound_F_nparty(n, m);
        }
        std::printf("%.12f\n", value);
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return kExitUsage;
    }
}

// recognize an Eq.-5-family state and report the Corollary 1 bound
void report_corollary1(const mabk::ComplexMatrix& rho) {
    const auto blocks = mabk::ghz_block_check(rho, 3, 1e-10);
    if (!blocks.block_diagonal) return;
    const mabk::ComplexMatrix& u = mabk::ghz_basis_unitary(3);
    const mabk::ComplexMatrix g = u.adjoint() * rho * u;
    mabk::AlmostGhzState st = mabk::AlmostGhzState::zero(3);
    for (std::uint32_t ub = 0; ub < 4; ++ub) {
        st.lambda0[ub] = g(2 * ub, 2 * ub).real();
        st.lambda1[ub] = g(2 * ub + 1, 2 * ub + 1).real();
        if (std::abs(g(2 * ub, 2 * ub + 1).real()) > 1e-10) return;  // real off-diagonals: not Eq. 5
        st.s[ub] = g(2 * ub, 2 * ub + 1).imag();
    }
    for (std::uint32_t ub = 0; ub < 3; ++ub) {
        if (std::abs(st.s[ub]) > 1e-10) return;  // normal form keeps s only on u = 11
        st.s[ub] = 0.0;
    }
    const auto eigs = mabk::normalize_ordering(mabk::eigvals_almost_ghz3(st));
    std::printf("corollary1_bound value=%s\n", mabk::format_sig12(mabk::corollary1_bound(eigs)).c_str());
}

int cmd_mabk_max(const std::string& path, const std::string& variant, bool allow_fixed,
                 bool brute_force, std::uint64_t seed, int restarts) {
    mabk::ComplexMatrix rho(1, 1);
    try {
        rho = mabk::read_state_file(path);
    } catch (const mabk::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitUsage;
    }
    if (rho.rows() != 8 || !rho.is_density_matrix()) {
        std::fprintf(stderr, "state error: file does not contain a 3-qubit density matrix\n");
        return kExitBadState;
    }

    std::vector<mabk::CorrelationVariant> variants;
    if (variant == "standard") variants = {mabk::CorrelationVariant::Standard};
    else if (variant == "prime") variants = {mabk::CorrelationVariant::Prime};
    else if (variant == "double_prime") variants = {mabk::CorrelationVariant::DoublePrime};
    else variants = {mabk::CorrelationVariant::Standard, mabk::CorrelationVariant::Prime,
                     mabk::CorrelationVariant::DoublePrime};

    mabk::ViolationBound best;
    bool have = false;
    for (auto v : variants) {
        const auto vb = mabk::theorem2_bound(rho, 3, v);
        std::printf("thm2_bound variant=%s value=%s t0=%s t1=%s\n", mabk::variant_name(v),
                    mabk::format_sig12(vb.bound).c_str(), mabk::format_sig12(vb.t0).c_str(),
                    mabk::format_sig12(vb.t1).c_str());
        if (!have || vb.bound < best.bound) {
            best = vb;
            have = true;
        }
    }
    if (variants.size() > 1)
        std::printf("thm2_bound variant=min value=%s\n", mabk::format_sig12(best.bound).c_str());

    report_corollary1(rho);

    mabk::WitnessSearchConfig wc;
    wc.seed = seed;
    const auto witness = mabk::tightness_witness(best, 3, wc);
    if (witness) {
        std::printf("tightness witness=found achieved=%s\n",
                    mabk::format_sig12(mabk::mabk_expectation(rho, 3, *witness)).c_str());
    } else {
        std::printf("tightness witness=not_found\n");
    }

    if (brute_force) {
        mabk::OptimizerConfig cfg;
        cfg.seed = seed;
        cfg.restarts = restarts;
        const auto bf = mabk::brute_force_mabk_max(rho, 3, allow_fixed, cfg);
        std::printf("brute_force max=%s allow_fixed=%s\n", mabk::format_sig12(bf.max).c_str(),
                    allow_fixed ? "true" : "false");
    }
    return kExitOk;
}

int cmd_sweep(double m_min, double m_max, int steps, bool numeric, int restarts,
              std::uint64_t seed, const std::string& out_path) {
    if (!(2.0 <= m_min && m_min < m_max && m_max <= 4.0) || steps < 1) {
        std::fprintf(stderr, "domain error: need 2 <= m_min < m_max <= 4 and steps >= 1\n");
        return kExitUsage;
    }
    mabk::OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;

    std::vector<mabk::CurveRow> rows;
    for (int i = 0; i < steps; ++i) {
        const double m = steps == 1 ? m_min : m_min + (m_max - m_min) * double(i) / double(steps - 1);
        mabk::CurveRow row;
        row.m = m;
        row.F = mabk::bound_F(m);
        row.G = mabk::bound_G(m);
        if (numeric) {
            row.numeric_hxe = mabk::minimize_hxe(m, cfg).value;
            row.numeric_hxy = mabk::minimize_hxy(m, cfg).value;
        }
        if (m >= 2.8284271247461903 - 1e-12) {
            const double nu = mabk::nu_from_violation_single(m);
            const auto vb = mabk::theorem2_bound(mabk::to_density_matrix(mabk::tau_family_state(3, nu)), 3);
            row.thm2_note = "tau_thm2=" + mabk::format_sig12(vb.bound);
        }
        rows.push_back(row);
    }
    const std::string csv = mabk::emit_curve_csv(rows);
    if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
        return kExitOk;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::fprintf(stderr, "io error: cannot open '%s' for writing\n", out_path.c_str());
        return kExitIo;
    }
    out << csv;
    if (!out.good()) {
        std::fprintf(stderr, "io error: write to '%s' failed\n", out_path.c_str());
        return kExitIo;
    }
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int trials) {
    std::vector<mabk::CheckResult> results;
    auto append = [&](std::vector<mabk::CheckResult> more) {
        for (auto& r : more) results.push_back(std::move(r));
    };
    if (suite == "reduction" || suite == "all") append(mabk::verify_reduction_suite(seed, trials));
    if (suite == "appendices" || suite == "all") append(mabk::verify_appendices_suite(seed, trials));
    if (suite == "bounds" || suite == "all") append(mabk::verify_bounds_suite(seed, trials));

    bool ok = true;
    for (const auto& r : results) {
        std::printf("CHECK %s %s margin=%.3e%s%s\n", r.name.c_str(), r.pass ? "pass" : "FAIL",
                    r.worst_margin, r.detail.empty() ? "" : " ", r.detail.c_str());
        ok = ok && r.pass;
    }
    std::printf("SUMMARY %s checks=%zu\n", ok ? "pass" : "FAIL", results.size());
    return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy bounds and MABK violation tools for multiparty Bell scenarios"};
    app.require_subcommand(1);

    std::uint64_t seed = default_seed();
    int trials = 50;
    int restarts = 64;

    // bound
    std::string bound_kind;
    double bound_m = 0.0;
    int bound_n = 3;
    auto* bound = app.add_subcommand("bound", "Evaluate an analytical entropy bound");
    bound->add_option("kind", bound_kind, "single|pair|nparty")
        ->required()
        ->check(CLI::IsMember({"single", "pair", "nparty"}));
    bound->add_option("m", bound_m, "observed MABK violation")->required();
    bound->add_option("--n", bound_n, "party count for kind=nparty");

    // mabk-max
    std::string state_path, variant = "standard";
    bool allow_fixed = false, brute = false;
    auto* mm = app.add_subcommand("mabk-max", "Violation bounds for a state file");
    mm->add_option("state", state_path, "QSTATE file")->required();
    mm->add_option("--variant", variant, "standard|prime|double_prime|min")
        ->check(CLI::IsMember({"standard", "prime", "double_prime", "min"}));
    mm->add_flag("--allow-fixed", allow_fixed, "include fixed-outcome settings in brute force");
    mm->add_flag("--brute-force", brute, "run the brute-force maximizer");
    mm->add_option("--seed", seed, "search seed");
    mm->add_option("--restarts", restarts, "brute-force restarts");

    // sweep
    double m_min = 2.0, m_max = 4.0;
    int steps = 21;
    bool numeric = false;
    std::string out_path;
    auto* sweep = app.add_subcommand("sweep", "Emit the bound curves as CSV");
    sweep->add_option("m_min", m_min)->required();
    sweep->add_option("m_max", m_max)->required();
    sweep->add_option("steps", steps)->required();
    sweep->add_flag("--numeric", numeric, "also run the numeric minimizations");
    sweep->add_option("--restarts", restarts, "optimizer restarts");
    sweep->add_option("--seed", seed, "optimizer seed");
    sweep->add_option("--out", out_path, "output path (stdout when absent)");

    // verify
    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", suite, "reduction|appendices|bounds|all")
        ->required()
        ->check(CLI::IsMember({"reduction", "appendices", "bounds", "all"}));
    verify->add_option("--seed", seed, "suite seed");
    verify->add_option("--trials", trials, "trial count per randomized check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bound->parsed()) return cmd_bound(bound_kind, bound_m, bound_n);
        if (mm->parsed()) return cmd_mabk_max(state_path, variant, allow_fixed, brute, seed, restarts);
        if (sweep->parsed()) return cmd_sweep(m_min, m_max, steps, numeric, restarts, seed, out_path);
        if (verify->parsed()) return cmd_verify(suite, seed, trials);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
