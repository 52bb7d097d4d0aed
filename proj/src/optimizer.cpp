#include "mabk/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "mabk/rng.hpp"
#include "mabk/violation.hpp"

namespace mabk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647693;
constexpr double kGme3 = 2.8284271247461902909;
constexpr double kFeasibilitySlack = 1e-6;

struct Vec8 {
    std::array<cplx, 8> a{};
};

// GHZ basis columns in eigenvalue order (i*4 + jk), computational layout
const std::array<Vec8, 8>& ghz_columns() {
    static const std::array<Vec8, 8> cols = [] {
        std::array<Vec8, 8> out{};
        const ComplexMatrix& u = ghz_basis_unitary(3);
        for (int i = 0; i < 2; ++i)
            for (std::uint32_t jk = 0; jk < 4; ++jk) {
                const std::size_t col = ghz_matrix_index(GhzBasisLabel{i, jk, 2});
                for (std::size_t r = 0; r < 8; ++r) out[i * 4 + jk].a[r] = u(r, col);
            }
        return out;
    }();
    return cols;
}

// eigenvector columns of the reduced family for a given t
std::array<Vec8, 8> family_eigvecs(double t) {
    std::array<Vec8, 8> v = ghz_columns();
    const cplx ct(std::cos(t), 0.0);
    const cplx ist(0.0, std::sin(t));
    const Vec8 p0 = v[3], p1 = v[7];
    for (int r = 0; r < 8; ++r) {
        v[3].a[r] = ct * p0.a[r] - ist * p1.a[r];
        v[7].a[r] = ct * p1.a[r] - ist * p0.a[r];
    }
    return v;
}

std::vector<double> spectrum_2x2(double g00, double g11, cplx g01) {
    const double tr = g00 + g11;
    const double det_part = std::sqrt(std::max(0.0, (g00 - g11) * (g00 - g11) + 4.0 * std::norm(g01)));
    return {0.5 * (tr + det_part), std::max(0.0, 0.5 * (tr - det_part))};
}

}  // namespace

double family_hxe(const std::array<double, 8>& eigs, double t, double phi_x) {
    const auto v = family_eigvecs(t);
    std::array<double, 8> sq{};
    for (int i = 0; i < 8; ++i) sq[i] = std::sqrt(std::max(0.0, eigs[i]));

    std::vector<double> joint;
    joint.reserve(8);
    const double inv = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < 2; ++a) {
        const cplx w = std::polar(1.0, -phi_x) * (a ? -1.0 : 1.0);
        // W[r=bc, col] = sqrt(rho_col) (v[bc] + w v[4+bc]) / sqrt2; S = W W^+ (4x4)
        cplx wmat[4][8];
        for (int col = 0; col < 8; ++col)
            for (int r = 0; r < 4; ++r)
                wmat[r][col] = sq[col] * inv * (v[col].a[r] + w * v[col].a[4 + r]);
        ComplexMatrix s(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = r; c < 4; ++c) {
                cplx acc = 0.0;
                for (int col = 0; col < 8; ++col) acc += wmat[r][col] * std::conj(wmat[c][col]);
                s(r, c) = acc;
                s(c, r) = std::conj(acc);
            }
        for (double l : hermitian_eigenvalues(s)) joint.push_back(std::max(0.0, l));
    }
    std::vector<double> evec(eigs.begin(), eigs.end());
    for (double& e : evec) e = std::max(0.0, e);
    return shannon_entropy(joint) - shannon_entropy(evec);
}

double family_hxy(const std::array<double, 8>& eigs, double t, double phi_x, double phi_y) {
    const auto v = family_eigvecs(t);
    std::array<double, 8> sq{};
    for (int i = 0; i < 8; ++i) sq[i] = std::sqrt(std::max(0.0, eigs[i]));

    std::vector<double> joint;
    joint.reserve(8);
    for (int a = 0; a < 2; ++a) {
        const cplx wa = std::polar(1.0, -phi_x) * (a ? -1.0 : 1.0);
        for (int b = 0; b < 2; ++b) {
            const cplx wb = std::polar(1.0, -phi_y) * (b ? -1.0 : 1.0);
            // W[c, col] = sqrt(rho_col)/2 (v[c] + wb v[2+c] + wa v[4+c] + wa wb v[6+c])
            cplx w0[8], w1[8];
            for (int col = 0; col < 8; ++col) {
                const auto& vc = v[col].a;
                w0[col] = 0.5 * sq[col] * (vc[0] + wb * vc[2] + wa * vc[4] + wa * wb * vc[6]);
                w1[col] = 0.5 * sq[col] * (vc[1] + wb * vc[3] + wa * vc[5] + wa * wb * vc[7]);
            }
            double g00 = 0.0, g11 = 0.0;
            cplx g01 = 0.0;
            for (int col = 0; col < 8; ++col) {
                g00 += std::norm(w0[col]);
                g11 += std::norm(w1[col]);
                g01 += w0[col] * std::conj(w1[col]);
            }
            for (double l : spectrum_2x2(g00, g11, g01)) joint.push_back(l);
        }
    }
    std::vector<double> evec(eigs.begin(), eigs.end());
    for (double& e : evec) e = std::max(0.0, e);
    return shannon_entropy(joint) - shannon_entropy(evec);
}

double family_violation(const std::array<double, 8>& eigs, double t, const std::array<double, 6>& angles) {
    const ComplexMatrix rho = density_from_eigs_ghz3(eigs, t);
    const CorrelationMatrix tm = correlation_matrix(rho, 3, CorrelationVariant::Standard);

    std::array<std::array<double, 2>, 6> pl{};  // in-plane bloch (x, y) per setting
    for (int i = 0; i < 6; ++i) pl[i] = {std::cos(angles[i]), std::sin(angles[i])};

    // <M3> = (a0xb1 + a1xb0)^T T c0 + (a0xb0 - a1xb1)^T T c1, indices 0..1 = x,y
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double w1 = pl[0][i] * pl[3][j] + pl[1][i] * pl[2][j];
            const double w0 = pl[0][i] * pl[2][j] - pl[1][i] * pl[3][j];
            const std::size_t row = 3 * std::size_t(i) + std::size_t(j);
            for (int k = 0; k < 2; ++k) {
                acc += w1 * tm.at(row, k) * pl[4][k] + w0 * tm.at(row, k) * pl[5][k];
            }
        }
    }
    return acc;
}

void OptimizerConfig::require_valid() const {
    if (restarts <= 0 || max_iterations <= 0 || simplex_step <= 0.0 || convergence_tol <= 0.0 ||
        penalty_weight_schedule.empty())
        throw std::invalid_argument("OptimizerConfig: all parameters must be positive");
    for (std::size_t i = 1; i < penalty_weight_schedule.size(); ++i)
        if (penalty_weight_schedule[i] <= penalty_weight_schedule[i - 1])
            throw std::invalid_argument("OptimizerConfig: penalty schedule must increase");
}

std::array<double, 8> normalize_ordering(const std::array<double, 8>& eigs) {
    double sum = 0.0;
    for (double e : eigs) {
        if (e < -1e-12) throw std::invalid_argument("normalize_ordering: negative probability");
        sum += e;
    }
    if (std::abs(sum - 1.0) > 1e-8) throw std::invalid_argument("normalize_ordering: not a distribution");
    std::array<double, 8> out = eigs;
    for (int jk = 0; jk < 4; ++jk)
        if (out[jk] < out[4 + jk]) std::swap(out[jk], out[4 + jk]);
    return out;
}

namespace {

// ---- shared in-plane see-saw: maximize <M3> over non-frozen angles ----

// party update through the correlation matrix; frozen settings keep their angle
void seesaw_angles(const CorrelationMatrix& tm, std::array<double, 6>& angles,
                   const std::array<bool, 6>& frozen, int sweeps) {
    auto contract = [&](const std::array<std::array<double, 2>, 6>& pl, int party, int setting,
                        int comp) -> double {
        // d<M3>/d pl[2*party+setting][comp]
        std::array<std::array<double, 2>, 6> g = pl;
        g[2 * party + setting] = {0.0, 0.0};
        g[2 * party + setting][comp] = 1.0;
        std::array<std::array<double, 2>, 6> z = pl;
        z[2 * party + 1 - setting] = {0.0, 0.0};
        z[2 * party + setting] = g[2 * party + setting];
        double acc = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double w1 = z[0][i] * z[3][j] + z[1][i] * z[2][j];
                const double w0 = z[0][i] * z[2][j] - z[1][i] * z[3][j];
                const std::size_t row = 3 * std::size_t(i) + std::size_t(j);
                for (int k = 0; k < 2; ++k)
                    acc += w1 * tm.at(row, k) * z[4][k] + w0 * tm.at(row, k) * z[5][k];
            }
        return acc;
    };
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        std::array<std::array<double, 2>, 6> pl{};
        for (int i = 0; i < 6; ++i) pl[i] = {std::cos(angles[i]), std::sin(angles[i])};
        bool moved = false;
        for (int party = 0; party < 3; ++party) {
            for (int setting = 0; setting < 2; ++setting) {
                const int idx = 2 * party + setting;
                if (frozen[idx]) continue;
                const double gx = contract(pl, party, setting, 0);
                const double gy = contract(pl, party, setting, 1);
                const double nrm = std::hypot(gx, gy);
                if (nrm < 1e-14) continue;
                const double next = std::atan2(gy, gx);
                if (std::abs(next - angles[idx]) > 1e-15) moved = true;
                angles[idx] = next;
                pl[idx] = {std::cos(next), std::sin(next)};
            }
        }
        if (!moved) break;
    }
}

// ---- Nelder-Mead on a boxed parameter vector ----

struct NmResult {
    std::vector<double> x;
    double f = 0.0;
    long iterations = 0;
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, double step, int max_iter, double ftol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    long iter = 0;
    std::vector<std::size_t> order(n + 1);
    while (iter < max_iter) {
        ++iter;
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (fv[worst] - fv[best] < ftol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
        }
        for (double& c : centroid) c /= double(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
            return p;
        };

        const std::vector<double> refl = blend(-1.0);
        const double frefl = f(refl);
        if (frefl < fv[best]) {
            const std::vector<double> exp_p = blend(-2.0);
            const double fexp = f(exp_p);
            if (fexp < frefl) {
                simplex[worst] = exp_p;
                fv[worst] = fexp;
            } else {
                simplex[worst] = refl;
                fv[worst] = frefl;
            }
            continue;
        }
        if (frefl < fv[second]) {
            simplex[worst] = refl;
            fv[worst] = frefl;
            continue;
        }
        const std::vector<double> contr = blend(frefl < fv[worst] ? -0.5 : 0.5);
        const double fcontr = f(contr);
        if (fcontr < std::min(frefl, fv[worst])) {
            simplex[worst] = contr;
            fv[worst] = fcontr;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < n; ++d) simplex[i][d] = 0.5 * (simplex[i][d] + simplex[best][d]);
            fv[i] = f(simplex[i]);
        }
    }
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    return {simplex[order[0]], fv[order[0]], iter};
}

// ---- decision-variable packing for problems (19)/(30) ----

struct FamilyPoint {
    std::array<double, 8> eigs{};
    double t = 0.0;
    std::array<double, 6> angles{};
};

FamilyPoint decode(const std::vector<double>& x) {
    FamilyPoint p;
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) sum += x[i] * x[i];
    if (sum < 1e-300) {
        p.eigs.fill(0.125);
    } else {
        for (int i = 0; i < 8; ++i) p.eigs[i] = x[i] * x[i] / sum;
    }
    p.eigs = normalize_ordering(p.eigs);
    p.t = std::clamp(x[8], -0.5 * kPi, 0.5 * kPi);
    for (int i = 0; i < 6; ++i) p.angles[i] = x[i + 1 + 8];
    return p;
}

std::vector<double> encode(const FamilyPoint& p) {
    std::vector<double> x(15);
    for (int i = 0; i < 8; ++i) x[i] = std::sqrt(std::max(0.0, p.eigs[i]));
    x[8] = p.t;
    for (int i = 0; i < 6; ++i) x[9 + i] = p.angles[i];
    return x;
}

FamilyPoint random_point(Rng& rng, double m, bool pair_objective, int restart) {
    FamilyPoint p;
    if (restart == 0) {
        // analytic minimizer shapes of the relaxed problems
        if (pair_objective) {
            const double nu = nu_m_pair(std::clamp(m, 2.0, 4.0));
            p.eigs = {nu, (1 - nu) / 3, (1 - nu) / 3, (1 - nu) / 3, 0, 0, 0, 0};
        } else {
            const double nu = nu_from_violation_single(std::max(m, kGme3));
            p.eigs = {nu, 0, 0, 1 - nu, 0, 0, 0, 0};
        }
        p.t = 0.0;
        p.angles = {0.0, 0.5 * kPi, 0.0, 0.5 * kPi, 0.25 * kPi, -0.25 * kPi};
    } else if (restart == 1) {
        p.eigs = {1, 0, 0, 0, 0, 0, 0, 0};
        p.t = 0.0;
        p.angles = {0.5 * kPi, kPi, 0.5 * kPi, kPi, 0.5 * kPi, kPi};  // Mermin pattern
    } else {
        std::array<double, 8> w{};
        double sum = 0.0;
        for (auto& v : w) {
            v = rng.normal();
            sum += v * v;
        }
        for (int i = 0; i < 8; ++i) p.eigs[i] = w[i] * w[i] / sum;
        p.eigs = normalize_ordering(p.eigs);
        p.t = rng.uniform(-0.25 * kPi, 0.25 * kPi);
        for (auto& a : p.angles) a = rng.uniform(0.0, kTwoPi);
    }
    // precondition the angle block toward feasibility
    const ComplexMatrix rho = density_from_eigs_ghz3(p.eigs, p.t);
    const CorrelationMatrix tm = correlation_matrix(rho, 3, CorrelationVariant::Standard);
    std::array<bool, 6> frozen{};
    if (pair_objective && restart == 0) frozen = {true, false, true, false, false, false};
    seesaw_angles(tm, p.angles, frozen, 60);
    return p;
}

OptimizationResult minimize_family(double m, const OptimizerConfig& cfg, bool pair_objective) {
    cfg.require_valid();
    if (m < 2.0 - 1e-12 || m > 4.0 + 1e-12)
        throw std::invalid_argument("minimize: violation target outside [2, 4]");
    m = std::clamp(m, 2.0, 4.0);

    auto objective_entropy = [&](const FamilyPoint& p) {
        return pair_objective ? family_hxy(p.eigs, p.t, p.angles[0], p.angles[2])
                              : family_hxe(p.eigs, p.t, p.angles[0]);
    };

    OptimizationResult best;
    best.value = pair_objective ? 3.0 : 2.0;  // above any attainable entropy
    bool have_best = false;
    long iterations = 0;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        Rng rng = Rng(cfg.seed).split(std::uint64_t(restart));
        FamilyPoint p = random_point(rng, m, pair_objective, restart);
        std::vector<double> x = encode(p);

        for (double mu : cfg.penalty_weight_schedule) {
            auto penalized = [&](const std::vector<double>& xv) {
                const FamilyPoint q = decode(xv);
                const double viol = family_violation(q.eigs, q.t, q.angles);
                const double gap = std::max(0.0, m - viol);
                return objective_entropy(q) + mu * gap * gap;
            };
            NmResult r = nelder_mead(penalized, x, cfg.simplex_step, cfg.max_iterations, cfg.convergence_tol);
            iterations += r.iterations;
            x = r.x;
        }

        const FamilyPoint q = decode(x);
        const double viol = family_violation(q.eigs, q.t, q.angles);
        const double value = objective_entropy(q);
        const bool feasible = viol >= m - kFeasibilitySlack;
        if (feasible && (!have_best || value < best.value)) {
            have_best = true;
            best.value = value;
            best.argmin_state = almost_ghz3_from_eigs(q.eigs, q.t);
            for (int i = 0; i < 6; ++i) best.argmin_angles[i] = q.angles[i];
            best.argmin_angles[6] = q.t;
            best.achieved_violation = viol;
            best.feasible = true;
        }
    }
    best.iterations_used = iterations;
    if (!have_best) {
        best.feasible = false;
        best.value = pair_objective ? 2.0 : 1.0;
    }
    return best;
}

}  // namespace

OptimizationResult minimize_hxe(double m, const OptimizerConfig& cfg) {
    return minimize_family(m, cfg, false);
}

OptimizationResult minimize_hxy(double m, const OptimizerConfig& cfg) {
    return minimize_family(m, cfg, true);
}

namespace {

// ---- brute-force maximizer ----

struct SettingParam {
    bool fixed = false;
    int sign = +1;
    double theta = 0.5 * kPi;  // polar angle from +z
    double phi = 0.0;

    MeasurementSetting to_setting() const {
        if (fixed) return MeasurementSetting::fixed(sign);
        return MeasurementSetting::bloch({std::sin(theta) * std::cos(phi),
                                          std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
};

MeasurementConfig to_config(const std::vector<SettingParam>& params) {
    MeasurementConfig c;
    for (std::size_t i = 0; i + 1 < params.size(); i += 2)
        c.parties.emplace_back(params[i].to_setting(), params[i + 1].to_setting());
    return c;
}

double golden_max_1d(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double golden = 0.6180339887498949;
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 > f2 ? x1 : x2;
}

// coarse grid / golden refinement over every free angle coordinate
void coordinate_pass(std::vector<SettingParam>& params, const std::function<double()>& eval,
                     int grid_points, int sweeps) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (auto& sp : params) {
            if (sp.fixed) continue;
            for (int which = 0; which < 2; ++which) {
                double& coord = which == 0 ? sp.theta : sp.phi;
                const double lo = which == 0 ? 0.0 : 0.0;
                const double hi = which == 0 ? kPi : kTwoPi;
                double best_v = eval();
                double best_c = coord;
                for (int g = 0; g < grid_points; ++g) {
                    coord = lo + (hi - lo) * (g + 0.5) / grid_points;
                    const double v = eval();
                    if (v > best_v) {
                        best_v = v;
                        best_c = coord;
                    }
                }
                coord = best_c;
                const double span = (hi - lo) / grid_points;
                coord = golden_max_1d(
                    [&](double c) {
                        coord = c;
                        return eval();
                    },
                    best_c - span, best_c + span, 28);
            }
        }
    }
}

// exact see-saw over full Bloch vectors: <M> is linear in each setting vector,
// so the per-setting optimum is the normalized gradient. Zero vectors are not
// representable as settings, so the affine offset from the sibling setting is
// cancelled by averaging two antipodal evaluations.
void seesaw_bloch(const CorrelationMatrix& tm, std::vector<SettingParam>& params, int n, int max_iter) {
    auto with_vector = [&](int party, int setting, const std::array<double, 3>& v) {
        MeasurementConfig c = to_config(params);
        (setting == 0 ? c.parties[party].first : c.parties[party].second) = MeasurementSetting::bloch(v);
        return mabk_expectation_from_corr(tm, c);
    };
    for (int iter = 0; iter < max_iter; ++iter) {
        double moved = 0.0;
        for (int party = 0; party < n; ++party) {
            if (params[2 * party].fixed || params[2 * party + 1].fixed) continue;
            for (int setting = 0; setting < 2; ++setting) {
                SettingParam& sp = params[2 * party + setting];
                const double offset =
                    0.5 * (with_vector(party, setting, {0, 0, 1}) + with_vector(party, setting, {0, 0, -1}));
                std::array<double, 3> grad{};
                grad[0] = with_vector(party, setting, {1, 0, 0}) - offset;
                grad[1] = with_vector(party, setting, {0, 1, 0}) - offset;
                grad[2] = with_vector(party, setting, {0, 0, 1}) - offset;
                const double nrm = std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
                if (nrm < 1e-14) continue;
                const double theta = std::acos(std::clamp(grad[2] / nrm, -1.0, 1.0));
                const double phi = std::atan2(grad[1], grad[0]);
                moved += std::abs(theta - sp.theta) + std::abs(phi - sp.phi);
                sp.theta = theta;
                sp.phi = phi;
            }
        }
        if (moved < 1e-13) break;
    }
}

double eval_config(const ComplexMatrix& rho, int n, const CorrelationMatrix& tm,
                   const std::vector<SettingParam>& params, bool any_fixed) {
    const MeasurementConfig c = to_config(params);
    if (any_fixed) return mabk_expectation(rho, n, c);
    return mabk_expectation_from_corr(tm, c);
}

}  // namespace

BruteForceResult brute_force_mabk_max(const ComplexMatrix& rho, int n, bool allow_fixed,
                                      const OptimizerConfig& cfg) {
    cfg.require_valid();
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("brute_force_mabk_max: dimension mismatch");
    if (!rho.is_density_matrix()) throw std::invalid_argument("brute_force_mabk_max: input is not a density matrix");

    const CorrelationMatrix tm = correlation_matrix(rho, n, CorrelationVariant::Standard);

    BruteForceResult best;
    bool have = false;

    // fixed/rank-one patterns per setting: 0 = rank-one, 1 = +id, 2 = -id
    const int pattern_count = allow_fixed ? 3 : 1;
    std::vector<int> pattern(2 * n, 0);

    std::function<void(int)> run_patterns = [&](int pos) {
        if (pos == 2 * n) {
            bool any_fixed = false;
            for (int v : pattern)
                if (v != 0) any_fixed = true;
            const int restarts = any_fixed ? std::max(1, cfg.restarts / 8) : cfg.restarts;
            for (int restart = 0; restart < restarts; ++restart) {
                Rng rng = Rng(cfg.seed).split(std::uint64_t(restart) * 977 + std::size_t(pos));
                std::vector<SettingParam> params(2 * n);
                for (int i = 0; i < 2 * n; ++i) {
                    if (pattern[i] != 0) {
                        params[i].fixed = true;
                        params[i].sign = pattern[i] == 1 ? +1 : -1;
                    } else {
                        params[i].theta = std::acos(rng.uniform(-1.0, 1.0));
                        params[i].phi = rng.uniform(0.0, kTwoPi);
                    }
                }
                auto eval = [&]() { return eval_config(rho, n, tm, params, any_fixed); };
                coordinate_pass(params, eval, 24, 3);
                if (!any_fixed) seesaw_bloch(tm, params, n, 200);
                const double v = eval();
                if (!have || v > best.max) {
                    have = true;
                    best.max = v;
                    best.argmax = to_config(params);
                }
            }
            return;
        }
        for (int p = 0; p < pattern_count; ++p) {
            pattern[pos] = p;
            run_patterns(pos + 1);
        }
        pattern[pos] = 0;
    };
    run_patterns(0);
    return best;
}

TauOptimalityReport verify_tau_optimality(double m, int samples, const OptimizerConfig& cfg) {
    if (m < kGme3 - 1e-9 || m > 4.0 + 1e-12) throw std::invalid_argument("verify_tau_optimality: m outside [2sqrt2, 4]");
    m = std::clamp(m, kGme3, 4.0);
    const double target_entropy = 1.0 - binary_entropy(nu_from_violation_single(m));

    TauOptimalityReport report;
    report.m = m;
    report.samples = samples;
    report.worst_margin = 1e9;

    const std::array<double, 8> vertex = {1, 0, 0, 0, 0, 0, 0, 0};
    for (int sample = 0; sample < samples; ++sample) {
        Rng rng = Rng(cfg.seed).split(std::uint64_t(sample) + 0x5151);
        std::array<double, 8> e{};
        double sum = 0.0;
        for (auto& v : e) {
            double u = rng.uniform();
            while (u <= 0.0) u = rng.uniform();
            v = -std::log(u);
            sum += v;
        }
        for (auto& v : e) v /= sum;
        e = normalize_ordering(e);

        // smallest beta along the segment toward the GHZ vertex with
        // corollary1_bound((1-b) e + b vertex) >= m
        std::array<double, 4> d{}, u{};
        for (int jk = 0; jk < 4; ++jk) {
            d[jk] = e[jk] - e[4 + jk];
            u[jk] = vertex[jk] - vertex[4 + jk];
        }
        double a2 = 0.0, a1 = 0.0, a0 = 0.0;
        for (int jk = 0; jk < 4; ++jk) {
            const double diff = u[jk] - d[jk];
            a2 += diff * diff;
            a1 += 2.0 * d[jk] * diff;
            a0 += d[jk] * d[jk];
        }
        const double target = m * m / 16.0;
        double beta_min = 0.0;
        if (a0 < target) {
            const double disc = a1 * a1 - 4.0 * a2 * (a0 - target);
            beta_min = (disc >= 0.0 && a2 > 0.0) ? (-a1 + std::sqrt(disc)) / (2.0 * a2) : 1.0;
            beta_min = std::clamp(beta_min, 0.0, 1.0);
        }
        double beta = beta_min + (1.0 - beta_min) * rng.uniform();
        std::array<double, 8> mixed{};
        for (int tries = 0; tries < 64; ++tries) {
            for (int i = 0; i < 8; ++i) mixed[i] = (1.0 - beta) * e[i] + beta * vertex[i];
            if (corollary1_bound(mixed) >= m) break;
            beta = std::min(1.0, beta + 1e-9 + (1.0 - beta) * 1e-3);
        }
        const double margin = closed_form_hxe(mixed) - target_entropy;
        report.worst_margin = std::min(report.worst_margin, margin);
        if (margin < -1e-9) ++report.violations;
    }
    return report;
}

KktResult kkt_enumerate(double m) {
    if (m < 2.0 - 1e-12 || m > 4.0 + 1e-12) throw std::invalid_argument("kkt_enumerate: m outside [2, 4]");
    m = std::clamp(m, 2.0, 4.0);
    const double s = m * m / 16.0;

    struct Candidate {
        const char* label;
        std::array<double, 4> dist;
        bool feasible;
    };
    std::vector<Candidate> cands;

    auto push = [&](const char* label, std::array<double, 4> dist, bool feasible) {
        // ordered, nonnegative, normalized
        for (int i = 0; i < 4; ++i)
            if (dist[i] < -1e-10) feasible = false;
        for (int i = 0; i + 1 < 4; ++i)
            if (dist[i] < dist[i + 1] - 1e-10) feasible = false;
        double sum = 0.0;
        for (double v : dist) sum += v;
        if (std::abs(sum - 1.0) > 1e-9) feasible = false;
        cands.push_back({label, dist, feasible});
    };

    // interior critical points: two distinct values fixed by the equalities
    {
        const double disc = 12.0 * s - 3.0;
        if (disc >= 0.0) {
            const double a = (1.0 + std::sqrt(disc)) / 4.0;
            push("(iii)", {a, (1 - a) / 3, (1 - a) / 3, (1 - a) / 3}, true);
        } else {
            push("(iii)", {0.25, 0.25, 0.25, 0.25}, false);
        }
    }
    {
        const double disc = 36.0 - 48.0 * (1.0 - s);
        if (disc >= 0.0) {
            const double a = (6.0 + std::sqrt(disc)) / 24.0;
            push("(ii)", {a, a, a, 1 - 3 * a}, true);
        }
    }
    {
        const double disc = 4.0 * s - 1.0;
        if (disc >= 0.0) {
            const double a = (1.0 + std::sqrt(disc)) / 4.0;
            push("(iv)", {a, a, 0.5 - a, 0.5 - a}, true);
        }
    }
    {
        const double disc = 6.0 * s - 2.0;
        if (disc >= 0.0) {
            const double a = (2.0 + std::sqrt(disc)) / 6.0;
            push("(vi)", {a, a, 1 - 2 * a, 0.0}, true);
        }
    }
    {
        const double disc = 6.0 * s - 2.0;
        if (disc >= 0.0) {
            const double a = (1.0 + std::sqrt(disc)) / 3.0;
            push("(vii)", {a, (1 - a) / 2, (1 - a) / 2, 0.0}, true);
        }
    }
    {
        const double disc = 2.0 * s - 1.0;
        if (disc >= 0.0) {
            const double a = (1.0 + std::sqrt(disc)) / 2.0;
            push("(viii)", {a, 1 - a, 0.0, 0.0}, true);
        }
    }
    // boundary-of-feasibility cases, valid while sum of squares clears the
    // constraint (the u = 0 branches)
    push("(i)", {0.25, 0.25, 0.25, 0.25}, 0.25 >= s - 1e-12);
    push("(v)", {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}, 1.0 / 3 >= s - 1e-12);
    push("(ix)", {0.5, 0.5, 0.0, 0.0}, 0.5 >= s - 1e-12);
    push("(x)", {1.0, 0.0, 0.0, 0.0}, true);

    KktResult best;
    bool have = false;
    for (const auto& c : cands) {
        if (!c.feasible) continue;
        std::vector<double> clamped;
        for (double v : c.dist) clamped.push_back(std::max(0.0, v));
        const double h = shannon_entropy(clamped);
        if (!have || h > best.entropy + 1e-15) {
            have = true;
            best.best_case = c.label;
            best.distribution = c.dist;
            best.entropy = h;
        }
    }
    if (!have) throw std::runtime_error("kkt_enumerate: no feasible critical case");
    return best;
}

}  // namespace mabk
