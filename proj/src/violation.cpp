#include "mabk/violation.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <cmath>
#include <stdexcept>

#include "mabk/rng.hpp"

namespace mabk {

const char* variant_name(CorrelationVariant v) {
    switch (v) {
        case CorrelationVariant::Standard: return "standard";
        case CorrelationVariant::Prime: return "prime";
        default: return "double_prime";
    }
}

double pauli_string_correlator(const ComplexMatrix& rho, const std::vector<int>& nus) {
    const int n = int(nus.size());
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("pauli_string_correlator: dimension mismatch");
    // P = kron of Paulis has one entry per row: row r -> column r^flip with a phase.
    std::size_t flip = 0;
    for (int i = 0; i < n; ++i) {
        const int nu = nus[i];
        if (nu < 1 || nu > 3) throw std::invalid_argument("pauli_string_correlator: nu outside 1..3");
        if (nu != 3) flip |= std::size_t(1) << (n - 1 - i);
    }
    cplx acc = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        cplx phase = 1.0;
        for (int i = 0; i < n; ++i) {
            const int bit = int((r >> (n - 1 - i)) & 1u);
            switch (nus[i]) {
                case 1: break;
                case 2: phase *= (bit ? cplx(0.0, 1.0) : cplx(0.0, -1.0)); break;
                default: if (bit) phase = -phase; break;
            }
        }
        acc += phase * rho(r ^ flip, r);
    }
    return acc.real();
}

namespace {

std::size_t ipow3(int k) {
    std::size_t p = 1;
    while (k-- > 0) p *= 3;
    return p;
}

// party order whose first block indexes the rows of the correlation matrix
std::vector<int> variant_party_order(CorrelationVariant variant, int n) {
    if (variant == CorrelationVariant::Standard) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        return order;
    }
    if (n != 3) throw std::invalid_argument("correlation_matrix: prime variants are defined for n = 3 only");
    if (variant == CorrelationVariant::Prime) return {0, 2, 1};
    return {1, 2, 0};  // DoublePrime
}

}  // namespace

CorrelationMatrix correlation_matrix(const ComplexMatrix& rho, int n, CorrelationVariant variant) {
    if (n < 2) throw std::invalid_argument("correlation_matrix: need n >= 2");
    const std::size_t dim = std::size_t(1) << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("correlation_matrix: dimension mismatch");

    const std::vector<int> order = variant_party_order(variant, n);
    const int h = (n + 1) / 2;

    CorrelationMatrix t;
    t.variant = variant;
    t.n = n;
    t.rows = ipow3(h);
    t.cols = ipow3(n - h);
    t.data.assign(t.rows * t.cols, 0.0);

    std::vector<int> nus(n, 1);
    for (std::size_t r = 0; r < t.rows; ++r) {
        std::size_t rr = r;
        for (int k = h - 1; k >= 0; --k) {
            nus[order[k]] = int(rr % 3) + 1;
            rr /= 3;
        }
        for (std::size_t c = 0; c < t.cols; ++c) {
            std::size_t cc = c;
            for (int k = n - 1; k >= h; --k) {
                nus[order[k]] = int(cc % 3) + 1;
                cc /= 3;
            }
            t.at(r, c) = pauli_string_correlator(rho, nus);
        }
    }
    return t;
}

namespace {

// T^T T as a complex matrix so the Jacobi solver can be reused
ComplexMatrix gram_of(const CorrelationMatrix& t) {
    ComplexMatrix g(t.cols, t.cols);
    for (std::size_t i = 0; i < t.cols; ++i)
        for (std::size_t j = i; j < t.cols; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < t.rows; ++r) acc += t.at(r, i) * t.at(r, j);
            g(i, j) = acc;
            g(j, i) = acc;
        }
    return g;
}

std::vector<double> apply_T(const CorrelationMatrix& t, const std::vector<double>& x) {
    std::vector<double> y(t.rows, 0.0);
    for (std::size_t r = 0; r < t.rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < t.cols; ++c) acc += t.at(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

std::vector<double> apply_Tt(const CorrelationMatrix& t, const std::vector<double>& x) {
    std::vector<double> y(t.cols, 0.0);
    for (std::size_t c = 0; c < t.cols; ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < t.rows; ++r) acc += t.at(r, c) * x[r];
        y[c] = acc;
    }
    return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

ViolationBound theorem2_bound(const ComplexMatrix& rho, int n, CorrelationVariant variant) {
    ViolationBound out;
    out.variant = variant;
    out.n = n;
    out.corr = correlation_matrix(rho, n, variant);

    const auto gram_eig = hermitian_eig(gram_of(out.corr));
    out.t0 = std::max(0.0, gram_eig.values[0]);
    out.t1 = std::max(0.0, gram_eig.values.size() > 1 ? gram_eig.values[1] : 0.0);
    out.bound = 2.0 * std::sqrt(out.t0 + out.t1);

    // row-space eigenvectors of T T^T: T w / sqrt(t); kernel directions fall
    // back to a direct decomposition of T T^T
    out.tvec0.assign(out.corr.rows, 0.0);
    out.tvec1.assign(out.corr.rows, 0.0);
    bool need_fallback = false;
    for (int k = 0; k < 2; ++k) {
        const double tk = (k == 0) ? out.t0 : out.t1;
        if (tk <= 1e-14) {
            need_fallback = true;
            continue;
        }
        std::vector<double> w(out.corr.cols);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = gram_eig.vectors(i, k).real();
        auto tv = apply_T(out.corr, w);
        const double nv = norm(tv);
        for (auto& x : tv) x /= nv;
        (k == 0 ? out.tvec0 : out.tvec1) = tv;
    }
    if (need_fallback) {
        ComplexMatrix big(out.corr.rows, out.corr.rows);
        for (std::size_t i = 0; i < out.corr.rows; ++i)
            for (std::size_t j = i; j < out.corr.rows; ++j) {
                double acc = 0.0;
                for (std::size_t c = 0; c < out.corr.cols; ++c) acc += out.corr.at(i, c) * out.corr.at(j, c);
                big(i, j) = acc;
                big(j, i) = acc;
            }
        const auto big_eig = hermitian_eig(big);
        for (int k = 0; k < 2; ++k) {
            const double tk = (k == 0) ? out.t0 : out.t1;
            if (tk > 1e-14) continue;
            auto& tv = (k == 0 ? out.tvec0 : out.tvec1);
            for (std::size_t i = 0; i < out.corr.rows; ++i) tv[i] = big_eig.vectors(i, k).real();
            // keep orthogonality against the other vector
            const auto& other = (k == 0 ? out.tvec1 : out.tvec0);
            const double ov = dot(tv, other);
            for (std::size_t i = 0; i < tv.size(); ++i) tv[i] -= ov * other[i];
            const double nv = norm(tv);
            if (nv > 1e-12)
                for (auto& x : tv) x /= nv;
        }
    }
    return out;
}

ViolationBound theorem2_bound_min_variant(const ComplexMatrix& rho) {
    ViolationBound best = theorem2_bound(rho, 3, CorrelationVariant::Standard);
    for (auto v : {CorrelationVariant::Prime, CorrelationVariant::DoublePrime}) {
        ViolationBound b = theorem2_bound(rho, 3, v);
        if (b.bound < best.bound) best = std::move(b);
    }
    return best;
}

double corollary1_bound(const std::array<double, 8>& eigs) {
    double sum = 0.0;
    for (double e : eigs) {
        if (e < -1e-9) throw std::invalid_argument("corollary1_bound: negative eigenvalue");
        sum += e;
    }
    if (std::abs(sum - 1.0) > 1e-8) throw std::invalid_argument("corollary1_bound: eigenvalues do not sum to 1");
    double acc = 0.0;
    for (int jk = 0; jk < 4; ++jk) {
        const double d = eigs[jk] - eigs[4 + jk];
        if (d < -1e-12) throw std::invalid_argument("corollary1_bound: ordering rho_{0jk} >= rho_{1jk} violated");
        acc += d * d;
    }
    return 4.0 * std::sqrt(acc);
}

namespace {

struct SplitSpec {
    int n = 3;
    int h = 2;                    // parties on the v side
    std::vector<int> vparties;    // actual party indices, search order
    std::vector<int> uparties;
    double prefactor = 1.0;       // <M> = prefactor * (v0.u0-contraction + v1.u1-contraction)
    double scale_v = 2.0;
    double scale_u = 1.0;
    int branch = 2;               // 0: N/2 even, 1: N/2 odd, 2: N odd
    // per-bit-string (in set?, sign) tables for the four structured vectors
    std::vector<std::pair<bool, double>> vterms0, vterms1, uterms0, uterms1;
};

long floor2(long a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }
long ceil2(long a) { return -floor2(-a); }
double spow(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

double v_sign(const SplitSpec& sp, int w) {
    switch (sp.branch) {
        case 0: return spow(sp.n / 4 - floor2(w));
        case 1: return spow((sp.n - 2) / 4 - floor2(w));
        default: return spow((sp.n - 1) / 4 - floor2(w));
    }
}

// whether string weight w belongs to u_k's index set, and its sign
bool u_term(const SplitSpec& sp, int k, int w, double& sign) {
    if (sp.branch == 0) {
        sign = (k == 0) ? spow(ceil2(w)) : spow(floor2(w) + 1);
        return true;
    }
    if (sp.branch == 1) {
        sign = (k == 0) ? spow(floor2(w)) : spow(ceil2(w));
        return true;
    }
    const int parity = ((sp.n - 1) / 2) % 2;
    if (k == 0) {
        sign = spow(floor2(w));
        return (w % 2) == parity;
    }
    sign = spow(ceil2(w));
    return ((w + 1) % 2) == parity;
}

using Vec3 = std::array<double, 3>;

// sum over all length-m bit strings passing `filter` of sign * kron of vecs
std::vector<double> tensor_sum(const std::vector<std::array<Vec3, 2>>& pairs,
                               const std::vector<std::pair<bool, double>>& terms) {
    const int m = int(pairs.size());
    const std::size_t dim = ipow3(m);
    std::vector<double> out(dim, 0.0);
    for (std::uint32_t x = 0; x < (std::uint32_t(1) << m); ++x) {
        const auto& [in_set, sign] = terms[x];
        if (!in_set) continue;
        // kron, leftmost party = most significant trit block
        std::vector<double> acc{sign};
        for (int i = 0; i < m; ++i) {
            const Vec3& a = pairs[i][(x >> (m - 1 - i)) & 1u];
            std::vector<double> next(acc.size() * 3);
            for (std::size_t j = 0; j < acc.size(); ++j)
                for (int c = 0; c < 3; ++c) next[j * 3 + c] = acc[j] * a[c];
            acc = std::move(next);
        }
        for (std::size_t j = 0; j < dim; ++j) out[j] += acc[j];
    }
    return out;
}

SplitSpec make_split(CorrelationVariant variant, int n) {
    SplitSpec sp;
    sp.n = n;
    sp.h = (n + 1) / 2;
    const auto order = variant_party_order(variant, n);
    sp.vparties.assign(order.begin(), order.begin() + sp.h);
    sp.uparties.assign(order.begin() + sp.h, order.end());
    if (n % 2 == 0) {
        sp.branch = (n / 2) % 2 == 0 ? 0 : 1;
        sp.prefactor = std::ldexp(1.0, -(n - 2) / 2);
        sp.scale_v = std::pow(2.0, n / 4.0);
        sp.scale_u = std::pow(2.0, n / 4.0);
    } else {
        sp.branch = 2;
        sp.prefactor = std::ldexp(1.0, -(n - 3) / 2);
        sp.scale_v = std::pow(2.0, (n + 1) / 4.0);
        sp.scale_u = std::pow(2.0, (n - 3) / 4.0);
    }
    const int mv = int(sp.vparties.size());
    sp.vterms0.resize(std::size_t(1) << mv);
    sp.vterms1.resize(std::size_t(1) << mv);
    for (std::uint32_t x = 0; x < (std::uint32_t(1) << mv); ++x) {
        const int w = std::popcount(x);
        const double sign = v_sign(sp, w);
        sp.vterms0[x] = {(w % 2) == 0, (w % 2) == 0 ? sign : 0.0};
        sp.vterms1[x] = {(w % 2) == 1, (w % 2) == 1 ? sign : 0.0};
    }
    const int mu = int(sp.uparties.size());
    sp.uterms0.resize(std::size_t(1) << mu);
    sp.uterms1.resize(std::size_t(1) << mu);
    for (std::uint32_t x = 0; x < (std::uint32_t(1) << mu); ++x) {
        const int w = std::popcount(x);
        double s0 = 0.0, s1 = 0.0;
        const bool in0 = u_term(sp, 0, w, s0);
        const bool in1 = u_term(sp, 1, w, s1);
        sp.uterms0[x] = {in0, in0 ? s0 : 0.0};
        sp.uterms1[x] = {in1, in1 ? s1 : 0.0};
    }
    return sp;
}

const SplitSpec& cached_split(CorrelationVariant variant, int n) {
    static std::map<std::pair<int, int>, SplitSpec> cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    const auto key = std::make_pair(int(variant), n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_split(variant, n)).first;
    return it->second;
}

std::vector<std::array<Vec3, 2>> bloch_pairs(const MeasurementConfig& config, const std::vector<int>& parties) {
    std::vector<std::array<Vec3, 2>> out;
    out.reserve(parties.size());
    for (int p : parties) {
        out.push_back({config.setting(p, 0).bloch_vector(), config.setting(p, 1).bloch_vector()});
    }
    return out;
}

}  // namespace

AppendixDVectors appendix_d_vectors(const MeasurementConfig& config, int n) {
    if (config.n_parties() != std::size_t(n)) throw std::invalid_argument("appendix_d_vectors: config party count mismatch");
    const SplitSpec& sp = cached_split(CorrelationVariant::Standard, n);
    const auto vpairs = bloch_pairs(config, sp.vparties);
    const auto upairs = bloch_pairs(config, sp.uparties);
    AppendixDVectors out;
    out.v0 = tensor_sum(vpairs, sp.vterms0);
    out.v1 = tensor_sum(vpairs, sp.vterms1);
    out.u0 = tensor_sum(upairs, sp.uterms0);
    out.u1 = tensor_sum(upairs, sp.uterms1);
    out.prefactor = sp.prefactor;
    return out;
}

double mabk_expectation_from_corr(const CorrelationMatrix& t, const MeasurementConfig& config) {
    const SplitSpec& sp = cached_split(t.variant, t.n);
    const auto vpairs = bloch_pairs(config, sp.vparties);
    const auto upairs = bloch_pairs(config, sp.uparties);
    const auto v0 = tensor_sum(vpairs, sp.vterms0);
    const auto v1 = tensor_sum(vpairs, sp.vterms1);
    const auto u0 = tensor_sum(upairs, sp.uterms0);
    const auto u1 = tensor_sum(upairs, sp.uterms1);
    return sp.prefactor * (dot(v0, apply_T(t, u0)) + dot(v1, apply_T(t, u1)));
}

double mabk_expectation_rank1(const ComplexMatrix& rho, int n, const MeasurementConfig& config) {
    return mabk_expectation_from_corr(correlation_matrix(rho, n, CorrelationVariant::Standard), config);
}

namespace {

struct WitnessTargets {
    std::vector<double> v0, v1, u0, u1;
    bool u0_active = true, u1_active = true;
};

// targets for a given rotation alpha (and reflection) inside the top-2 eigenspace
WitnessTargets make_targets(const ViolationBound& b, const SplitSpec& sp, double alpha, int refl) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    const std::size_t rows = b.corr.rows;
    std::vector<double> vhat0(rows), vhat1(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        vhat0[i] = c * b.tvec0[i] + s * b.tvec1[i];
        vhat1[i] = refl * (-s * b.tvec0[i] + c * b.tvec1[i]);
    }
    const double tsum = b.t0 + b.t1;
    const double ta = c * c * b.t0 + s * s * b.t1;
    const double tb = s * s * b.t0 + c * c * b.t1;

    WitnessTargets out;
    out.v0 = vhat0;
    out.v1 = vhat1;
    const double f0 = (tsum > 0.0) ? sp.scale_v * std::sqrt(ta / tsum) : 0.0;
    const double f1 = (tsum > 0.0) ? sp.scale_v * std::sqrt(tb / tsum) : 0.0;
    for (auto& x : out.v0) x *= f0;
    for (auto& x : out.v1) x *= f1;

    out.u0.assign(b.corr.cols, 0.0);
    out.u1.assign(b.corr.cols, 0.0);
    const double eps = 1e-11 * std::max(1.0, tsum);
    if (ta > eps) {
        out.u0 = apply_Tt(b.corr, vhat0);
        const double f = sp.scale_u / std::sqrt(ta);
        for (auto& x : out.u0) x *= f;
    } else {
        out.u0_active = false;
    }
    if (tb > eps) {
        out.u1 = apply_Tt(b.corr, vhat1);
        const double f = sp.scale_u / std::sqrt(tb);
        for (auto& x : out.u1) x *= f;
    } else {
        out.u1_active = false;
    }
    return out;
}

struct WitnessState {
    std::vector<std::array<Vec3, 2>> vpairs, upairs;
    double alpha = 0.0;
    int refl = 1;
};

double residual_of(const WitnessState& st, const WitnessTargets& tg, const SplitSpec& sp) {
    auto sq_dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    };
    double r = sq_dist(tensor_sum(st.vpairs, sp.vterms0), tg.v0) +
               sq_dist(tensor_sum(st.vpairs, sp.vterms1), tg.v1);
    if (tg.u0_active) r += sq_dist(tensor_sum(st.upairs, sp.uterms0), tg.u0);
    if (tg.u1_active) r += sq_dist(tensor_sum(st.upairs, sp.uterms1), tg.u1);
    return r;
}

// solve the 6x6 normal equations (ridge-regularized) in place
bool solve6(std::array<std::array<double, 7>, 6>& m) {
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-14) return false;
        std::swap(m[col], m[piv]);
        for (int r = 0; r < 6; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 7; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int r = 0; r < 6; ++r) m[r][6] /= m[r][r];
    return true;
}

// exact least-squares update of one party's setting pair, then renormalize
void als_update_party(std::vector<std::array<Vec3, 2>>& pairs, int idx,
                      const std::vector<std::pair<bool, double>>& terms0,
                      const std::vector<std::pair<bool, double>>& terms1,
                      const std::vector<double>* target0, const std::vector<double>* target1) {
    const std::size_t dim0 = target0 ? target0->size() : 0;
    const std::size_t dim1 = target1 ? target1->size() : 0;
    const std::size_t total = dim0 + dim1;
    if (total == 0) return;

    // columns of the stacked linear map [v0; v1] = M * [a_0; a_1]
    std::vector<std::vector<double>> cols(6, std::vector<double>(total, 0.0));
    auto old = pairs[idx];
    for (int x = 0; x < 2; ++x) {
        for (int c = 0; c < 3; ++c) {
            Vec3 basis{0, 0, 0};
            basis[c] = 1.0;
            pairs[idx][x] = basis;
            pairs[idx][1 - x] = Vec3{0, 0, 0};
            auto& col = cols[x * 3 + c];
            if (target0) {
                const auto b0 = tensor_sum(pairs, terms0);
                std::copy(b0.begin(), b0.end(), col.begin());
            }
            if (target1) {
                const auto b1 = tensor_sum(pairs, terms1);
                std::copy(b1.begin(), b1.end(), col.begin() + dim0);
            }
        }
    }
    pairs[idx] = old;

    std::vector<double> rhs(total, 0.0);
    if (target0) std::copy(target0->begin(), target0->end(), rhs.begin());
    if (target1) std::copy(target1->begin(), target1->end(), rhs.begin() + dim0);

    std::array<std::array<double, 7>, 6> normal{};
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < total; ++k) acc += cols[i][k] * cols[j][k];
            normal[i][j] = acc + (i == j ? 1e-12 : 0.0);
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < total; ++k) acc += cols[i][k] * rhs[k];
        normal[i][6] = acc;
    }
    if (!solve6(normal)) return;
    for (int x = 0; x < 2; ++x) {
        Vec3 z{normal[x * 3][6], normal[x * 3 + 1][6], normal[x * 3 + 2][6]};
        const double nz = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
        if (nz > 1e-9) pairs[idx][x] = {z[0] / nz, z[1] / nz, z[2] / nz};
    }
}

double witness_value(const WitnessState& st, const ViolationBound& b, const SplitSpec& sp) {
    const auto v0 = tensor_sum(st.vpairs, sp.vterms0);
    const auto v1 = tensor_sum(st.vpairs, sp.vterms1);
    const auto u0 = tensor_sum(st.upairs, sp.uterms0);
    const auto u1 = tensor_sum(st.upairs, sp.uterms1);
    return sp.prefactor * (dot(v0, apply_T(b.corr, u0)) + dot(v1, apply_T(b.corr, u1)));
}

// exact see-saw on the contraction: the value is linear in every party's
// setting pair, so each update is a normalized gradient
void seesaw_witness(WitnessState& st, const ViolationBound& b, const SplitSpec& sp, int iters) {
    auto update_side = [&](std::vector<std::array<Vec3, 2>>& pairs) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto saved = pairs[i];
            std::array<Vec3, 2> grads{};
            for (int x = 0; x < 2; ++x) {
                for (int comp = 0; comp < 3; ++comp) {
                    Vec3 basis{};
                    basis[comp] = 1.0;
                    pairs[i][x] = basis;
                    pairs[i][1 - x] = Vec3{0, 0, 0};
                    grads[x][comp] = witness_value(st, b, sp);
                }
            }
            pairs[i] = saved;
            for (int x = 0; x < 2; ++x) {
                const Vec3& g = grads[x];
                const double nrm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
                if (nrm > 1e-13) pairs[i][x] = {g[0] / nrm, g[1] / nrm, g[2] / nrm};
            }
        }
    };
    double prev = -1e300;
    for (int it = 0; it < iters; ++it) {
        update_side(st.vpairs);
        update_side(st.upairs);
        const double v = witness_value(st, b, sp);
        if (v - prev < 1e-14) break;
        prev = v;
    }
}

void optimize_alpha(WitnessState& st, const ViolationBound& b, const SplitSpec& sp) {
    double best_r = -1.0;
    double best_alpha = st.alpha;
    int best_refl = st.refl;
    for (int refl : {1, -1}) {
        for (int g = 0; g < 96; ++g) {
            const double a = g * (6.283185307179586 / 96.0);
            const double r = residual_of(st, make_targets(b, sp, a, refl), sp);
            if (best_r < 0.0 || r < best_r) {
                best_r = r;
                best_alpha = a;
                best_refl = refl;
            }
        }
    }
    // golden-section refine around the best grid cell
    const double golden = 0.6180339887498949;
    double lo = best_alpha - 6.283185307179586 / 96.0;
    double hi = best_alpha + 6.283185307179586 / 96.0;
    auto eval = [&](double a) {
        return residual_of(st, make_targets(b, sp, a, best_refl), sp);
    };
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = eval(x2);
        }
    }
    st.alpha = (f1 < f2) ? x1 : x2;
    st.refl = best_refl;
}

Vec3 random_unit(Rng& rng) {
    // uniform on the sphere
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 6.283185307179586);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Vec3 from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

std::optional<MeasurementConfig> tightness_witness(const ViolationBound& bound, int n,
                                                   const WitnessSearchConfig& cfg) {
    if (bound.n != n) throw std::invalid_argument("tightness_witness: party count mismatch");
    MeasurementConfig config;
    config.parties.assign(n, {MeasurementSetting::in_plane(0.0), MeasurementSetting::in_plane(0.0)});
    if (bound.bound <= 1e-12) return config;  // zero bound: any config attains it

    const SplitSpec& sp = cached_split(bound.variant, n);

    double best_res = -1.0;
    WitnessState best_state;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        Rng rng = Rng(cfg.seed).split(std::uint64_t(restart));
        WitnessState st;
        st.vpairs.resize(sp.vparties.size());
        st.upairs.resize(sp.uparties.size());
        for (auto& p : st.vpairs) p = {random_unit(rng), random_unit(rng)};
        for (auto& p : st.upairs) p = {random_unit(rng), random_unit(rng)};
        // precondition: a violation maximizer sits exactly on the Eq.-38
        // solution set whenever the bound is attainable
        seesaw_witness(st, bound, sp, 150);

        double prev = -1.0;
        for (int sweep = 0; sweep < cfg.als_sweeps; ++sweep) {
            optimize_alpha(st, bound, sp);
            const WitnessTargets tg = make_targets(bound, sp, st.alpha, st.refl);
            for (std::size_t i = 0; i < st.vpairs.size(); ++i)
                als_update_party(st.vpairs, int(i), sp.vterms0, sp.vterms1, &tg.v0, &tg.v1);
            for (std::size_t i = 0; i < st.upairs.size(); ++i)
                als_update_party(st.upairs, int(i), sp.uterms0, sp.uterms1,
                                 tg.u0_active ? &tg.u0 : nullptr, tg.u1_active ? &tg.u1 : nullptr);
            const double r = residual_of(st, tg, sp);
            if (prev >= 0.0 && std::abs(prev - r) < 1e-15) break;
            prev = r;
        }

        // coordinate-descent polish over spherical angles
        const std::size_t nvec = 2 * (st.vpairs.size() + st.upairs.size());
        std::vector<double> angles(2 * nvec);
        auto pack = [&]() {
            std::size_t k = 0;
            auto emit = [&](const Vec3& v) {
                angles[k++] = std::acos(std::clamp(v[2], -1.0, 1.0));
                angles[k++] = std::atan2(v[1], v[0]);
            };
            for (auto& p : st.vpairs) { emit(p[0]); emit(p[1]); }
            for (auto& p : st.upairs) { emit(p[0]); emit(p[1]); }
        };
        auto unpack = [&](WitnessState& w) {
            std::size_t k = 0;
            auto read = [&]() {
                const double th = angles[k], ph = angles[k + 1];
                k += 2;
                return from_angles(th, ph);
            };
            for (auto& p : w.vpairs) { p[0] = read(); p[1] = read(); }
            for (auto& p : w.upairs) { p[0] = read(); p[1] = read(); }
        };
        pack();
        double cur = residual_of(st, make_targets(bound, sp, st.alpha, st.refl), sp);
        double step = 0.1;
        for (int round = 0; round < cfg.polish_rounds && cur > 1e-16; ++round) {
            bool improved = false;
            for (std::size_t i = 0; i < angles.size(); ++i) {
                for (double dir : {+1.0, -1.0}) {
                    const double saved = angles[i];
                    angles[i] = saved + dir * step;
                    WitnessState trial = st;
                    unpack(trial);
                    const double r = residual_of(trial, make_targets(bound, sp, st.alpha, st.refl), sp);
                    if (r < cur) {
                        cur = r;
                        st = trial;
                        improved = true;
                        break;
                    }
                    angles[i] = saved;
                }
            }
            optimize_alpha(st, bound, sp);
            cur = residual_of(st, make_targets(bound, sp, st.alpha, st.refl), sp);
            if (!improved) step *= 0.5;
            if (step < 1e-10) break;
        }

        if (best_res < 0.0 || cur < best_res) {
            best_res = cur;
            best_state = st;
        }
        if (best_res <= cfg.residual_threshold * cfg.residual_threshold * 0.01) break;
    }

    if (best_res < 0.0 || std::sqrt(std::max(0.0, best_res)) > cfg.residual_threshold) return std::nullopt;

    for (std::size_t i = 0; i < sp.vparties.size(); ++i) {
        config.parties[sp.vparties[i]] = {MeasurementSetting::bloch(best_state.vpairs[i][0]),
                                          MeasurementSetting::bloch(best_state.vpairs[i][1])};
    }
    for (std::size_t i = 0; i < sp.uparties.size(); ++i) {
        config.parties[sp.uparties[i]] = {MeasurementSetting::bloch(best_state.upairs[i][0]),
                                          MeasurementSetting::bloch(best_state.upairs[i][1])};
    }
    // a witness must actually reach the bound
    const double achieved = mabk_expectation_from_corr(bound.corr, config);
    if (std::abs(achieved - bound.bound) > cfg.residual_threshold) return std::nullopt;
    return config;
}

}  // namespace mabk
