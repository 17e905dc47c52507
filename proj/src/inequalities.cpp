#include "gpdo/inequalities.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace gpdo {

double sobolev_norm(const SampledFunction& f, double a, const FourierEngine& eng,
                    const SpectralCalculus& spec) {
    const FourierField F = eng.forward(f);
    const FrequencyGrid& fg = eng.freq();
    const double gamma = a / spec.nu();
    double acc = 0;
    for (std::size_t node = 0; node < fg.nodes(); ++node) {
        if (spec.diagonal()) {
            const Eigen::VectorXd d = spec.power_diag(gamma, node);
            acc += fg.w[node] * (d.asDiagonal() * F.m[node]).squaredNorm();
        } else {
            acc += fg.w[node] * (spec.power(gamma, node) * F.m[node]).squaredNorm();
        }
    }
    return std::sqrt(acc);
}

namespace {

double op2norm(const Mat& A) {
    if (A.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return top > 0 ? std::sqrt(top) : 0.0;
}

// Evaluate the retained-block Hermitian/anti-Hermitian extremes of an
// assembled matrix.
void herm_stats(const Mat& A, double& min_eig, double& max_anti) {
    Mat H = 0.5 * (A + A.adjoint());
    Mat K = 0.5 * (A - A.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    max_anti = std::max(max_anti, op2norm(K));
}

}   // namespace

PositivityResult positivity_check(const Symbol& sym, const GroupGrid* xgrid, int x_stride) {
    PositivityResult res;
    res.min_eig = 1e300;
    const FrequencyGrid& fg = *sym.fg;
    const int R = fg.retained_dim();
    const bool bc = sym.broadcast();
    if (!bc && !xgrid)
        throw std::invalid_argument("positivity_check: x-dependent symbol needs a grid");

    std::vector<std::size_t> xs;
    if (bc) {
        xs.push_back(0);
    } else {
        // Subsampled sweep per axis with stride, plus axis endpoints by design
        // of the lattice walk (stride divides into the full range from 0).
        std::vector<int> axis_ids;
        for (int i = 0; i < xgrid->P; i += std::max(1, x_stride)) axis_ids.push_back(i);
        if (axis_ids.back() != xgrid->P - 1) axis_ids.push_back(xgrid->P - 1);
        std::vector<int> idx(static_cast<std::size_t>(xgrid->n), 0);
        const std::size_t total = static_cast<std::size_t>(
            std::pow(double(axis_ids.size()), xgrid->n) + 0.5);
        for (std::size_t c = 0; c < total; ++c) {
            std::size_t r = c, flat = 0;
            for (int a = xgrid->n - 1; a >= 0; --a) {
                idx[static_cast<std::size_t>(a)] = axis_ids[r % axis_ids.size()];
                r /= axis_ids.size();
            }
            for (int a = 0; a < xgrid->n; ++a)
                flat = flat * static_cast<std::size_t>(xgrid->P) +
                       static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
            xs.push_back(flat);
        }
    }

    for (std::size_t node = 0; node < fg.nodes(); ++node) {
        for (std::size_t xf : xs) {
            Mat A = sym.eval(bc ? nullptr : xgrid, xf, node).topLeftCorner(R, R);
            herm_stats(A, res.min_eig, res.max_antiherm);
        }
    }
    res.pass = res.min_eig >= -1e-10;
    return res;
}

CommutationResult commutation_check(const Symbol& sym, const GroupGrid* xgrid) {
    CommutationResult res;
    const FrequencyGrid& fg = *sym.fg;
    const int R = fg.retained_dim();
    for (const auto& t : sym.terms) {
        const double amax = t.a.is_const() ? 1.0 : t.a.max_abs(*xgrid);
        for (std::size_t node = 0; node < fg.nodes(); ++node) {
            Mat M = t.M[node].topLeftCorner(R, R);
            Mat Rk = sym.spec->rockland(node).topLeftCorner(R, R);
            Mat off = M;
            for (int k = 0; k < R; ++k) off(k, k) = 0;
            res.max_offdiag = std::max(res.max_offdiag, amax * off.norm());
            res.max_comm = std::max(res.max_comm, amax * op2norm(M * Rk - Rk * M));
        }
    }
    res.pass = res.max_comm <= 1e-10;
    return res;
}

GardingReport garding_scan(const Symbol& sym, int trials, std::uint64_t seed,
                           const FourierEngine& eng, const SpectralCalculus& spec) {
    // Hypothesis gate: the lower bound only makes sense for symbols that are
    // nonnegative on the representation spaces and commute with the spectral
    // measure of the Rockland operator.
    const PositivityResult pos = positivity_check(sym, &eng.grid());
    if (!pos.pass)
        throw std::invalid_argument(
            "garding_scan: symbol fails the nonnegativity hypothesis (min Hermitian "
            "eigenvalue " +
            std::to_string(pos.min_eig) + ")");
    const CommutationResult com = commutation_check(sym, &eng.grid());
    if (!com.pass)
        throw std::invalid_argument(
            "garding_scan: symbol fails the spectral-commutation hypothesis (max "
            "commutator norm " +
            std::to_string(com.max_comm) + ")");

    GardingReport rep;
    rep.m = sym.cls.m;
    rep.rho = sym.cls.rho;
    rep.delta = sym.cls.delta;
    rep.s = (sym.cls.m - (sym.cls.rho - sym.cls.delta)) / 2.0;
    rep.fit_trials = trials / 2;
    rep.holdout_trials = trials - rep.fit_trials;
    rep.min_re_form = 1e300;
    const GroupGrid& g = eng.grid();

    for (int t = 0; t < trials; ++t) {
        // Per-trial generator: deterministic irrespective of execution order.
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> uth(-3, 3), ux(-1.5, 1.5), uw(0.8, 1.6);
        Vec theta(g.n), x0(g.n), width(g.n);
        for (int a = 0; a < g.n; ++a) theta[a] = uth(rng);
        for (int a = 0; a < g.n; ++a) x0[a] = ux(rng);
        for (int a = 0; a < g.n; ++a) width[a] = uw(rng);
        SampledFunction f = make_gaussian(g, x0, width, theta);

        SampledFunction Tf = op_apply(sym, f, eng);
        const double re = std::real(inner(Tf, f));
        const double ns = sobolev_norm(f, 2.0 * rep.s, eng, spec);
        rep.re_form.push_back(re);
        rep.sob2.push_back(ns * ns);
        rep.min_re_form = std::min(rep.min_re_form, re);
    }

    double c = 0;
    for (int t = 0; t < rep.fit_trials; ++t)
        c = std::max(c, -rep.re_form[static_cast<std::size_t>(t)] /
                            rep.sob2[static_cast<std::size_t>(t)]);
    rep.C_est = std::max(0.0, c);
    for (int t = rep.fit_trials; t < trials; ++t) {
        const std::size_t i = static_cast<std::size_t>(t);
        if (rep.re_form[i] < -1.05 * rep.C_est * rep.sob2[i] - 1e-9) rep.violations++;
    }
    return rep;
}

SampledFunction resolvent_apply(const SampledFunction& f, const FourierEngine& eng,
                                std::shared_ptr<const SpectralCalculus> spec) {
    SymbolClassParams cls;
    cls.m = -spec->nu();
    Symbol inv = from_multiplier(std::move(spec), "power", -1.0, cls);
    return op_apply(inv, f, eng);
}

SampledFunction one_plus_rockland_fd(const GradedStructure& s, const SampledFunction& f) {
    SampledFunction out = f;
    for (int j = 0; j < s.dim(); ++j) {
        if (s.weights()[static_cast<std::size_t>(j)] != 1) continue;
        MultiIndex beta(static_cast<std::size_t>(s.dim()), 0);
        beta[static_cast<std::size_t>(j)] = 2;
        out -= apply_X_beta(s, beta, f);
    }
    return out;
}

DecayProfile schwartz_decay_report(const GradedStructure& s, const SampledFunction& u,
                                   const std::vector<MultiIndex>& betas,
                                   const std::vector<int>& Ms) {
    DecayProfile prof;
    prof.boundary_max = u.boundary_max();
    const GroupGrid& g = u.grid;
    for (const auto& beta : betas) {
        bool zero = true;
        for (int b : beta) zero = zero && b == 0;
        SampledFunction du = zero ? u : apply_X_beta(s, beta, u);
        for (int M : Ms) {
            DecayProfileRow row;
            row.beta = beta;
            row.M = M;
            double sup = 0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                double r2 = 0;
                const Vec p = g.point(i);
                for (double c : p) r2 += c * c;
                sup = std::max(sup,
                               std::pow(1.0 + std::sqrt(r2), M) * std::abs(du.v[i]));
            }
            row.weighted_sup = sup;
            prof.rows.push_back(row);
        }
    }
    return prof;
}

}   // namespace gpdo
