#include "gpdo/symbol.hpp"

#include <cmath>
#include <stdexcept>

namespace gpdo {

namespace {

double op_norm(const Mat& A, bool diag) {
    if (diag) {
        double v = 0;
        for (int k = 0; k < A.rows(); ++k) v = std::max(v, std::abs(A(k, k)));
        return v;
    }
    // Largest singular value via the Gram matrix: much cheaper than an SVD
    // and accurate far beyond the tolerances used on these norms.
    Eigen::SelfAdjointEigenSolver<Mat> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return top > 0 ? std::sqrt(top) : 0.0;
}

bool is_zero_multi(const MultiIndex& a) {
    for (int t : a)
        if (t != 0) return false;
    return true;
}

}   // namespace

SpectralCalculus::SpectralCalculus(const GradedStructure& s, const FrequencyGrid& fg,
                                   RocklandKind kind)
    : s_(&s), fg_(&fg), kind_(kind), nu_(rockland_degree(kind, s)) {
    diag_ = fg.backend == FrequencyGrid::Backend::abelian ||
            kind == RocklandKind::sublaplacian;
    const std::size_t K = fg.nodes();
    mu_.resize(K);
    if (!diag_) V_.resize(K);
    for (std::size_t node = 0; node < K; ++node) {
        Mat R = rockland_matrix(s, fg, kind, node);
        if (diag_) {
            Eigen::VectorXd d(R.rows());
            for (int k = 0; k < R.rows(); ++k) d(k) = R(k, k).real();
            mu_[node] = d;
        } else {
            Eigen::SelfAdjointEigenSolver<Mat> es(R);
            mu_[node] = es.eigenvalues();
            V_[node] = es.eigenvectors();
        }
    }
}

std::shared_ptr<const SpectralCalculus> SpectralCalculus::make(const GradedStructure& s,
                                                               const FrequencyGrid& fg,
                                                               RocklandKind kind) {
    return std::make_shared<const SpectralCalculus>(s, fg, kind);
}

Mat SpectralCalculus::power(double gamma, std::size_t node) const {
    const Eigen::VectorXd& mu = mu_[node];
    const int d = static_cast<int>(mu.size());
    if (diag_) {
        Mat m = Mat::Zero(d, d);
        for (int k = 0; k < d; ++k) m(k, k) = std::pow(1.0 + mu(k), gamma);
        return m;
    }
    Eigen::VectorXcd p(d);
    for (int k = 0; k < d; ++k) p(k) = std::pow(1.0 + mu(k), gamma);
    return V_[node] * p.asDiagonal() * V_[node].adjoint();
}

Eigen::VectorXd SpectralCalculus::power_diag(double gamma, std::size_t node) const {
    if (!diag_) throw std::logic_error("power_diag: calculus is not diagonal");
    const Eigen::VectorXd& mu = mu_[node];
    Eigen::VectorXd v(mu.size());
    for (int k = 0; k < mu.size(); ++k) v(k) = std::pow(1.0 + mu(k), gamma);
    return v;
}

Mat SpectralCalculus::apply(const std::function<double(double)>& phi,
                            std::size_t node) const {
    const Eigen::VectorXd& mu = mu_[node];
    const int d = static_cast<int>(mu.size());
    Eigen::VectorXcd p(d);
    for (int k = 0; k < d; ++k) {
        const double v = phi(mu(k));
        if (!std::isfinite(v))
            throw std::domain_error("multiplier returned a non-finite value");
        p(k) = v;
    }
    if (diag_) {
        Mat m = Mat::Zero(d, d);
        for (int k = 0; k < d; ++k) m(k, k) = p(k);
        return m;
    }
    return V_[node] * p.asDiagonal() * V_[node].adjoint();
}

Mat SpectralCalculus::rockland(std::size_t node) const {
    return rockland_matrix(*s_, *fg_, kind_, node);
}

cd Coefficient::at(const GroupGrid& g, std::size_t flat) const {
    switch (kind) {
        case Kind::one:
            return cd(1, 0);
        case Kind::callable:
            return fn(g.point(flat));
        case Kind::sampled:
            if (!grid || !grid->same_layout(g))
                throw std::invalid_argument("sampled coefficient: grid mismatch");
            return v[flat];
    }
    return cd(0, 0);
}

double Coefficient::max_abs(const GroupGrid& g) const {
    if (kind == Kind::one) return 1.0;
    if (kind == Kind::sampled) {
        double m = 0;
        for (const cd& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double m = 0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(fn(g.point(i))));
    return m;
}

Coefficient Coefficient::one() { return Coefficient{}; }

Coefficient Coefficient::named(const std::string& name) {
    if (name == "one") return one();
    Coefficient c;
    c.kind = Kind::callable;
    c.name = name;
    c.fn = coefficient_fn(name);
    return c;
}

Coefficient Coefficient::sampled_on(const GroupGrid& g, std::vector<cd> values,
                                    std::string name) {
    Coefficient c;
    c.kind = Kind::sampled;
    c.name = std::move(name);
    c.grid = &g;
    c.v = std::move(values);
    return c;
}

void SymbolClassParams::validate() const {
    if (!(0 <= delta && delta <= rho && rho <= 1) || delta == 1)
        throw std::invalid_argument("class parameters need 0 <= delta <= rho <= 1, delta != 1");
}

bool Symbol::broadcast() const {
    for (const auto& t : terms)
        if (!t.a.is_const()) return false;
    return true;
}

Mat Symbol::eval(const GroupGrid* g, std::size_t xflat, std::size_t node) const {
    const int d = fg->mat_dim();
    Mat acc = Mat::Zero(d, d);
    for (const auto& t : terms) {
        cd c = t.a.is_const() ? cd(1, 0) : t.a.at(*g, xflat);
        acc += c * t.M[node];
    }
    return acc;
}

Symbol Symbol::scaled(cd c) const {
    Symbol out = *this;
    for (auto& t : out.terms) {
        for (auto& M : t.M) M *= c;
        if (c != cd(1, 0)) t.power_exp.reset();
    }
    return out;
}

Symbol Symbol::plus(const Symbol& o) const {
    if (fg != o.fg) throw std::invalid_argument("symbol sum: frequency grid mismatch");
    Symbol out = *this;
    out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
    return out;
}

Symbol Symbol::adjoint() const {
    if (!broadcast())
        throw std::invalid_argument("adjoint: only x-independent symbols are supported");
    Symbol out = *this;
    for (auto& t : out.terms)
        for (auto& M : t.M) M = M.adjoint().eval();
    return out;
}

double Symbol::trace_diagnostic() const {
    double s = 0;
    for (std::size_t node = 0; node < fg->nodes(); ++node) {
        Mat A = eval(nullptr, 0, node);   // broadcast part only if x-dependent
        if (!broadcast()) {
            A = Mat::Zero(fg->mat_dim(), fg->mat_dim());
            for (const auto& t : terms) A += t.M[node];   // unit-coefficient bound
        }
        Eigen::BDCSVD<Mat> svd(A);
        s += fg->w[node] * svd.singularValues().sum();
    }
    return s;
}

Symbol from_multiplier(std::shared_ptr<const SpectralCalculus> spec, const std::string& phi,
                       double param, SymbolClassParams cls) {
    cls.validate();
    const FrequencyGrid& fg = spec->freq();
    std::function<double(double)> f;
    std::optional<double> tag;
    if (phi == "one") {
        f = [](double) { return 1.0; };
        tag = 0.0;
    } else if (phi == "heat") {
        f = [](double mu) { return std::exp(-mu); };
    } else if (phi == "power") {
        f = [param](double mu) { return std::pow(1.0 + mu, param); };
        tag = param;
    } else if (phi == "bump") {
        f = [](double mu) { return std::exp(-0.5 * (mu - 2.0) * (mu - 2.0)); };
    } else {
        throw std::invalid_argument("unknown multiplier: " + phi);
    }
    Symbol sym;
    sym.s = &spec->structure();
    sym.fg = &fg;
    sym.spec = spec;
    sym.cls = cls;
    SymbolTerm t;
    t.a = Coefficient::one();
    t.diag = spec->diagonal();
    t.power_exp = tag;
    t.M.reserve(fg.nodes());
    for (std::size_t node = 0; node < fg.nodes(); ++node) t.M.push_back(spec->apply(f, node));
    sym.terms.push_back(std::move(t));
    return sym;
}

Symbol symbol_identity(std::shared_ptr<const SpectralCalculus> spec, double m) {
    SymbolClassParams cls;
    cls.m = m;
    return from_multiplier(std::move(spec), "one", 0.0, cls);
}

double hom_multi_degree(const GradedStructure& s, const MultiIndex& alpha) {
    double d = 0;
    for (std::size_t j = 0; j < alpha.size(); ++j) d += alpha[j] * s.weights()[j];
    return d;
}

Symbol from_invariant_operator(std::shared_ptr<const SpectralCalculus> spec,
                               const MultiIndex& alpha) {
    const FrequencyGrid& fg = spec->freq();
    Symbol sym;
    sym.s = &spec->structure();
    sym.fg = &fg;
    sym.spec = spec;
    SymbolTerm t;
    t.a = Coefficient::one();
    const int d = fg.mat_dim();
    bool diag = true;
    t.M.reserve(fg.nodes());
    for (std::size_t node = 0; node < fg.nodes(); ++node) {
        Mat A = Mat::Identity(d, d);
        for (std::size_t j = 0; j < alpha.size(); ++j)
            for (int r = 0; r < alpha[j]; ++r) A *= infinitesimal_rep(fg, static_cast<int>(j), node);
        t.M.push_back(A);
    }
    if (fg.backend == FrequencyGrid::Backend::heisenberg) {
        for (std::size_t j = 0; j + 1 < alpha.size(); ++j)
            if (alpha[j] > 0) diag = false;   // only the central generator is diagonal
    }
    t.diag = diag;
    if (is_zero_multi(alpha)) t.power_exp = 0.0;   // identity symbol, exact
    sym.terms.push_back(std::move(t));
    sym.cls.m = hom_multi_degree(sym.spec->structure(), alpha);
    sym.cls.rho = 1;
    sym.cls.delta = 0;
    return sym;
}

Symbol with_coefficient(Symbol base, Coefficient a) {
    if (a.is_const()) return base;
    for (auto& t : base.terms) {
        if (!t.a.is_const())
            throw std::invalid_argument("with_coefficient: term already has a coefficient");
        t.a = a;
        t.power_exp.reset();
    }
    return base;
}

Symbol from_transform(std::shared_ptr<const SpectralCalculus> spec, const FourierField& F,
                      SymbolClassParams cls) {
    cls.validate();
    Symbol sym;
    sym.s = &spec->structure();
    sym.fg = F.fg;
    sym.spec = std::move(spec);
    sym.cls = cls;
    SymbolTerm t;
    t.a = Coefficient::one();
    t.M = F.m;
    t.diag = F.fg->mat_dim() == 1;
    sym.terms.push_back(std::move(t));
    return sym;
}

/// The windowed difference quotient computes Delta(W sigma); W = 1 at
/// lambda = 0 and |W + dW/d(ln lambda)| <= 1 everywhere, so sup-type
/// seminorms are never inflated by the window. An entire (Gaussian) window
/// keeps the synthesis quadrature spectrally convergent and gives the
/// kernel a Gaussian envelope in the central direction, so the analysis
/// integral over the finite box loses almost nothing to tail truncation --
/// any window with finitely many continuous derivatives leaves algebraic
/// kernel tails that dominate the error budget.
double band_edge_window(double lambda, double lambda_max, double steepness) {
    const double u = steepness * lambda / lambda_max;
    return std::exp(-u * u);
}

KernelPipeline::KernelPipeline(const GradedStructure& s, const GroupGrid& kgrid,
                               const FrequencyGrid& fg, KernelPipelineOptions opt)
    : s_(&s), fg_(&fg), opt_(opt), back_(s, kgrid, fg) {
    if (fg.backend == FrequencyGrid::Backend::abelian) return;   // exact DFT pair
    if (opt.dense_factor < 1)
        throw std::invalid_argument("kernel pipeline: dense_factor must be >= 1");
    dense_ = FrequencyGrid::heisenberg(fg.lambda_min, fg.lambda_max, fg.panels,
                                       fg.nodes_per_panel * opt.dense_factor, fg.N);
    dense_eng_ = std::make_unique<FourierEngine>(s, kgrid, dense_);

    win_.resize(dense_.nodes());
    for (std::size_t dd = 0; dd < dense_.nodes(); ++dd)
        win_[dd] = band_edge_window(dense_.lam[dd], dense_.lambda_max,
                                    opt.window_steepness);

    // Hermite-index taper over the tail buffer: a hard truncation at k = N
    // leaves the synthesized delta kernel with oscillatory Laguerre tails in
    // (x, y) that alias onto mid-k rows of the analysis step. Rolling the
    // buffer band off smoothly removes them; retained rows and columns keep
    // weight exactly 1 (the buffer exists to be expendable).
    tap_ = Eigen::VectorXd::Ones(fg.N + 1);
    for (int k = fg.retained_dim(); k <= fg.N; ++k) {
        const double u = static_cast<double>(fg.N + 1 - k) / (fg.B + 1);
        tap_(k) = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    }

    // Panel-local barycentric interpolation from the main nodes to the dense
    // ones. Both grids share panel edges, so every dense node sits inside one
    // main panel; nodes are laid out positive side first, then the mirrored
    // negative side in the same order.
    const int npp = fg.nodes_per_panel;
    const int nppd = dense_.nodes_per_panel;
    const int half = fg.panels / 2;
    const std::size_t off_main = static_cast<std::size_t>(half) * npp;
    const std::size_t off_dense = static_cast<std::size_t>(half) * nppd;
    sup0_.resize(dense_.nodes());
    cw_.assign(dense_.nodes(), std::vector<double>(npp, 0.0));
    for (int side = 0; side < 2; ++side) {
        for (int p = 0; p < half; ++p) {
            const std::size_t base_m = side * off_main + static_cast<std::size_t>(p) * npp;
            std::vector<double> xj(npp), om(npp);
            for (int j = 0; j < npp; ++j) xj[j] = fg.lam[base_m + j];
            for (int j = 0; j < npp; ++j) {
                double prod = 1;
                for (int k = 0; k < npp; ++k)
                    if (k != j) prod *= xj[j] - xj[k];
                om[j] = 1.0 / prod;
            }
            const std::size_t base_d = side * off_dense + static_cast<std::size_t>(p) * nppd;
            for (int q = 0; q < nppd; ++q) {
                const std::size_t dd = base_d + q;
                sup0_[dd] = base_m;
                const double x = dense_.lam[dd];
                auto& c = cw_[dd];
                int hit = -1;
                for (int j = 0; j < npp; ++j)
                    if (std::abs(x - xj[j]) <= 1e-13 * std::abs(xj[j])) hit = j;
                if (hit >= 0) {
                    c[hit] = 1.0;
                    continue;
                }
                double den = 0;
                for (int j = 0; j < npp; ++j) {
                    c[j] = om[j] / (x - xj[j]);
                    den += c[j];
                }
                for (int j = 0; j < npp; ++j) c[j] /= den;
            }
        }
    }
}

SampledFunction KernelPipeline::synthesize_kernel(const std::vector<Mat>& M) const {
    if (M.size() != fg_->nodes())
        throw std::invalid_argument("kernel pipeline: field lives on a different grid");
    if (fg_->backend == FrequencyGrid::Backend::abelian) {
        FourierField F;
        F.fg = fg_;
        F.m = M;
        return back_.synthesize(F);
    }
    const int npp = fg_->nodes_per_panel;
    FourierField F = FourierField::zeros(dense_);
    for (std::size_t dd = 0; dd < dense_.nodes(); ++dd) {
        if (win_[dd] == 0.0) continue;
        Mat& B = F.m[dd];
        const auto& c = cw_[dd];
        for (int j = 0; j < npp; ++j)
            if (c[j] != 0.0) B += c[j] * M[sup0_[dd] + j];
        B = win_[dd] * (tap_.asDiagonal() * B * tap_.asDiagonal());
    }
    return dense_eng_->synthesize(F);
}

double KernelPipeline::window_at(std::size_t node) const {
    if (fg_->backend == FrequencyGrid::Backend::abelian) return 1.0;
    return band_edge_window(fg_->lam[node], fg_->lambda_max, opt_.window_steepness);
}

DifferenceCalculus::DifferenceCalculus(const GradedStructure& s, const FrequencyGrid& fg,
                                       const FourierEngine* lattice)
    : s_(&s), fg_(&fg), eng_(lattice) {
    if (fg.backend == FrequencyGrid::Backend::abelian) {
        if (!eng_)
            throw std::invalid_argument(
                "difference calculus: abelian backend needs a lattice engine");
        if (&eng_->freq() != &fg)
            throw std::invalid_argument("difference calculus: engine grid mismatch");
        return;
    }
    auto ops = HermiteOps::get(fg.N);
    U1_ = ops->U1.cast<cd>();
    D1_ = ops->D1.cast<cd>();

    // Spectral differentiation in lambda, panel by panel: D_ij =
    // (w_j / w_i) / (x_i - x_j) off the diagonal, rows summing to zero.
    const int npp = fg.nodes_per_panel;
    const int half = fg.panels / 2;
    const std::size_t off = static_cast<std::size_t>(half) * npp;
    panel_base_.resize(fg.nodes());
    panel_id_.resize(fg.nodes());
    dmat_.reserve(static_cast<std::size_t>(2) * half);
    for (int side = 0; side < 2; ++side)
        for (int p = 0; p < half; ++p) {
            const std::size_t base = side * off + static_cast<std::size_t>(p) * npp;
            std::vector<double> xj(npp), om(npp);
            for (int j = 0; j < npp; ++j) xj[j] = fg.lam[base + j];
            for (int j = 0; j < npp; ++j) {
                double prod = 1;
                for (int k = 0; k < npp; ++k)
                    if (k != j) prod *= xj[j] - xj[k];
                om[j] = 1.0 / prod;
            }
            Eigen::MatrixXd dm(npp, npp);
            for (int i = 0; i < npp; ++i) {
                double diag = 0;
                for (int j = 0; j < npp; ++j) {
                    if (j == i) continue;
                    dm(i, j) = (om[j] / om[i]) / (xj[i] - xj[j]);
                    diag -= dm(i, j);
                }
                dm(i, i) = diag;
            }
            const int id = static_cast<int>(dmat_.size());
            dmat_.push_back(std::move(dm));
            for (int j = 0; j < npp; ++j) {
                panel_base_[base + j] = base;
                panel_id_[base + j] = id;
            }
        }
}

std::vector<Mat> DifferenceCalculus::apply_direction(const std::vector<Mat>& M, int j) const {
    const FrequencyGrid& fg = *fg_;
    if (M.size() != fg.nodes())
        throw std::invalid_argument("difference calculus: field lives on a different grid");
    std::vector<Mat> out(M.size());
    if (j == 2) {   // central direction: i d/dlambda minus the basis connection
        const int npp = fg.nodes_per_panel;
        for (std::size_t nd = 0; nd < M.size(); ++nd) {
            const Eigen::MatrixXd& dm = dmat_[panel_id_[nd]];
            const int row = static_cast<int>(nd - panel_base_[nd]);
            Mat dM = Mat::Zero(M[nd].rows(), M[nd].cols());
            for (int q = 0; q < npp; ++q)
                dM += dm(row, q) * M[panel_base_[nd] + q];
            const Mat CD = D1_ * M[nd] - M[nd] * D1_;
            const Mat CU = U1_ * M[nd] - M[nd] * U1_;
            const cd i1(0.0, 1.0);
            out[nd] = i1 * dM - (i1 / (2.0 * fg.lam[nd])) * (CD * U1_ - CU * D1_);
        }
        return out;
    }
    for (std::size_t nd = 0; nd < M.size(); ++nd) {
        const double l = fg.lam[nd];
        const double r = std::sqrt(std::abs(l));
        if (j == 0) {
            out[nd] = (U1_ * M[nd] - M[nd] * U1_) / r;
        } else {
            const cd c(0.0, (l >= 0 ? 1.0 : -1.0) / r);
            out[nd] = c * (D1_ * M[nd] - M[nd] * D1_);
        }
    }
    return out;
}

Symbol difference_op(const Symbol& sym, const MultiIndex& alpha, const DifferenceCalculus& dc) {
    if (is_zero_multi(alpha)) return sym;
    if (&dc.freq() != sym.fg)
        throw std::invalid_argument("difference_op: frequency grid mismatch");
    Symbol out = sym;
    if (sym.fg->backend == FrequencyGrid::Backend::abelian) {
        for (auto& t : out.terms) {
            FourierField F;
            F.fg = sym.fg;
            F.m = std::move(t.M);
            SampledFunction kappa = dc.eng_->synthesize(F);
            SampledFunction xk = monomial_multiply(dc.structure(), alpha, kappa);
            t.M = dc.eng_->forward(xk).m;
            t.power_exp.reset();
        }
        return out;
    }
    for (auto& t : out.terms) {
        for (std::size_t j = 0; j < alpha.size(); ++j)
            for (int rep = 0; rep < alpha[j]; ++rep)
                t.M = dc.apply_direction(t.M, static_cast<int>(j));
        t.power_exp.reset();
        t.diag = false;
    }
    return out;
}

Symbol difference_op_kernel(const Symbol& sym, const MultiIndex& alpha,
                            const KernelPipeline& kp) {
    if (is_zero_multi(alpha)) return sym;
    if (&kp.freq() != sym.fg)
        throw std::invalid_argument("difference_op_kernel: pipeline frequency grid mismatch");
    Symbol out = sym;
    out.kernel_boundary_ratio = 0;
    for (auto& t : out.terms) {
        SampledFunction kappa = kp.synthesize_kernel(t.M);
        const double mx = kappa.max_abs();
        if (mx > 0)
            out.kernel_boundary_ratio =
                std::max(out.kernel_boundary_ratio, kappa.boundary_max() / mx);
        SampledFunction xk = monomial_multiply(kp.structure(), alpha, kappa);
        FourierField G = kp.forward(xk);
        t.M = std::move(G.m);
        t.power_exp.reset();
        t.diag = sym.fg->mat_dim() == 1;
    }
    return out;
}

Symbol x_derivative(const Symbol& sym, const MultiIndex& beta, const GroupGrid& g) {
    if (is_zero_multi(beta)) return sym;
    Symbol out = sym;
    out.terms.clear();
    for (const auto& t : sym.terms) {
        if (t.a.is_const()) continue;   // constant coefficients are annihilated
        SampledFunction a = SampledFunction::zeros(g);
        for (std::size_t i = 0; i < g.size(); ++i) a.v[i] = t.a.at(g, i);
        SampledFunction da = apply_X_beta(*sym.s, beta, a);
        SymbolTerm nt = t;
        nt.a = Coefficient::sampled_on(g, std::move(da.v), "X^beta " + t.a.name);
        nt.power_exp.reset();
        out.terms.push_back(std::move(nt));
    }
    return out;
}

double seminorm(const Symbol& sym, const MultiIndex& alpha, const MultiIndex& beta,
                double gamma, const DifferenceCalculus* dc, const GroupGrid* xgrid) {
    sym.cls.validate();
    if (!sym.s) throw std::invalid_argument("seminorm: symbol lacks structure metadata");
    const GradedStructure& s = *sym.s;
    const FrequencyGrid& fg = *sym.fg;
    const SpectralCalculus& spec = *sym.spec;
    const double da = hom_multi_degree(s, alpha);
    const double db = hom_multi_degree(s, beta);
    const double nu = spec.nu();
    const double e_left = (sym.cls.rho * da - sym.cls.m - sym.cls.delta * db + gamma) / nu;
    const double e_right = -gamma / nu;

    Symbol work = sym;
    if (!is_zero_multi(alpha)) {
        if (!dc)
            throw std::invalid_argument("seminorm: difference operator needs a calculus");
        work = difference_op(work, alpha, *dc);
    }
    if (!is_zero_multi(beta)) {
        if (!xgrid) throw std::invalid_argument("seminorm: x-derivative needs a grid");
        work = x_derivative(work, beta, *xgrid);
    }
    if (work.terms.empty()) return 0.0;

    const int R = fg.retained_dim();

    // Exact spectral-family path: a single unit-coefficient power term means the
    // sandwich collapses to (I+R)^{e_left + p + e_right} on the retained block.
    if (work.terms.size() == 1 && work.terms[0].a.is_const() &&
        work.terms[0].power_exp.has_value()) {
        const double total = e_left + *work.terms[0].power_exp + e_right;
        double sup = 0;
        for (std::size_t node = 0; node < fg.nodes(); ++node) {
            const Eigen::VectorXd& mu = spec.eigenvalues(node);
            const int lim = std::min<int>(R, static_cast<int>(mu.size()));
            for (int k = 0; k < lim; ++k)
                sup = std::max(sup, std::abs(std::pow(1.0 + mu(k), total)));
        }
        return sup;
    }

    const bool spec_diag = spec.diagonal();
    bool any_xdep = false;
    for (const auto& t : work.terms)
        if (!t.a.is_const()) any_xdep = true;
    if (any_xdep && !xgrid)
        throw std::invalid_argument("seminorm: x-dependent symbol needs a grid");

    double sup = 0;
    for (std::size_t node = 0; node < fg.nodes(); ++node) {
        const Mat Lw = spec.power(e_left, node);
        const Mat Rw = spec.power(e_right, node);
        // Weighted terms restricted to the retained block.
        std::vector<Mat> wt;
        std::vector<const Coefficient*> coeffs;
        Mat cst;
        bool have_cst = false;
        bool all_diag = spec_diag;
        for (const auto& t : work.terms) {
            Mat W = (Lw * t.M[node] * Rw).topLeftCorner(R, R);
            all_diag = all_diag && t.diag;
            if (t.a.is_const()) {
                if (!have_cst) {
                    cst = W;
                    have_cst = true;
                } else {
                    cst += W;
                }
            } else {
                wt.push_back(std::move(W));
                coeffs.push_back(&t.a);
            }
        }
        if (wt.empty()) {
            sup = std::max(sup, op_norm(cst, all_diag));
            continue;
        }
        if (!have_cst && wt.size() == 1) {
            sup = std::max(sup, coeffs[0]->max_abs(*xgrid) * op_norm(wt[0], all_diag));
            continue;
        }
        for (std::size_t i = 0; i < xgrid->size(); ++i) {
            Mat A = have_cst ? cst : Mat::Zero(R, R).eval();
            for (std::size_t k = 0; k < wt.size(); ++k) A += coeffs[k]->at(*xgrid, i) * wt[k];
            sup = std::max(sup, op_norm(A, all_diag));
        }
    }
    return sup;
}

std::vector<ClassReportRow> class_report(
    const std::function<Symbol(const FrequencyGrid&)>& factory,
    const std::vector<SeminormTriple>& triples, const DifferenceCalculus& base,
    const DifferenceCalculus& refined, const GroupGrid* xgrid) {
    Symbol base_sym = factory(base.freq());
    Symbol ref_sym = factory(refined.freq());
    std::vector<ClassReportRow> rows;
    rows.reserve(triples.size());
    for (const auto& tr : triples) {
        ClassReportRow row;
        row.triple = tr;
        row.base = seminorm(base_sym, tr.alpha, tr.beta, tr.gamma, &base, xgrid);
        row.refined = seminorm(ref_sym, tr.alpha, tr.beta, tr.gamma, &refined, xgrid);
        if (row.base < 1e-6 && row.refined < 1e-6)
            row.ratio = 1.0;
        else
            row.ratio = row.refined / (row.base != 0 ? row.base : 1.0);
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> multiplier_admissibility(const std::function<double(double)>& phi,
                                             double m, int nu, int a_max, double mu_max) {
    const int K = 4001;
    const double dmu = mu_max / (K - 1);
    std::vector<std::vector<double>> d(static_cast<std::size_t>(a_max) + 1);
    d[0].resize(K);
    for (int i = 0; i < K; ++i) d[0][i] = phi(i * dmu);
    for (int a = 1; a <= a_max; ++a) {
        const auto& p = d[a - 1];
        auto& q = d[a];
        q.assign(p.size() - 1, 0.0);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) q[i] = (p[i + 1] - p[i]) / dmu;
    }
    std::vector<double> C(static_cast<std::size_t>(a_max) + 1, 0.0);
    for (int a = 0; a <= a_max; ++a) {
        for (std::size_t i = 0; i < d[a].size(); ++i) {
            const double mu = (i + 0.5 * a) * dmu;   // centered abscissa
            C[a] = std::max(C[a], std::abs(d[a][i]) * std::pow(1.0 + mu, a - m / nu));
        }
    }
    return C;
}

}   // namespace gpdo
