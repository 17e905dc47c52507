// Tests for operator-valued symbols: spectral calculus, multiplier factories,
// difference operators (closed-form commutation identities, the independent
// windowed-kernel cross-check, and exact lattice sums on the abelian backend),
// x-derivatives, and the class seminorms with their algebraic identities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpdo/symbol.hpp"

using namespace gpdo;

namespace {

// Small Heisenberg setup: cheap but structurally faithful.
struct HSmall {
    GradedStructure s = GradedStructure::heisenberg1();
    FrequencyGrid fg = FrequencyGrid::heisenberg(0.05, 6.0, 6, 3, 24);
    std::shared_ptr<const SpectralCalculus> spec =
        SpectralCalculus::make(s, fg, RocklandKind::sublaplacian);
};

struct ASetup {
    GradedStructure s = GradedStructure::abelian(2);
    GroupGrid g;
    FrequencyGrid fg;
    FourierEngine eng;
    std::shared_ptr<const SpectralCalculus> spec;
    DifferenceCalculus dc;
    explicit ASetup(double L = 6.0, int P = 24)
        : g(GroupGrid::make(s, L, P)),
          fg(FrequencyGrid::abelian_for(g)),
          eng(s, g, fg),
          spec(SpectralCalculus::make(s, fg, RocklandKind::sublaplacian)),
          dc(s, fg, &eng) {}
};

}   // namespace

TEST_CASE("Spectral calculus: sublaplacian eigenvalues and powers") {
    HSmall h;
    CHECK(h.spec->diagonal());
    CHECK(h.spec->nu() == 2);
    const std::size_t node = 7;
    const double l = std::abs(h.fg.lam[node]);
    const auto& mu = h.spec->eigenvalues(node);
    for (int k = 0; k <= h.fg.N; ++k)
        CHECK(mu(k) == doctest::Approx(l * (2 * k + 1)).epsilon(1e-12));

    Mat P = h.spec->power(-0.5, node);
    for (int k = 0; k <= h.fg.N; ++k)
        CHECK(std::abs(P(k, k) - cd(std::pow(1 + mu(k), -0.5), 0)) <= 1e-14);
    Eigen::VectorXd d = h.spec->power_diag(-0.5, node);
    CHECK(d(3) == doctest::Approx(std::real(P(3, 3))));

    Mat H = h.spec->apply([](double m) { return std::exp(-m); }, node);
    CHECK(std::abs(H(2, 2) - cd(std::exp(-mu(2)), 0)) <= 1e-14);
}

TEST_CASE("Class parameter validation") {
    SymbolClassParams ok{1.0, 0.8, 0.2};
    ok.validate();
    CHECK_THROWS_AS((SymbolClassParams{0, 0.5, 0.7}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SymbolClassParams{0, 1.2, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SymbolClassParams{0, 1.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((void)from_multiplier(HSmall().spec, "nosuch", 0, SymbolClassParams{}),
                    std::invalid_argument);
}

TEST_CASE("Seminorm of an exact spectral power is exactly one") {
    HSmall h;
    for (double p : {0.0, 0.5, -1.0, 2.0}) {
        SymbolClassParams cls;
        cls.m = p * h.spec->nu();
        auto sym = from_multiplier(h.spec, "power", p, cls);
        for (double gamma : {0.0, 1.0, 2.5}) {
            // Fast path: the sandwich exponents cancel algebraically.
            CHECK(seminorm(sym, MultiIndex{0, 0, 0}, MultiIndex{0, 0, 0}, gamma, nullptr,
                           nullptr) == 1.0);
        }
    }
}

TEST_CASE("Seminorm homogeneity and triangle inequality") {
    HSmall h;
    SymbolClassParams cls;   // m = 0
    auto heat = from_multiplier(h.spec, "heat", 0, cls);
    auto bump = from_multiplier(h.spec, "bump", 0, cls);
    const MultiIndex z{0, 0, 0};

    const double sh = seminorm(heat, z, z, 0, nullptr, nullptr);
    const double sb = seminorm(bump, z, z, 0, nullptr, nullptr);
    CHECK(sh > 0);
    CHECK(sb > 0);

    auto scaled = heat.scaled(cd(0, -3.5));
    CHECK(seminorm(scaled, z, z, 0, nullptr, nullptr) ==
          doctest::Approx(3.5 * sh).epsilon(1e-12));

    auto sum = heat.plus(bump);
    CHECK(seminorm(sum, z, z, 0, nullptr, nullptr) <= sh + sb + 1e-12);

    // Heat multiplier peaks at mu = 0 (value 1) and the class weight with
    // m = 0, gamma = 0 is the identity, so the seminorm is sup e^{-mu} < 1.
    CHECK(sh <= 1.0);
    CHECK(sh == doctest::Approx(std::exp(-h.spec->eigenvalues(0).minCoeff())).epsilon(1e-12));
}

TEST_CASE("Seminorms shrink when the class grows") {
    // A fixed symbol measured in a larger class (bigger m, smaller rho,
    // bigger delta) has pointwise smaller sandwich weights.
    ASetup a;
    SymbolClassParams base{0.0, 1.0, 0.0};
    auto sym = from_multiplier(a.spec, "heat", 0, base);
    const MultiIndex z{0, 0}, e1{1, 0};

    auto with_cls = [&](double m, double rho, double delta) {
        Symbol s2 = sym;
        s2.cls = SymbolClassParams{m, rho, delta};
        return s2;
    };
    // m grows -> weight (1+mu)^{-m/nu} shrinks (alpha = beta = 0).
    CHECK(seminorm(with_cls(2, 1, 0), z, z, 0, &a.dc, &a.g) <=
          seminorm(with_cls(0, 1, 0), z, z, 0, &a.dc, &a.g) + 1e-12);
    // rho drops -> weight (1+mu)^{rho [alpha]/nu} shrinks (alpha = e1).
    CHECK(seminorm(with_cls(0, 0.5, 0), e1, z, 0, &a.dc, &a.g) <=
          seminorm(with_cls(0, 1.0, 0), e1, z, 0, &a.dc, &a.g) + 1e-12);
    // delta grows -> weight (1+mu)^{-delta [beta]/nu} shrinks (beta = e1).
    auto xsym = with_coefficient(sym, Coefficient::named("1+tanh(x1)"));
    auto with_cls_x = [&](double delta) {
        Symbol s2 = xsym;
        s2.cls = SymbolClassParams{0, 1, delta};
        return s2;
    };
    CHECK(seminorm(with_cls_x(0.5), z, e1, 0, &a.dc, &a.g) <=
          seminorm(with_cls_x(0.0), z, e1, 0, &a.dc, &a.g) + 1e-12);
}

TEST_CASE("Difference operator: lattice pair route vs direct double sums") {
    // On the abelian backend the difference operator is computed as
    // forward(x^alpha * synthesize(M)) through the separable engine; an
    // independent O(G^2) implementation by naive double sums must match it
    // to near round-off.
    ASetup a(5.0, 12);
    SymbolClassParams cls{-2.0, 1.0, 0.0};
    auto sym = from_multiplier(a.spec, "power", -1.0, cls);
    const MultiIndex alpha{1, 0};

    auto got = difference_op(sym, alpha, a.dc);

    const std::size_t G = a.g.size();
    // Direct synthesis of the kernel.
    std::vector<cd> kappa(G, cd(0, 0));
    for (std::size_t i = 0; i < G; ++i) {
        Vec x = a.g.point(i);
        for (std::size_t nd = 0; nd < a.fg.nodes(); ++nd) {
            Vec xi = a.fg.xi_point(nd);
            kappa[i] += a.fg.w[nd] * std::exp(cd(0, xi[0] * x[0] + xi[1] * x[1])) *
                        sym.terms[0].M[nd](0, 0);
        }
    }
    // Multiply by x^alpha and transform forward with uniform lattice weight.
    const double h2 = a.g.h() * a.g.h();
    double werr = 0;
    for (std::size_t nd = 0; nd < a.fg.nodes(); ++nd) {
        Vec xi = a.fg.xi_point(nd);
        cd acc(0, 0);
        for (std::size_t i = 0; i < G; ++i) {
            Vec x = a.g.point(i);
            acc += h2 * x[0] * kappa[i] * std::exp(cd(0, -(xi[0] * x[0] + xi[1] * x[1])));
        }
        werr = std::max(werr, std::abs(acc - got.terms[0].M[nd](0, 0)));
    }
    CHECK(werr <= 1e-8);
}

TEST_CASE("Difference operator matches the analytic frequency derivative") {
    // For the heat multiplier e^{-|xi|^2} the convolution kernel is a Gaussian,
    // so the lattice difference operator approaches i d/dxi_1 closely.
    ASetup a(8.0, 40);
    SymbolClassParams cls{0.0, 1.0, 0.0};
    auto sym = from_multiplier(a.spec, "heat", 0, cls);
    auto d1 = difference_op(sym, MultiIndex{1, 0}, a.dc);
    double err = 0;
    for (std::size_t nd = 0; nd < a.fg.nodes(); ++nd) {
        Vec xi = a.fg.xi_point(nd);
        const double q = xi[0] * xi[0] + xi[1] * xi[1];
        // i d/dxi_1 e^{-q} = -2 i xi_1 e^{-q}
        cd want = cd(0, -2 * xi[0]) * std::exp(-q);
        err = std::max(err, std::abs(d1.terms[0].M[nd](0, 0) - want));
    }
    CHECK(err <= 1e-6);

    // alpha = 0 leaves the symbol untouched.
    auto d0 = difference_op(sym, MultiIndex{0, 0}, a.dc);
    double same = 0;
    for (std::size_t nd = 0; nd < a.fg.nodes(); ++nd)
        same = std::max(same,
                        std::abs(d0.terms[0].M[nd](0, 0) - sym.terms[0].M[nd](0, 0)));
    CHECK(same == 0.0);
}

TEST_CASE("x-derivatives of coefficient symbols") {
    HSmall h;
    auto g = GroupGrid::make(h.s, 3.0, 33);
    SymbolClassParams cls;
    auto base = from_multiplier(h.spec, "heat", 0, cls);

    // Constant coefficient: X^beta kills the symbol.
    auto dz = x_derivative(base, MultiIndex{1, 0, 0}, g);
    CHECK(dz.terms.empty());
    CHECK(seminorm(dz, MultiIndex{0, 0, 0}, MultiIndex{0, 0, 0}, 0, nullptr, &g) == 0.0);

    // a(x) = x1: X1 a = 1 exactly (linear polynomial, exact stencils).
    auto xsym = with_coefficient(base, Coefficient::named("x1"));
    auto dx = x_derivative(xsym, MultiIndex{1, 0, 0}, g);
    REQUIRE(dx.terms.size() == 1);
    double dev = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        dev = std::max(dev, std::abs(dx.terms[0].a.at(g, i) - cd(1, 0)));
    CHECK(dev <= 1e-10);

    // a(x) = 1 + tanh(x1): X1 a = sech^2(x1) up to the finite-difference
    // error of the stencil (measured 8.7e-4 at this spacing).
    auto tsym = with_coefficient(base, Coefficient::named("1+tanh(x1)"));
    auto dt = x_derivative(tsym, MultiIndex{1, 0, 0}, g);
    double terr = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x1 = g.point(i)[0];
        const double want = 1.0 / (std::cosh(x1) * std::cosh(x1));
        terr = std::max(terr, std::abs(dt.terms[0].a.at(g, i) - cd(want, 0)));
    }
    CHECK(terr <= 2e-3);
}

TEST_CASE("Symbol evaluation, adjoint and broadcast bookkeeping") {
    HSmall h;
    SymbolClassParams cls;
    auto heat = from_multiplier(h.spec, "heat", 0, cls);
    CHECK(heat.broadcast());

    auto g = GroupGrid::make(h.s, 3.0, 9);
    auto xsym = with_coefficient(heat, Coefficient::named("x1"));
    CHECK_FALSE(xsym.broadcast());
    const std::size_t xi = 40, node = 5;
    Mat direct = xsym.eval(&g, xi, node);
    Mat want = cd(g.point(xi)[0], 0) * heat.eval(nullptr, 0, node);
    CHECK((direct - want).cwiseAbs().maxCoeff() <= 1e-14);

    // Adjoint of i * heat is -i * heat.
    auto ih = heat.scaled(cd(0, 1));
    auto back = ih.adjoint().scaled(cd(0, 1));
    Mat d2 = back.eval(nullptr, 0, node) - heat.eval(nullptr, 0, node);
    CHECK(d2.cwiseAbs().maxCoeff() <= 1e-14);

    CHECK(heat.trace_diagnostic() > 0);
}

TEST_CASE("Identity and invariant-operator symbols") {
    HSmall h;
    auto id = symbol_identity(h.spec);
    CHECK(id.terms.size() == 1);
    CHECK(id.terms[0].power_exp.has_value());
    CHECK(*id.terms[0].power_exp == 0.0);

    auto piT = from_invariant_operator(h.spec, MultiIndex{0, 0, 1});
    CHECK(piT.cls.m == doctest::Approx(2.0));
    const std::size_t node = 11;
    Mat T = piT.eval(nullptr, 0, node);
    CHECK((T - cd(0, h.fg.lam[node]) * Mat::Identity(T.rows(), T.cols()))
              .cwiseAbs()
              .maxCoeff() <= 1e-13);

    auto piX = from_invariant_operator(h.spec, MultiIndex{1, 0, 0});
    CHECK(piX.cls.m == doctest::Approx(1.0));
    Mat X = piX.eval(nullptr, 0, node);
    CHECK(std::abs(X(0, 1) - cd(std::sqrt(std::abs(h.fg.lam[node]) / 2), 0)) <= 1e-12);
}

TEST_CASE("Closed-form difference quotients of generator symbols") {
    // The difference operators act in closed form through the commutation
    // relations of the Schroedinger representation. On generator symbols the
    // results are known exactly:
    //   Delta^{e_j} pi(X_i) = -delta_{ij} I   (pairing of generators),
    //   Delta^{e3} pi(T)^2  = -2 i lambda I   (chain rule on the center),
    //   Delta^{e3} (pi(X) pi(Y)) = -I/2       (ordering-sensitive: the
    //       central part of the group product couples the two horizontal
    //       directions; the symmetrized product would give 0).
    // The ladder-truncation defect contaminates only trailing rows, so the
    // identities hold to round-off on the retained block.
    GradedStructure s = GradedStructure::heisenberg1();
    auto fg = FrequencyGrid::heisenberg(0.05, 6.0, 12, 6, 48);
    auto spec = SpectralCalculus::make(s, fg, RocklandKind::sublaplacian);
    DifferenceCalculus dc(s, fg);
    const int r = fg.retained_dim();

    auto dev_from = [&](const Symbol& d, const std::function<cd(std::size_t)>& target) {
        double dev = 0;
        for (std::size_t nd = 0; nd < fg.nodes(); ++nd) {
            Mat A = d.terms[0].M[nd].topLeftCorner(r, r) -
                    target(nd) * Mat::Identity(r, r);
            dev = std::max(dev, A.cwiseAbs().maxCoeff());
        }
        return dev;
    };
    auto con = [](cd v) { return [v](std::size_t) { return v; }; };

    const MultiIndex gens[3] = {MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}};
    for (int i = 0; i < 3; ++i) {
        auto piXi = from_invariant_operator(spec, gens[i]);
        for (int j = 0; j < 3; ++j) {
            auto d = difference_op(piXi, gens[j], dc);
            const cd want = (i == j) ? cd(-1, 0) : cd(0, 0);
            if (j < 2 || i == 2) {
                CHECK(dev_from(d, con(want)) <= 1e-12);
            } else {
                // sqrt(|lambda|) matrix entries are interpolated, not exact:
                // the central difference of a horizontal generator vanishes
                // only to the panel-local spectral-differentiation accuracy.
                CHECK(dev_from(d, con(want)) <= 5e-3);
            }
        }
    }

    auto piT2 = from_invariant_operator(spec, MultiIndex{0, 0, 2});
    auto dT2 = difference_op(piT2, MultiIndex{0, 0, 1}, dc);
    CHECK(dev_from(dT2, [&](std::size_t nd) { return cd(0, -2 * fg.lam[nd]); }) <= 1e-12);

    auto piXY = from_invariant_operator(spec, MultiIndex{1, 1, 0});
    auto dXY = difference_op(piXY, MultiIndex{0, 0, 1}, dc);
    CHECK(dev_from(dXY, con(cd(-0.5, 0))) <= 1e-11);
}

TEST_CASE("Windowed kernel pipeline cross-checks the closed-form differences") {
    // Fully independent route: synthesize the band-windowed kernel on a group
    // lattice, multiply by monomials, transform back. It computes the
    // difference of the windowed symbol, so the central-direction target for
    // pi(T) is -(W + dW/dln|lambda|) I instead of -I. The transverse kernel
    // truncation limits accuracy at high ladder index (error grows with the
    // row), so the comparison lives on a fixed leading block.
    GradedStructure s = GradedStructure::heisenberg1();
    auto fg = FrequencyGrid::heisenberg(0.05, 6.0, 6, 6, 48);
    auto spec = SpectralCalculus::make(s, fg, RocklandKind::sublaplacian);
    auto kgrid = GroupGrid::make(s, 3.0, 41);
    KernelPipeline kp(s, kgrid, fg);

    auto piT = from_invariant_operator(spec, MultiIndex{0, 0, 1});
    const int rm = 12;

    auto d3 = difference_op_kernel(piT, MultiIndex{0, 0, 1}, kp);
    double dev3 = 0;
    for (std::size_t nd = 0; nd < fg.nodes(); ++nd) {
        const double l = std::abs(fg.lam[nd]);
        const double eps = 1e-5;
        const double Wp = band_edge_window(l * std::exp(eps), fg.lambda_max);
        const double Wm = band_edge_window(l * std::exp(-eps), fg.lambda_max);
        const double tgt = -(band_edge_window(l, fg.lambda_max) + (Wp - Wm) / (2 * eps));
        Mat A = d3.terms[0].M[nd].topLeftCorner(rm, rm) - tgt * Mat::Identity(rm, rm);
        dev3 = std::max(dev3, A.cwiseAbs().maxCoeff());
    }
    CHECK(dev3 <= 0.15);   // measured 0.088 at this resolution

    for (MultiIndex alpha : {MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}}) {
        auto d = difference_op_kernel(piT, alpha, kp);
        double dev = 0;
        for (std::size_t nd = 0; nd < fg.nodes(); ++nd)
            dev = std::max(dev,
                           d.terms[0].M[nd].topLeftCorner(rm, rm).cwiseAbs().maxCoeff());
        CHECK(dev <= 0.03);   // measured 0.013
    }
}

TEST_CASE("Class report between frequency resolutions") {
    GradedStructure s = GradedStructure::heisenberg1();
    auto fg0 = FrequencyGrid::heisenberg(0.05, 6.0, 8, 4, 32);
    auto fg1 = FrequencyGrid::heisenberg(0.05, 6.0, 12, 6, 48);
    DifferenceCalculus d0(s, fg0), d1(s, fg1);

    // Central generator: every row is known in closed form. The zero-order
    // row sups |lambda|/(1+|lambda|(2k+1)) at k = 0 near the band edge; the
    // central-difference row is exactly 1; horizontal rows vanish.
    auto factoryT = [&](const FrequencyGrid& f) {
        auto sp = SpectralCalculus::make(s, f, RocklandKind::sublaplacian);
        return from_invariant_operator(sp, MultiIndex{0, 0, 1});
    };
    std::vector<SeminormTriple> triplesT = {
        {MultiIndex{0, 0, 0}, MultiIndex{0, 0, 0}, 0.0},
        {MultiIndex{1, 0, 0}, MultiIndex{0, 0, 0}, 0.0},
        {MultiIndex{0, 1, 0}, MultiIndex{0, 0, 0}, 0.0},
        {MultiIndex{0, 0, 1}, MultiIndex{0, 0, 0}, 0.0},
    };
    auto rowsT = class_report(factoryT, triplesT, d0, d1);
    REQUIRE(rowsT.size() == 4);
    for (const auto& row : rowsT) {
        CHECK(std::isfinite(row.base));
        CHECK(std::isfinite(row.refined));
        CHECK(row.base <= 1.1);
        CHECK(row.refined <= 1.1);
    }
    CHECK(rowsT[0].base >= 0.80);   // sup |l|/(1+|l|) -> 6/7 at the band edge
    CHECK(rowsT[0].ratio >= 0.99);
    CHECK(rowsT[0].ratio <= 1.02);
    CHECK(rowsT[1].base <= 1e-12);   // horizontal rows vanish identically
    CHECK(rowsT[2].refined <= 1e-12);
    CHECK(rowsT[3].base == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rowsT[3].refined == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rowsT[3].ratio == doctest::Approx(1.0).epsilon(1e-9));

    // Heat multiplier: rows built from horizontal differences only (they are
    // plain ladder commutators, stable at any decay rate of the multiplier).
    auto factoryH = [&](const FrequencyGrid& f) {
        auto sp = SpectralCalculus::make(s, f, RocklandKind::sublaplacian);
        return from_multiplier(sp, "heat", 0, SymbolClassParams{0.0, 1.0, 0.0});
    };
    std::vector<SeminormTriple> triplesH = {
        {MultiIndex{0, 0, 0}, MultiIndex{0, 0, 0}, 0.0},
        {MultiIndex{1, 0, 0}, MultiIndex{0, 0, 0}, 0.0},
        {MultiIndex{1, 0, 0}, MultiIndex{0, 0, 0}, 2.0},
        {MultiIndex{1, 1, 0}, MultiIndex{0, 0, 0}, 0.0},
    };
    auto rowsH = class_report(factoryH, triplesH, d0, d1);
    REQUIRE(rowsH.size() == 4);
    for (const auto& row : rowsH) {
        CHECK(std::isfinite(row.base));
        CHECK(row.base > 0);
        CHECK(row.ratio >= 0.98);   // measured drift 0.2-0.9% between grids
        CHECK(row.ratio <= 1.02);
    }
}

TEST_CASE("Multiplier derivative-growth admissibility") {
    // Heat multiplier: admissible at any order (super-polynomial decay).
    auto heat = [](double mu) { return std::exp(-mu); };
    auto Ch = multiplier_admissibility(heat, -4.0, 2, 3, 40.0);
    REQUIRE(Ch.size() == 4);
    for (double c : Ch) {
        CHECK(std::isfinite(c));
        CHECK(c >= 0);
    }

    // Growing multiplier misdeclared as order 0: the zeroth constant already
    // diverges with the scan window.
    auto grow = [](double mu) { return 1.0 + mu; };
    auto Cg_small = multiplier_admissibility(grow, 0.0, 2, 0, 100.0);
    auto Cg_large = multiplier_admissibility(grow, 0.0, 2, 0, 10000.0);
    CHECK(Cg_large[0] > 50.0 * Cg_small[0] / 100.0 * 99.0);   // ~ linear growth
    CHECK(Cg_large[0] > 1e3);
}
