// Tests for the graded-group core: structure constants, BCH group law,
// dilations, homogeneous norm/degree, left-invariant field tables, and the
// sampling grid with its quadrature, monomial, and derivative helpers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "gpdo/grid.hpp"
#include "gpdo/structure.hpp"

using namespace gpdo;

namespace {

double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Vec rnd_vec(std::mt19937_64& rng, int n, double s = 1.5) {
    std::uniform_real_distribution<double> d(-s, s);
    Vec x(n);
    for (double& c : x) c = d(rng);
    return x;
}

}   // namespace

TEST_CASE("Heisenberg structure data") {
    auto s = GradedStructure::heisenberg1();
    CHECK(s.dim() == 3);
    CHECK(s.step() == 2);
    CHECK(s.nu0() == 2);
    CHECK(s.homogeneous_dim() == doctest::Approx(4.0));
    CHECK(s.weights() == std::vector<int>{1, 1, 2});
    CHECK(s.jacobi_residual() <= 1e-15);

    // [e1,e2] = e3 and all other basis brackets vanish.
    Vec e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
    CHECK(max_abs_diff(s.bracket(e1, e2), e3) <= 1e-15);
    CHECK(max_abs_diff(s.bracket(e2, e1), Vec{0, 0, -1}) <= 1e-15);
    CHECK(max_abs_diff(s.bracket(e1, e3), Vec{0, 0, 0}) <= 1e-15);
    CHECK(max_abs_diff(s.bracket(e3, e2), Vec{0, 0, 0}) <= 1e-15);
}

TEST_CASE("Heisenberg group law: pinned product, inverse, associativity") {
    auto s = GradedStructure::heisenberg1();

    // (1,2,3)*(4,5,6) = (5, 7, 9 + (1*5 - 2*4)/2) = (5, 7, 7.5)
    Vec p = s.multiply(Vec{1, 2, 3}, Vec{4, 5, 6});
    CHECK(max_abs_diff(p, Vec{5, 7, 7.5}) <= 1e-14);

    // Identity and inverse.
    Vec a{0.3, -1.2, 0.7};
    CHECK(max_abs_diff(s.multiply(a, Vec{0, 0, 0}), a) <= 1e-15);
    CHECK(max_abs_diff(s.multiply(s.inverse(a), a), Vec{0, 0, 0}) <= 1e-15);
    CHECK(max_abs_diff(s.inverse(a), Vec{-0.3, 1.2, -0.7}) <= 1e-15);

    std::mt19937_64 rng(7);
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        Vec x = rnd_vec(rng, 3), y = rnd_vec(rng, 3), z = rnd_vec(rng, 3);
        worst = std::max(worst, max_abs_diff(s.multiply(s.multiply(x, y), z),
                                             s.multiply(x, s.multiply(y, z))));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("Dilations and homogeneous norm") {
    auto s = GradedStructure::heisenberg1();
    Vec a{0.5, -0.25, 2.0};
    Vec d = s.dilate(3.0, a);
    CHECK(max_abs_diff(d, Vec{1.5, -0.75, 18.0}) <= 1e-14);

    // |x| = (x^4 + y^4 + t^2)^{1/4}
    CHECK(s.hom_norm(Vec{1, 0, 0}) == doctest::Approx(1.0));
    CHECK(s.hom_norm(Vec{0, 0, 1}) == doctest::Approx(1.0));
    CHECK(s.hom_norm(Vec{1, 1, 1}) == doctest::Approx(std::pow(3.0, 0.25)));

    // Degree-1 homogeneity and dilation-automorphism property.
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        Vec x = rnd_vec(rng, 3), y = rnd_vec(rng, 3);
        double r = 0.1 + 4.0 * std::abs(rnd_vec(rng, 1)[0]);
        CHECK(s.hom_norm(s.dilate(r, x)) == doctest::Approx(r * s.hom_norm(x)).epsilon(1e-12));
        CHECK(max_abs_diff(s.dilate(r, s.multiply(x, y)),
                           s.multiply(s.dilate(r, x), s.dilate(r, y))) <= 1e-12);
    }
}

TEST_CASE("Homogeneous degree and monomials") {
    auto s = GradedStructure::heisenberg1();
    CHECK(s.hom_degree(MultiIndex{1, 0, 0}) == 1);
    CHECK(s.hom_degree(MultiIndex{0, 0, 1}) == 2);
    CHECK(s.hom_degree(MultiIndex{1, 1, 0}) == 2);
    CHECK(s.hom_degree(MultiIndex{0, 0, 2}) == 4);
    CHECK(s.monomial(MultiIndex{2, 1, 0}, Vec{3, 4, 5}) == doctest::Approx(36.0));
    CHECK(s.monomial(MultiIndex{0, 0, 0}, Vec{3, 4, 5}) == doctest::Approx(1.0));
}

TEST_CASE("Left-invariant field coefficient tables") {
    auto s = GradedStructure::heisenberg1();
    const auto& f = s.field_coeffs();
    REQUIRE(f.size() == 3);
    Vec x{1.0, 2.0, 3.0};
    // X1 = d_1 - (x2/2) d_3
    CHECK(eval_poly(f[0][0], x) == doctest::Approx(1.0));
    CHECK(eval_poly(f[0][1], x) == doctest::Approx(0.0));
    CHECK(eval_poly(f[0][2], x) == doctest::Approx(-1.0));
    // X2 = d_2 + (x1/2) d_3
    CHECK(eval_poly(f[1][0], x) == doctest::Approx(0.0));
    CHECK(eval_poly(f[1][1], x) == doctest::Approx(1.0));
    CHECK(eval_poly(f[1][2], x) == doctest::Approx(0.5));
    // X3 = d_3
    CHECK(eval_poly(f[2][2], x) == doctest::Approx(1.0));
    CHECK(eval_poly(f[2][0], x) == doctest::Approx(0.0));
}

TEST_CASE("Abelian structure is the additive group") {
    auto s = GradedStructure::abelian(2);
    CHECK(s.dim() == 2);
    CHECK(s.step() == 1);
    CHECK(s.homogeneous_dim() == doctest::Approx(2.0));
    Vec a{1.5, -2.0}, b{0.25, 1.0};
    CHECK(max_abs_diff(s.multiply(a, b), Vec{1.75, -1.0}) <= 1e-15);
    CHECK(s.hom_norm(Vec{3, 4}) == doctest::Approx(5.0));
    const auto& f = s.field_coeffs();
    CHECK(eval_poly(f[0][0], a) == doctest::Approx(1.0));
    CHECK(eval_poly(f[0][1], a) == doctest::Approx(0.0));
}

TEST_CASE("JSON construction matches the built-in factory and rejects bad data") {
    nlohmann::json j = {
        {"weights", {1, 1, 2}},
        {"nu0", 2},
        {"brackets", {{{"j", 1}, {"k", 2}, {"l", 3}, {"c", 1.0}}}},
    };
    auto s = GradedStructure::from_json(j);
    auto h = GradedStructure::heisenberg1();
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        Vec x = rnd_vec(rng, 3), y = rnd_vec(rng, 3);
        CHECK(max_abs_diff(s.multiply(x, y), h.multiply(x, y)) <= 1e-15);
    }

    // Grading violation: [e1,e2] = e3 needs weight(e3) = 2, not 3.
    nlohmann::json bad = j;
    bad["weights"] = {1, 1, 3};
    CHECK_THROWS_AS((void)GradedStructure::from_json(bad), std::invalid_argument);

    // Jacobi violation on a 4d attempt.
    nlohmann::json nj = {
        {"weights", {1, 1, 1, 2}},
        {"nu0", 2},
        {"brackets",
         {{{"j", 1}, {"k", 2}, {"l", 4}, {"c", 1.0}},
          {{"j", 1}, {"k", 3}, {"l", 2}, {"c", 1.0}}}},
    };
    CHECK_THROWS_AS((void)GradedStructure::from_json(nj), std::invalid_argument);

    CHECK(GradedStructure::named("heisenberg1").dim() == 3);
    CHECK(GradedStructure::named("abelian:2").dim() == 2);
    CHECK_THROWS_AS((void)GradedStructure::named("nosuch"), std::invalid_argument);
}

TEST_CASE("Grid quadrature, indexing, and boundary detection") {
    auto s = GradedStructure::heisenberg1();
    auto g = GroupGrid::make(s, 2.0, 9);
    CHECK(g.size() == 9u * 9u * 9u);
    CHECK(g.h() == doctest::Approx(0.5));

    // Trapezoid weights integrate 1 to the box volume exactly.
    double vol = 0;
    for (std::size_t i = 0; i < g.size(); ++i) vol += g.weight(i);
    CHECK(vol == doctest::Approx(std::pow(4.0, 3)).epsilon(1e-13));

    // Flat-index accessors agree with the digit-vector path.
    std::vector<int> d;
    for (std::size_t i : {std::size_t(0), std::size_t(200), g.size() - 1}) {
        g.unflatten(i, d);
        CHECK(g.flatten(d) == i);
        CHECK(max_abs_diff(g.point(d), g.point(i)) == 0.0);
        CHECK(g.weight(d) == g.weight(i));
        CHECK(g.on_boundary(d) == g.on_boundary(i));
    }
    CHECK(g.on_boundary(std::size_t(0)));
    g.unflatten(g.size() / 2, d);   // center of an odd grid
    CHECK_FALSE(g.on_boundary(g.size() / 2));
    CHECK(max_abs_diff(g.point(g.size() / 2), Vec{0, 0, 0}) <= 1e-15);

    CHECK_THROWS_AS((void)GroupGrid::make(s, 2.0, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)GroupGrid::make(s, -1.0, 9), std::invalid_argument);
}

TEST_CASE("Gaussian norm against the closed form") {
    auto s = GradedStructure::heisenberg1();
    auto g = GroupGrid::make(s, 7.0, 57);
    auto f = make_gaussian(g);   // exp(-|x|_E^2 / 2)
    // ||f||_2^2 = integral exp(-|x|^2) = pi^{3/2}
    CHECK(f.norm2() == doctest::Approx(std::pow(M_PI, 0.75)).epsilon(1e-8));
    CHECK_FALSE(f.boundary_flagged());
}

TEST_CASE("Monomial multiply and inner product") {
    auto s = GradedStructure::heisenberg1();
    auto g = GroupGrid::make(s, 3.0, 17);
    auto f = SampledFunction::from_fn(g, [](const Vec& x) { return cd(x[0] + 2, 0); });
    auto xf = monomial_multiply(s, MultiIndex{1, 0, 1}, f);
    std::vector<int> d;
    for (std::size_t i : {std::size_t(5), std::size_t(777)}) {
        Vec x = g.point(i);
        CHECK(std::abs(xf.v[i] - cd(x[0] * x[2] * (x[0] + 2), 0)) <= 1e-14);
    }
    auto one = SampledFunction::from_fn(g, [](const Vec&) { return cd(1, 0); });
    // <f, 1> = integral (x1 + 2) = 2 * (2L)^3
    CHECK(std::abs(inner(f, one) - cd(2 * 216.0, 0)) <= 1e-10);
}

TEST_CASE("Left-invariant derivatives via finite differences") {
    auto s = GradedStructure::heisenberg1();
    auto g = GroupGrid::make(s, 2.0, 21);

    // Exact on low-degree polynomials (the FD stencils reproduce them).
    auto t_fun = SampledFunction::from_fn(g, [](const Vec& x) { return cd(x[2], 0); });
    auto X1t = apply_X_beta(s, MultiIndex{1, 0, 0}, t_fun);
    auto X2t = apply_X_beta(s, MultiIndex{0, 1, 0}, t_fun);
    double e1 = 0, e2 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vec x = g.point(i);
        e1 = std::max(e1, std::abs(X1t.v[i] - cd(-x[1] / 2, 0)));
        e2 = std::max(e2, std::abs(X2t.v[i] - cd(x[0] / 2, 0)));
    }
    CHECK(e1 <= 1e-10);
    CHECK(e2 <= 1e-10);

    // Commutator on the vertical coordinate: [X1, X2] t = 1.
    auto X12 = apply_X_beta(s, MultiIndex{1, 0, 0}, X2t);
    auto X21 = apply_X_beta(s, MultiIndex{0, 1, 0}, X1t);
    double ec = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        ec = std::max(ec, std::abs(X12.v[i] - X21.v[i] - cd(1, 0)));
    CHECK(ec <= 1e-10);

    // Smooth decaying function: X1 f converges to the analytic derivative at
    // the order of the interior stencil when the grid is refined.
    auto fd_error = [&](int P) {
        auto gg = GroupGrid::make(s, 2.0, P);
        auto f = make_gaussian(gg, 1.0);
        auto X1f = apply_X_beta(s, MultiIndex{1, 0, 0}, f);
        double eg = 0;
        std::vector<int> d;
        for (std::size_t i = 0; i < gg.size(); ++i) {
            gg.unflatten(i, d);
            bool margin = false;   // keep two cells clear of the one-sided stencils
            for (int a = 0; a < gg.n; ++a)
                if (d[a] < 2 || d[a] > P - 3) margin = true;
            if (margin) continue;
            Vec x = gg.point(i);
            double fx = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2);
            double want = (-x[0] - (x[1] / 2) * (-x[2])) * fx;
            eg = std::max(eg, std::abs(X1f.v[i] - cd(want, 0)));
        }
        return eg;
    };
    double c21 = fd_error(21), c41 = fd_error(41);
    CHECK(c21 <= 5e-3);
    CHECK(c41 <= c21 / 8);   // order >= 3 under h -> h/2
}

TEST_CASE("Coefficient registry") {
    auto s = GradedStructure::heisenberg1();
    auto g = GroupGrid::make(s, 2.0, 9);
    auto c = make_coefficient(g, "1+tanh(x1)");
    Vec x = g.point(std::size_t(40));
    CHECK(std::abs(c.v[40] - cd(1 + std::tanh(x[0]), 0)) <= 1e-15);
    auto fn = coefficient_fn("gaussian");
    CHECK(std::abs(fn(Vec{0, 0, 0}) - cd(1, 0)) <= 1e-15);
    CHECK_THROWS_AS((void)coefficient_fn("nosuch"), std::invalid_argument);
}
