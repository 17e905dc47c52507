#include "gpdo/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gpdo {

GroupGrid GroupGrid::make(const GradedStructure& s, double L, int P) {
    if (P < 5) throw std::invalid_argument("grid needs at least 5 points per axis");
    if (L <= 0) throw std::invalid_argument("grid half-width must be positive");
    GroupGrid g;
    g.n = s.dim();
    g.L = L;
    g.P = P;
    g.axis.resize(P);
    g.axis_w.resize(P);
    const double h = 2.0 * L / (P - 1);
    for (int i = 0; i < P; ++i) {
        g.axis[i] = -L + h * i;
        g.axis_w[i] = (i == 0 || i == P - 1) ? 0.5 * h : h;
    }
    return g;
}

std::size_t GroupGrid::size() const {
    std::size_t t = 1;
    for (int i = 0; i < n; ++i) t *= static_cast<std::size_t>(P);
    return t;
}

void GroupGrid::unflatten(std::size_t idx, std::vector<int>& d) const {
    d.resize(n);
    for (int a = n - 1; a >= 0; --a) {
        d[a] = static_cast<int>(idx % P);
        idx /= P;
    }
}

std::size_t GroupGrid::flatten(const std::vector<int>& d) const {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a) idx = idx * P + d[a];
    return idx;
}

Vec GroupGrid::point(const std::vector<int>& d) const {
    Vec x(n);
    for (int a = 0; a < n; ++a) x[a] = axis[d[a]];
    return x;
}

double GroupGrid::weight(const std::vector<int>& d) const {
    double w = 1.0;
    for (int a = 0; a < n; ++a) w *= axis_w[d[a]];
    return w;
}

bool GroupGrid::on_boundary(const std::vector<int>& d) const {
    for (int a = 0; a < n; ++a)
        if (d[a] == 0 || d[a] == P - 1) return true;
    return false;
}

Vec GroupGrid::point(std::size_t flat) const {
    Vec x(n);
    for (int a = n - 1; a >= 0; --a) {
        x[a] = axis[flat % P];
        flat /= P;
    }
    return x;
}

double GroupGrid::weight(std::size_t flat) const {
    double w = 1.0;
    for (int a = n - 1; a >= 0; --a) {
        w *= axis_w[flat % P];
        flat /= P;
    }
    return w;
}

bool GroupGrid::on_boundary(std::size_t flat) const {
    for (int a = n - 1; a >= 0; --a) {
        const int d = static_cast<int>(flat % P);
        if (d == 0 || d == P - 1) return true;
        flat /= P;
    }
    return false;
}

bool GroupGrid::same_layout(const GroupGrid& o) const {
    return n == o.n && P == o.P && L == o.L;
}

SampledFunction SampledFunction::zeros(const GroupGrid& g) {
    SampledFunction f;
    f.grid = g;
    f.v.assign(g.size(), cd(0, 0));
    return f;
}

SampledFunction SampledFunction::from_fn(const GroupGrid& g,
                                         const std::function<cd(const Vec&)>& fn) {
    SampledFunction f = zeros(g);
    std::vector<int> d;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        g.unflatten(i, d);
        f.v[i] = fn(g.point(d));
    }
    return f;
}

double SampledFunction::norm2() const {
    double s = 0.0;
    std::vector<int> d;
    for (std::size_t i = 0; i < v.size(); ++i) {
        grid.unflatten(i, d);
        s += grid.weight(d) * std::norm(v[i]);
    }
    return std::sqrt(s);
}

double SampledFunction::max_abs() const {
    double m = 0.0;
    for (const cd& z : v) m = std::max(m, std::abs(z));
    return m;
}

double SampledFunction::boundary_max() const {
    double m = 0.0;
    std::vector<int> d;
    for (std::size_t i = 0; i < v.size(); ++i) {
        grid.unflatten(i, d);
        if (grid.on_boundary(d)) m = std::max(m, std::abs(v[i]));
    }
    return m;
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
}
SampledFunction& SampledFunction::operator-=(const SampledFunction& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}
SampledFunction& SampledFunction::operator*=(cd c) {
    for (cd& z : v) z *= c;
    return *this;
}

cd inner(const SampledFunction& a, const SampledFunction& b) {
    cd s(0, 0);
    std::vector<int> d;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        a.grid.unflatten(i, d);
        s += a.grid.weight(d) * a.v[i] * std::conj(b.v[i]);
    }
    return s;
}

double rel_l2_error(const SampledFunction& got, const SampledFunction& want) {
    SampledFunction diff = got;
    diff -= want;
    double denom = want.norm2();
    return denom > 0 ? diff.norm2() / denom : diff.norm2();
}

SampledFunction monomial_multiply(const GradedStructure& s, const MultiIndex& alpha,
                                  const SampledFunction& f) {
    SampledFunction out = f;
    std::vector<int> d;
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        out.grid.unflatten(i, d);
        out.v[i] *= s.monomial(alpha, out.grid.point(d));
    }
    return out;
}

namespace {

// d/dx_axis with an order-4 central stencil, order-2 one-sided at the edges.
SampledFunction partial(const SampledFunction& f, int axis) {
    const GroupGrid& g = f.grid;
    SampledFunction out = SampledFunction::zeros(g);
    const double h = g.h();
    std::size_t stride = 1;
    for (int a = g.n - 1; a > axis; --a) stride *= g.P;
    std::vector<int> d;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        g.unflatten(i, d);
        const int k = d[axis];
        const cd* p = f.v.data() + i;
        if (k >= 2 && k <= g.P - 3) {
            out.v[i] = (-p[2 * stride] + 8.0 * p[stride] - 8.0 * p[-static_cast<long>(stride)] +
                        p[-2 * static_cast<long>(stride)]) /
                       (12.0 * h);
        } else if (k < 2) {
            out.v[i] = (-3.0 * p[0] + 4.0 * p[stride] - p[2 * stride]) / (2.0 * h);
        } else {
            out.v[i] = (3.0 * p[0] - 4.0 * p[-static_cast<long>(stride)] +
                        p[-2 * static_cast<long>(stride)]) /
                       (2.0 * h);
        }
    }
    return out;
}

SampledFunction apply_X_single(const GradedStructure& s, int j, const SampledFunction& f) {
    const auto& coeffs = s.field_coeffs()[j];
    SampledFunction out = SampledFunction::zeros(f.grid);
    std::vector<int> d;
    for (int k = 0; k < s.dim(); ++k) {
        if (coeffs[k].empty()) continue;
        SampledFunction dk = partial(f, k);
        for (std::size_t i = 0; i < out.v.size(); ++i) {
            out.grid.unflatten(i, d);
            out.v[i] += eval_poly(coeffs[k], out.grid.point(d)) * dk.v[i];
        }
    }
    return out;
}

}   // namespace

SampledFunction apply_X_beta(const GradedStructure& s, const MultiIndex& beta,
                             const SampledFunction& f) {
    SampledFunction out = f;
    for (int j = s.dim() - 1; j >= 0; --j) {
        int reps = j < static_cast<int>(beta.size()) ? beta[j] : 0;
        for (int r = 0; r < reps; ++r) out = apply_X_single(s, j, out);
    }
    return out;
}

SampledFunction make_gaussian(const GroupGrid& g, const Vec& center, const Vec& width,
                              const Vec& modulation) {
    return SampledFunction::from_fn(g, [&](const Vec& x) {
        double q = 0.0, phase = 0.0;
        for (int a = 0; a < g.n; ++a) {
            double z = (x[a] - center[a]) / width[a];
            q += z * z;
            phase += modulation[a] * x[a];
        }
        return std::exp(cd(-0.5 * q, phase));
    });
}

SampledFunction make_gaussian(const GroupGrid& g, double width) {
    Vec c(g.n, 0.0), w(g.n, width), m(g.n, 0.0);
    return make_gaussian(g, c, w, m);
}

SampledFunction make_inverse_quadratic(const GroupGrid& g) {
    return SampledFunction::from_fn(g, [&](const Vec& x) {
        double q = 0.0;
        for (double xi : x) q += xi * xi;
        return cd(1.0 / (1.0 + q), 0.0);
    });
}

std::function<cd(const Vec&)> coefficient_fn(const std::string& name) {
    if (name == "one") return [](const Vec&) { return cd(1, 0); };
    if (name == "1+tanh(x1)")
        return [](const Vec& x) { return cd(1.0 + std::tanh(x[0]), 0.0); };
    if (name == "x1") return [](const Vec& x) { return cd(x[0], 0.0); };
    if (name == "gaussian")
        return [](const Vec& x) {
            double q = 0.0;
            for (double xi : x) q += xi * xi;
            return cd(std::exp(-0.5 * q), 0.0);
        };
    throw std::invalid_argument("unknown coefficient name: " + name);
}

SampledFunction make_coefficient(const GroupGrid& g, const std::string& name) {
    return SampledFunction::from_fn(g, coefficient_fn(name));
}

}   // namespace gpdo
