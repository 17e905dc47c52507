#include "gpdo/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

namespace gpdo {

double eval_poly(const Poly& p, const Vec& x) {
    double s = 0.0;
    for (const Monomial& m : p) {
        double t = m.coeff;
        for (std::size_t i = 0; i < m.exp.size(); ++i)
            for (int r = 0; r < m.exp[i]; ++r) t *= x[i];
        s += t;
    }
    return s;
}

static void add_monomial(Poly& p, std::vector<int> exp, double coeff) {
    if (coeff == 0.0) return;
    for (Monomial& m : p)
        if (m.exp == exp) {
            m.coeff += coeff;
            return;
        }
    p.push_back({std::move(exp), coeff});
}

GradedStructure GradedStructure::heisenberg1() {
    GradedStructure g;
    g.n_ = 3;
    g.w_ = {1, 1, 2};
    g.nu0_ = 2;
    g.c_.assign(3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
    g.c_[0][1][2] = 1.0;    // [X, Y] = T
    g.c_[1][0][2] = -1.0;
    g.finalize();
    return g;
}

GradedStructure GradedStructure::abelian(int n) {
    if (n < 1) throw std::invalid_argument("abelian dimension must be >= 1");
    GradedStructure g;
    g.n_ = n;
    g.w_.assign(n, 1);
    g.nu0_ = 1;
    g.c_.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    g.finalize();
    return g;
}

GradedStructure GradedStructure::from_json(const nlohmann::json& j) {
    GradedStructure g;
    if (!j.contains("weights") || !j["weights"].is_array())
        throw std::invalid_argument("structure JSON: missing \"weights\" array");
    g.w_ = j["weights"].get<std::vector<int>>();
    g.n_ = static_cast<int>(g.w_.size());
    if (g.n_ < 1) throw std::invalid_argument("structure JSON: empty weights");
    for (int v : g.w_)
        if (v < 1) throw std::invalid_argument("structure JSON: weights must be positive integers");
    if (!std::is_sorted(g.w_.begin(), g.w_.end()))
        throw std::invalid_argument("structure JSON: weights must be nondecreasing");
    g.c_.assign(g.n_, std::vector<std::vector<double>>(g.n_, std::vector<double>(g.n_, 0.0)));
    if (j.contains("brackets")) {
        for (const auto& b : j["brackets"]) {
            int jj = b.at("j").get<int>() - 1;
            int kk = b.at("k").get<int>() - 1;
            int ll = b.at("l").get<int>() - 1;
            double c = b.at("c").get<double>();
            if (jj < 0 || kk < 0 || ll < 0 || jj >= g.n_ || kk >= g.n_ || ll >= g.n_)
                throw std::invalid_argument("structure JSON: bracket index out of range");
            if (jj == kk) throw std::invalid_argument("structure JSON: bracket with j == k");
            g.c_[jj][kk][ll] += c;
            g.c_[kk][jj][ll] -= c;    // antisymmetry
        }
    }
    if (j.contains("nu0")) {
        g.nu0_ = j["nu0"].get<int>();
    } else {
        g.nu0_ = 1;
        for (int v : g.w_) g.nu0_ = std::lcm(g.nu0_, v);
    }
    g.finalize();
    return g;
}

GradedStructure GradedStructure::named(const std::string& name) {
    if (name == "heisenberg1") return heisenberg1();
    if (name.rfind("abelian:", 0) == 0) return abelian(std::stoi(name.substr(8)));
    throw std::invalid_argument("unknown structure name: " + name);
}

void GradedStructure::finalize() {
    step_ = *std::max_element(w_.begin(), w_.end());
    Q_ = std::accumulate(w_.begin(), w_.end(), 0.0);
    if (nu0_ < 1) throw std::invalid_argument("nu0 must be a positive integer");
    for (int v : w_)
        if (nu0_ % v != 0)
            throw std::invalid_argument("nu0 must be a common multiple of the weights");
    // Gradation compatibility: c_{jk}^l != 0 requires v_l = v_j + v_k.
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
            for (int l = 0; l < n_; ++l)
                if (c_[j][k][l] != 0.0 && w_[l] != w_[j] + w_[k])
                    throw std::invalid_argument(
                        "structure constants incompatible with the gradation");
    if (step_ > 3)
        throw std::invalid_argument(
            "step > 3: closed-form group law not available (out of scope)");
    if (jacobi_residual() > 1e-12)
        throw std::invalid_argument("structure constants violate the Jacobi identity");

    // Left-invariant fields from the tau-derivative of x * exp(tau e_j):
    // p_{jk}(x) = delta_{jk} + (1/2)[x, e_j]_k + (1/12)[x, [x, e_j]]_k.
    fields_.assign(n_, std::vector<Poly>(n_));
    for (int j = 0; j < n_; ++j) {
        add_monomial(fields_[j][j], std::vector<int>(n_, 0), 1.0);
        for (int l = 0; l < n_; ++l)
            for (int k = 0; k < n_; ++k) {
                if (c_[l][j][k] != 0.0) {
                    std::vector<int> e(n_, 0);
                    e[l] = 1;
                    add_monomial(fields_[j][k], e, 0.5 * c_[l][j][k]);
                }
                // quadratic part: (1/12) x_l x_m c_{m j}^{r} c_{l r}^{k}
                for (int m = 0; m < n_; ++m)
                    for (int r = 0; r < n_; ++r)
                        if (c_[m][j][r] != 0.0 && c_[l][r][k] != 0.0) {
                            std::vector<int> e(n_, 0);
                            e[l] += 1;
                            e[m] += 1;
                            add_monomial(fields_[j][k], e,
                                         c_[m][j][r] * c_[l][r][k] / 12.0);
                        }
            }
    }
}

Vec GradedStructure::bracket(const Vec& a, const Vec& b) const {
    Vec out(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        if (a[j] == 0.0) continue;
        for (int k = 0; k < n_; ++k) {
            if (b[k] == 0.0) continue;
            for (int l = 0; l < n_; ++l)
                if (c_[j][k][l] != 0.0) out[l] += a[j] * b[k] * c_[j][k][l];
        }
    }
    return out;
}

Vec GradedStructure::multiply(const Vec& a, const Vec& b) const {
    // BCH through depth-3 brackets; exact for nilpotency step <= 3.
    Vec ab = bracket(a, b);
    Vec out(n_);
    for (int i = 0; i < n_; ++i) out[i] = a[i] + b[i] + 0.5 * ab[i];
    if (step_ >= 3) {
        Vec aab = bracket(a, ab);
        Vec bba = bracket(b, bracket(b, a));
        for (int i = 0; i < n_; ++i) out[i] += (aab[i] + bba[i]) / 12.0;
    }
    return out;
}

Vec GradedStructure::inverse(const Vec& a) const {
    Vec out(n_);
    for (int i = 0; i < n_; ++i) out[i] = -a[i];
    return out;
}

Vec GradedStructure::dilate(double r, const Vec& a) const {
    Vec out(n_);
    for (int i = 0; i < n_; ++i) out[i] = std::pow(r, w_[i]) * a[i];
    return out;
}

double GradedStructure::hom_norm(const Vec& a) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
        int e = 2 * nu0_ / w_[i];
        s += std::pow(std::abs(a[i]), e);
    }
    return std::pow(s, 1.0 / (2.0 * nu0_));
}

int GradedStructure::hom_degree(const MultiIndex& alpha) const {
    int d = 0;
    for (int i = 0; i < n_ && i < static_cast<int>(alpha.size()); ++i)
        d += w_[i] * alpha[i];
    return d;
}

double GradedStructure::monomial(const MultiIndex& alpha, const Vec& x) const {
    double t = 1.0;
    for (int i = 0; i < n_ && i < static_cast<int>(alpha.size()); ++i)
        for (int r = 0; r < alpha[i]; ++r) t *= x[i];
    return t;
}

double GradedStructure::jacobi_residual() const {
    double worst = 0.0;
    Vec ej(n_), ek(n_), el(n_);
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
            for (int l = 0; l < n_; ++l) {
                std::fill(ej.begin(), ej.end(), 0.0);
                std::fill(ek.begin(), ek.end(), 0.0);
                std::fill(el.begin(), el.end(), 0.0);
                ej[j] = ek[k] = el[l] = 1.0;
                Vec r1 = bracket(ej, bracket(ek, el));
                Vec r2 = bracket(ek, bracket(el, ej));
                Vec r3 = bracket(el, bracket(ej, ek));
                for (int i = 0; i < n_; ++i)
                    worst = std::max(worst, std::abs(r1[i] + r2[i] + r3[i]));
            }
    return worst;
}

}   // namespace gpdo
