#pragma once

// Graded nilpotent Lie group core: structure constants, exponential-coordinate
// group law (closed-form BCH, exact for step <= 3), dilations, homogeneous
// norm/degree, and the polynomial coefficient tables of the left-invariant
// basis vector fields.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace gpdo {

using Vec = std::vector<double>;   // element of the group/algebra in exponential coordinates
using MultiIndex = std::vector<int>;

/// One monomial c * x^e of a polynomial coefficient.
struct Monomial {
    std::vector<int> exp;
    double coeff = 0.0;
};
using Poly = std::vector<Monomial>;

double eval_poly(const Poly& p, const Vec& x);

/// Graded structure: basis adapted to the gradation, integer dilation weights
/// v_1 <= ... <= v_n, structure constants [e_j, e_k] = sum_l c_{jk}^l e_l.
class GradedStructure {
  public:
    /// Default-constructed instances are empty placeholders; build real ones
    /// through the factories below.
    GradedStructure() = default;

    static GradedStructure heisenberg1();
    static GradedStructure abelian(int n);
    /// Parse {"weights":[...], "brackets":[{"j":1,"k":2,"l":3,"c":1.0}], "nu0":N}
    /// (1-based indices in JSON). Validates gradation compatibility, Jacobi,
    /// nilpotency, and the step <= 3 scope of the closed-form group law.
    static GradedStructure from_json(const nlohmann::json& j);
    /// Accepts "heisenberg1", "abelian:<n>", or a JSON object.
    static GradedStructure named(const std::string& name);

    int dim() const { return n_; }
    int step() const { return step_; }
    int nu0() const { return nu0_; }
    double homogeneous_dim() const { return Q_; }   // Q = sum of weights
    const std::vector<int>& weights() const { return w_; }

    /// Structure-constant bracket of coordinate vectors.
    Vec bracket(const Vec& a, const Vec& b) const;
    /// Group product in exponential coordinates (BCH closed form).
    Vec multiply(const Vec& a, const Vec& b) const;
    Vec inverse(const Vec& a) const;
    Vec dilate(double r, const Vec& a) const;
    /// |x| = (sum_j |x_j|^{2 nu0 / v_j})^{1/(2 nu0)}; homogeneous of degree 1.
    double hom_norm(const Vec& a) const;
    /// [alpha] = sum_j v_j alpha_j.
    int hom_degree(const MultiIndex& alpha) const;
    /// Monomial x^alpha.
    double monomial(const MultiIndex& alpha, const Vec& x) const;

    /// Coefficient table of the left-invariant fields: X_j = sum_k p[j][k](x) d_k.
    /// p[j][k] is a polynomial, homogeneous of weighted degree v_k - v_j.
    const std::vector<std::vector<Poly>>& field_coeffs() const { return fields_; }

    /// Max residual of the Jacobi identity over all basis triples.
    double jacobi_residual() const;

  private:
    void finalize();   // validates + builds field tables

    int n_ = 0;
    int step_ = 1;
    int nu0_ = 1;
    double Q_ = 0;
    std::vector<int> w_;
    // c_[j][k][l] = coefficient of e_l in [e_j, e_k]
    std::vector<std::vector<std::vector<double>>> c_;
    std::vector<std::vector<Poly>> fields_;
};

}   // namespace gpdo
