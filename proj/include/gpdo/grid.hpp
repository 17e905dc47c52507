#pragma once

// Product sampling grids on the group in exponential coordinates, complex
// sampled functions with quadrature weights, monomial multiplication, and
// finite-difference application of left-invariant derivatives X^beta.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "gpdo/structure.hpp"

namespace gpdo {

using cd = std::complex<double>;

/// Symmetric box [-L, L]^n, P nodes per axis including both endpoints,
/// product trapezoidal quadrature weights (sum to (2L)^n). The grid contains
/// the origin exactly when P is odd.
struct GroupGrid {
    int n = 0;
    double L = 0.0;
    int P = 0;
    std::vector<double> axis;     // node coordinates, shared by all axes
    std::vector<double> axis_w;   // per-axis trapezoid weights

    static GroupGrid make(const GradedStructure& s, double L, int P);

    std::size_t size() const;
    double h() const { return axis[1] - axis[0]; }
    /// flat index -> coordinate tuple (last axis fastest)
    void unflatten(std::size_t idx, std::vector<int>& digits) const;
    std::size_t flatten(const std::vector<int>& digits) const;
    Vec point(const std::vector<int>& digits) const;
    double weight(const std::vector<int>& digits) const;
    bool on_boundary(const std::vector<int>& digits) const;
    Vec point(std::size_t flat) const;
    double weight(std::size_t flat) const;
    bool on_boundary(std::size_t flat) const;
    bool same_layout(const GroupGrid& o) const;
};

/// Complex function sampled on a GroupGrid. Carries a boundary diagnostic:
/// the max modulus on the outermost shell (flagged when > 1e-8).
struct SampledFunction {
    GroupGrid grid;
    std::vector<cd> v;

    static SampledFunction zeros(const GroupGrid& g);
    static SampledFunction from_fn(const GroupGrid& g,
                                   const std::function<cd(const Vec&)>& f);

    double norm2() const;           // weighted L2 norm
    double max_abs() const;
    double boundary_max() const;    // max |f| on the outermost shell
    bool boundary_flagged() const { return boundary_max() > 1e-8; }

    SampledFunction& operator+=(const SampledFunction& o);
    SampledFunction& operator-=(const SampledFunction& o);
    SampledFunction& operator*=(cd c);
};

cd inner(const SampledFunction& a, const SampledFunction& b);   // sum w a conj(b)
double rel_l2_error(const SampledFunction& got, const SampledFunction& want);

/// Pointwise x^alpha * f.
SampledFunction monomial_multiply(const GradedStructure& s, const MultiIndex& alpha,
                                  const SampledFunction& f);

/// Left-invariant derivative X^beta = X_1^{b1} ... X_n^{bn} (rightmost factor
/// applied first), each X_j = sum_k p_jk(x) d_k with order-4 central finite
/// differences (order-2 one-sided at the boundary).
SampledFunction apply_X_beta(const GradedStructure& s, const MultiIndex& beta,
                             const SampledFunction& f);

// Common test-function builders.
SampledFunction make_gaussian(const GroupGrid& g, const Vec& center, const Vec& width,
                              const Vec& modulation);
SampledFunction make_gaussian(const GroupGrid& g, double width = 1.0);
/// (1 + |x|_E^2)^{-1}: smooth but only polynomially decaying.
SampledFunction make_inverse_quadratic(const GroupGrid& g);
/// Named coefficient registry used by coefficient*multiplier symbols:
/// "one", "1+tanh(x1)", "x1", "gaussian".
SampledFunction make_coefficient(const GroupGrid& g, const std::string& name);

/// The same registry as callables ("one", "1+tanh(x1)", "x1", "gaussian").
std::function<cd(const Vec&)> coefficient_fn(const std::string& name);

}   // namespace gpdo
