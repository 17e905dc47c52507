#pragma once

// Group Fourier transform on the sampling grid: forward analysis
// f^(node) = sum_g w_g f(g) pi_node(g)^*, synthesis
// f(g) = sum_node w_node tr(pi_node(g) f^(node)), and Plancherel helpers.
//
// The Heisenberg path is evaluated in factored form: with
// pi_lambda(x,y,t) = e^{i lambda (t + xy/2)} exp(i lambda y U) exp(x D)
// and the cached unit-scale eigenbases of U1 and D1, both directions reduce
// to per-lambda dense products of size (N+1) x P instead of per-point
// matrix exponentials. The abelian path is a separable lattice DFT with
// uniform weight h per axis, which is exactly inverted by the synthesis sum
// (discrete character orthogonality).

#include <vector>

#include "gpdo/freq.hpp"
#include "gpdo/grid.hpp"
#include "gpdo/structure.hpp"

namespace gpdo {

/// Matrix-valued function on the frequency grid (one block per node).
struct FourierField {
    const FrequencyGrid* fg = nullptr;
    std::vector<Mat> m;

    static FourierField zeros(const FrequencyGrid& fg);
    FourierField& operator+=(const FourierField& o);
    FourierField& operator-=(const FourierField& o);
    FourierField& operator*=(cd a);
    /// sum_node w_node ||m_node||_F^2  (squared Plancherel norm).
    double weighted_frob2() const;
    double max_frob() const;
};

/// Hermitian pairing sum_node w_node tr(B_node^* A_node).
cd weighted_pairing(const FourierField& a, const FourierField& b);

class FourierEngine {
  public:
    FourierEngine(const GradedStructure& s, const GroupGrid& g, const FrequencyGrid& fg);

    const GroupGrid& grid() const { return *g_; }
    const FrequencyGrid& freq() const { return *fg_; }
    const GradedStructure& structure() const { return *s_; }

    FourierField forward(const SampledFunction& f) const;
    SampledFunction synthesize(const FourierField& F) const;

    /// | ||f||^2 - sum w ||f^||_F^2 | / ||f||^2.
    double parseval_defect(const SampledFunction& f) const;
    /// ||synthesize(forward(f)) - f|| / ||f||  in the grid L2 norm.
    double roundtrip_error(const SampledFunction& f) const;
    /// max over nodes of ||f^(-node) - conj(f^(node))||_F for real f.
    double conjugation_defect(const FourierField& F) const;

  private:
    const GradedStructure* s_;
    const GroupGrid* g_;
    const FrequencyGrid* fg_;

    // Heisenberg caches (indexed by node): phase tables built once.
    std::shared_ptr<const HermiteOps> ops_;
    Mat W_;                          // Vd^* Vu
    std::vector<Eigen::VectorXcd> tph_;   // e^{-i lambda t}, per node, size P
    std::vector<Mat> phX_;                // (N+1) x P: e^{-i sqrt|l| x s_j}
    std::vector<Mat> phY_;                // P x (N+1): e^{-i sgn sqrt|l| y u_k}
    std::vector<Mat> xyph_;               // P x P: e^{-i lambda x y / 2}

    // Abelian caches: per-axis forward (h e^{-i xi x}) and synthesis
    // ((dxi/2pi) e^{+i xi x}) matrices; identical for every axis of the cube.
    Mat fwd_axis_, syn_axis_;

    FourierField forward_h(const SampledFunction& f) const;
    SampledFunction synthesize_h(const FourierField& F) const;
    FourierField forward_a(const SampledFunction& f) const;
    SampledFunction synthesize_a(const FourierField& F) const;
};

/// Contract axis `axis` of the length-P^n tensor v (last axis fastest) with
/// the P_out x P matrix M, replacing that axis dimension by P_out.
std::vector<cd> apply_axis(const std::vector<cd>& v, const Mat& M, int axis, int n, int P);

}   // namespace gpdo
