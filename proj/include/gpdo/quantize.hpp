#pragma once

// Quantization Op(sigma): apply a symbol to a function through the frequency
// side, extract convolution kernels, measure kernel decay against the
// predicted near-diagonal and far-field envelopes, and estimate the L2
// operator norm by power iteration on T*T.

#include <cstdint>
#include <vector>

#include "gpdo/fourier.hpp"
#include "gpdo/symbol.hpp"

namespace gpdo {

/// Op(sigma) f (x) = sum_node w tr(pi(x) sigma(x,node) f^(node)), evaluated
/// per separable term as a_k(x) * synthesize(M_k * f^).
SampledFunction op_apply(const Symbol& sym, const SampledFunction& f,
                         const FourierEngine& eng);

/// Adjoint action Op(sigma)^* f = Op(sigma^*) f (x-independent symbols only).
SampledFunction op_apply_adjoint(const Symbol& sym, const SampledFunction& f,
                                 const FourierEngine& eng);

struct KernelSlice {
    Vec x;                   // base point
    SampledFunction kappa;   // convolution kernel on the engine grid
};

/// Convolution kernel kappa_x = synthesis of sigma(x, .) on eng's grid; the
/// two-sided kernel is K(g, h) = kappa_x(h^{-1} g).
KernelSlice kernel_slice(const Symbol& sym, const Vec& x, const FourierEngine& eng);

/// Same through the windowed lambda-dense kernel pipeline: the right form for
/// decay analysis, where band-edge ringing would otherwise set the far-field
/// floor.
KernelSlice kernel_slice(const Symbol& sym, const Vec& x, const KernelPipeline& kp);

struct DecayShell {
    double q_lo = 0, q_hi = 0, q_mid = 0;
    long long count = 0;
    double max_abs = 0, mean_abs = 0;
};

struct DecayReport {
    std::vector<DecayShell> near_shells, far_shells;
    double near_slope = 0;        // least-squares slope of log max|kappa| vs log |q|
    double near_slope_halfwidth = 0;   // 1.96 * standard error
    double near_bound = 0;        // -(Q+m)/rho
    bool near_ok = false;         // near_slope >= near_bound - 0.3
    bool slope_below_minus_Q = false;
    std::vector<double> CM;       // fitted constants for M in {2,4,6}
    std::vector<int> CM_orders;
    double margin_at_4 = 0;       // C6 * 4^-6 minus measured max near |q| = 4
    bool far_ok = false;
    bool partial = false;         // some shell had fewer than 30 samples
};

/// Shell statistics and envelope fits for a kernel sampled near the origin
/// (shells |q| in [0.1, 1]) and in the far field (shells |q| in [1, max]).
DecayReport decay_report(const GradedStructure& s, const KernelSlice& near,
                         const KernelSlice& far, double m, double rho);

struct NormEstimate {
    double estimate = 0;
    double last_change = 0;   // relative change of the final iteration
    bool converged = false;   // last_change <= 0.05
    std::vector<double> rayleigh;
};

/// Power iteration on T*T with T = Op(sigma); deterministic for a fixed seed.
NormEstimate l2_norm_estimate(const Symbol& sym, const FourierEngine& eng, int iterations,
                              std::uint64_t seed);

/// Direct group convolution (f * kappa)(g) = sum_h w_h f(h) kappa(h^{-1} g),
/// with kappa sampled on a finer grid and interpolated per axis (exact lookup
/// when the point lies on a kappa-grid plane, cubic otherwise; points outside
/// the kappa box contribute zero).
SampledFunction convolve_with_kernel(const GradedStructure& s, const SampledFunction& f,
                                     const SampledFunction& kappa);

}   // namespace gpdo
