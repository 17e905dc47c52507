#pragma once

// Sobolev norms through the spectral calculus, hypothesis checks and a
// randomized lower-bound scan for the sharp Garding inequality, the exact
// resolvent multiplier for I + R, and weighted-decay profiles used as
// numerical evidence for Schwartz hypoellipticity.

#include <cstdint>
#include <vector>

#include "gpdo/quantize.hpp"
#include "gpdo/symbol.hpp"

namespace gpdo {

/// || (I+R)^{a/nu} f ||_{L2} evaluated on the frequency side.
double sobolev_norm(const SampledFunction& f, double a, const FourierEngine& eng,
                    const SpectralCalculus& spec);

struct PositivityResult {
    double min_eig = 0;        // smallest eigenvalue of the Hermitian part
    double max_antiherm = 0;   // largest norm of the anti-Hermitian part
    bool pass = false;         // min_eig >= -1e-10
};

/// Minimum eigenvalue of the Hermitian part of sigma on the retained block,
/// over all frequency nodes and (for x-dependent symbols) a subsampled sweep
/// of grid points (stride >= 1).
PositivityResult positivity_check(const Symbol& sym, const GroupGrid* xgrid,
                                  int x_stride = 4);

struct CommutationResult {
    double max_offdiag = 0;   // sup over nodes of the off-diagonal mass
    double max_comm = 0;      // sup over nodes of ||[sigma, pi(R)]|| (retained)
    bool pass = false;        // max_comm <= 1e-10
};

/// Commutation with the spectral projections of pi(R); on the diagonal
/// backend this is equivalent to sigma being diagonal.
CommutationResult commutation_check(const Symbol& sym, const GroupGrid* xgrid);

struct GardingReport {
    std::string symbol_id;
    double m = 0, rho = 1, delta = 0;
    double s = 0;                    // Sobolev index (m - (rho - delta)) / 2
    std::vector<double> re_form;     // Re<Tf, f> per trial
    std::vector<double> sob2;        // ||f||_{L2_s}^2 per trial
    double C_est = 0;                // max(0, max of -re/sob2 over fit trials)
    int violations = 0;              // held-out trials breaking the fitted bound
    double min_re_form = 0;          // for multiplier nonnegativity assertions
    int fit_trials = 0, holdout_trials = 0;
};

/// Randomized quadratic-form scan: trials modulated Gaussians with seeded
/// parameters; first half fits C_est, second half validates
/// Re<Tf,f> >= -1.05 C_est ||f||_s^2 - 1e-9.
GardingReport garding_scan(const Symbol& sym, int trials, std::uint64_t seed,
                           const FourierEngine& eng, const SpectralCalculus& spec);

/// u = Op((I + pi(R))^{-1}) f — the exact inverse multiplier.
SampledFunction resolvent_apply(const SampledFunction& f, const FourierEngine& eng,
                                std::shared_ptr<const SpectralCalculus> spec);

/// (I + R) f applied as a differential operator, R = -sum X_j^2 over the
/// weight-one generators (fourth-order finite differences).
SampledFunction one_plus_rockland_fd(const GradedStructure& s, const SampledFunction& f);

struct DecayProfileRow {
    MultiIndex beta;
    int M = 0;
    double weighted_sup = 0;   // sup_x (1+|x|)^M |X^beta u|
};

struct DecayProfile {
    std::vector<DecayProfileRow> rows;
    double boundary_max = 0;   // max |u| on the outermost grid shell
};

/// Weighted sup norms of X^beta u for the given derivative list and weights M.
DecayProfile schwartz_decay_report(const GradedStructure& s, const SampledFunction& u,
                                   const std::vector<MultiIndex>& betas,
                                   const std::vector<int>& Ms);

}   // namespace gpdo
