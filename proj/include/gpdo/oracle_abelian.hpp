#pragma once

// Reference Kohn-Nirenberg quantization on R^n, computed by direct lattice
// sums with no shared code with the frequency-side machinery. Used to
// cross-check the framework's abelian backend.

#include <functional>

#include "gpdo/fourier.hpp"
#include "gpdo/grid.hpp"
#include "gpdo/symbol.hpp"

namespace gpdo {

struct EuclideanSymbol {
    std::function<cd(const Vec& x, const Vec& xi)> p;
};

/// a(x, D) f(x) = (2 pi)^{-n} (dxi)^n sum_xi e^{i x.xi} p(x, xi) f^(xi),
/// f^(xi) = h^n sum_x e^{-i x.xi} f(x). Direct O(P^{2n}) sums.
SampledFunction kn_quantize(const EuclideanSymbol& p, const SampledFunction& f,
                            const FrequencyGrid& fg);

struct OracleComparison {
    double rel_l2 = 0;
    double max_abs_diff = 0;
};

/// Apply both pipelines (framework op_apply on the abelian backend vs
/// kn_quantize) to f and report the discrepancy.
OracleComparison oracle_compare(const EuclideanSymbol& p, const Symbol& sym,
                                const SampledFunction& f, const FourierEngine& eng);

}   // namespace gpdo
