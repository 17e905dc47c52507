#include "gpdo/oracle_abelian.hpp"

#include <cmath>
#include <stdexcept>

#include "gpdo/quantize.hpp"

namespace gpdo {

SampledFunction kn_quantize(const EuclideanSymbol& p, const SampledFunction& f,
                            const FrequencyGrid& fg) {
    if (fg.backend != FrequencyGrid::Backend::abelian)
        throw std::invalid_argument("kn_quantize: abelian frequency lattice required");
    const GroupGrid& g = f.grid;
    if (fg.n != g.n || fg.P != g.P)
        throw std::invalid_argument("kn_quantize: lattice shape mismatch");

    const std::size_t NX = g.size();
    const std::size_t NXI = fg.nodes();
    const double h = g.h();

    // f^(xi) by direct summation.
    std::vector<cd> fhat(NXI, cd(0, 0));
    for (std::size_t k = 0; k < NXI; ++k) {
        const Vec xi = fg.xi_point(k);
        cd acc(0, 0);
        for (std::size_t i = 0; i < NX; ++i) {
            const Vec x = g.point(i);
            double ph = 0;
            for (int a = 0; a < g.n; ++a)
                ph += x[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(a)];
            acc += f.v[i] * std::exp(cd(0, -ph));
        }
        fhat[k] = acc * std::pow(h, g.n);
    }

    const double wxi = std::pow(fg.dxi / (2.0 * M_PI), g.n);
    SampledFunction out = SampledFunction::zeros(g);
    for (std::size_t i = 0; i < NX; ++i) {
        const Vec x = g.point(i);
        cd acc(0, 0);
        for (std::size_t k = 0; k < NXI; ++k) {
            const Vec xi = fg.xi_point(k);
            double ph = 0;
            for (int a = 0; a < g.n; ++a)
                ph += x[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(a)];
            acc += std::exp(cd(0, ph)) * p.p(x, xi) * fhat[k];
        }
        out.v[i] = acc * wxi;
    }
    return out;
}

OracleComparison oracle_compare(const EuclideanSymbol& p, const Symbol& sym,
                                const SampledFunction& f, const FourierEngine& eng) {
    SampledFunction a = op_apply(sym, f, eng);
    SampledFunction b = kn_quantize(p, f, eng.freq());
    OracleComparison c;
    c.rel_l2 = rel_l2_error(a, b);
    double mx = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i)
        mx = std::max(mx, std::abs(a.v[i] - b.v[i]));
    c.max_abs_diff = mx;
    return c;
}

}   // namespace gpdo
