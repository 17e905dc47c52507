#pragma once

// File formats (CSV and a 16-byte-header binary for sampled functions, JSON
// for configs and reports), run-parameter presets, and the bundled
// computation context (grids + frequency grid + transform engines) that the
// CLI and the acceptance suite share.

#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "gpdo/fourier.hpp"
#include "gpdo/inequalities.hpp"
#include "gpdo/quantize.hpp"
#include "gpdo/symbol.hpp"

namespace gpdo {

using json = nlohmann::json;

// ---- sampled-function files ----

void write_csv(const std::string& path, const SampledFunction& f);
SampledFunction read_csv(const std::string& path, const GroupGrid& g);

/// Binary layout: 8-byte magic "GPDOFN1\0", uint16 n, uint16 P, float32 L
/// (little-endian), then P^n complex<double> samples, last axis fastest.
void write_binary(const std::string& path, const SampledFunction& f);
/// Reads the header, rebuilds the grid for structure s, and checks sizes.
SampledFunction read_binary(const std::string& path, const GradedStructure& s);

// ---- run configuration ----

struct RunParams {
    std::string group = "heisenberg1";
    int refine = 0;
    double L = 5;
    int P = 48;
    double lambda_min = 0.003, lambda_max = 10;
    int panels = 16, nodes_per_panel = 8, N = 112;
    double kernel_L = 4.0;
    int kernel_P = 61;
    int kernel_dense = 4;   // lambda-densification factor of the kernel pipeline
    std::string rockland = "sublaplacian";   // or "graded_powers"

    static RunParams preset(const std::string& group, int refine);
    static RunParams from_json(const json& j);
    json to_json() const;
};

/// Everything a computation needs, built once per run. Engines point into the
/// grids owned here; the object is pinned (no copy/move).
struct CalcContext {
    GradedStructure s;
    GroupGrid grid;     // main sampling grid
    GroupGrid kgrid;    // kernel-pipeline grid (same as grid on abelian)
    FrequencyGrid fg;
    std::unique_ptr<FourierEngine> main_eng;
    std::unique_ptr<KernelPipeline> kpipe;
    std::unique_ptr<DifferenceCalculus> dcalc;
    std::shared_ptr<const SpectralCalculus> spec;

    CalcContext() = default;
    CalcContext(const CalcContext&) = delete;
    CalcContext& operator=(const CalcContext&) = delete;
};

std::unique_ptr<CalcContext> make_context(const RunParams& p);

/// Symbol specs: {"kind":"multiplier","phi":"heat","m":-10} |
/// {"kind":"invariant","alpha":[0,0,1]} |
/// {"kind":"coeff_multiplier","a":"1+tanh(x1)","phi":"power","gamma":0.5}.
Symbol build_symbol(const json& spec, const CalcContext& ctx);

// ---- report serialization ----

json to_json(const GardingReport& r);
json to_json(const DecayReport& r);
json to_json(const DecayProfile& r);
json to_json(const NormEstimate& r);
json to_json(const std::vector<ClassReportRow>& rows);

/// Writes <dir>/manifest.json with the echoed config, tool versions, and
/// per-stage timings in seconds.
void write_manifest(const std::string& dir, const json& config,
                    const std::map<std::string, double>& timings);

}   // namespace gpdo
