#include "gpdo/io.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gpdo {

void write_csv(const std::string& path, const SampledFunction& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const GroupGrid& g = f.grid;
    for (int a = 1; a <= g.n; ++a) out << "x" << a << ",";
    out << "re,im\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec p = g.point(i);
        for (double c : p) out << c << ",";
        out << f.v[i].real() << "," << f.v[i].imag() << "\n";
    }
}

SampledFunction read_csv(const std::string& path, const GroupGrid& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    std::getline(in, line);   // header
    SampledFunction f = SampledFunction::zeros(g);
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (i >= g.size()) throw std::runtime_error("csv has more rows than grid points");
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != static_cast<std::size_t>(g.n) + 2)
            throw std::runtime_error("csv row has wrong column count");
        f.v[i] = cd(vals[static_cast<std::size_t>(g.n)],
                    vals[static_cast<std::size_t>(g.n) + 1]);
        ++i;
    }
    if (i != g.size()) throw std::runtime_error("csv has fewer rows than grid points");
    return f;
}

void write_binary(const std::string& path, const SampledFunction& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const GroupGrid& g = f.grid;
    char header[16] = {0};
    std::memcpy(header, "GPDOFN1\0", 8);
    const std::uint16_t n = static_cast<std::uint16_t>(g.n);
    const std::uint16_t P = static_cast<std::uint16_t>(g.P);
    const float L = static_cast<float>(g.L);
    std::memcpy(header + 8, &n, 2);
    std::memcpy(header + 10, &P, 2);
    std::memcpy(header + 12, &L, 4);
    out.write(header, 16);
    out.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(cd)));
}

SampledFunction read_binary(const std::string& path, const GradedStructure& s) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    char header[16];
    in.read(header, 16);
    if (in.gcount() != 16 || std::memcmp(header, "GPDOFN1\0", 8) != 0)
        throw std::runtime_error("bad binary header: " + path);
    std::uint16_t n, P;
    float L;
    std::memcpy(&n, header + 8, 2);
    std::memcpy(&P, header + 10, 2);
    std::memcpy(&L, header + 12, 4);
    if (n != s.dim()) throw std::runtime_error("binary dimension mismatch");
    static std::map<std::string, GroupGrid> grids;   // keep grids alive for results
    std::ostringstream key;
    key << int(n) << ":" << int(P) << ":" << L;
    auto it = grids.find(key.str());
    if (it == grids.end())
        it = grids.emplace(key.str(), GroupGrid::make(s, double(L), int(P))).first;
    SampledFunction f = SampledFunction::zeros(it->second);
    in.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(cd)));
    if (static_cast<std::size_t>(in.gcount()) != f.v.size() * sizeof(cd))
        throw std::runtime_error("binary payload truncated: " + path);
    return f;
}

RunParams RunParams::preset(const std::string& group, int refine) {
    RunParams p;
    p.group = group;
    p.refine = refine;
    switch (refine) {
        case 0:
            break;
        case 1:
            p.P = 56;
            p.lambda_min = 0.002;
            p.lambda_max = 11;
            p.panels = 20;
            p.N = 128;
            p.kernel_P = 71;
            break;
        case 2:
            p.P = 64;
            p.lambda_min = 0.0015;
            p.lambda_max = 12;
            p.panels = 24;
            p.N = 144;
            p.kernel_P = 81;
            p.kernel_dense = 5;
            break;
        default:
            throw std::invalid_argument("refine must be 0, 1 or 2");
    }
    return p;
}

RunParams RunParams::from_json(const json& j) {
    RunParams p = preset(j.value("group", std::string("heisenberg1")),
                         j.value("refine", 0));
    if (j.contains("L")) p.L = j["L"].get<double>();
    if (j.contains("P")) p.P = j["P"].get<int>();
    if (j.contains("lambda_min")) p.lambda_min = j["lambda_min"].get<double>();
    if (j.contains("lambda_max")) p.lambda_max = j["lambda_max"].get<double>();
    if (j.contains("panels")) p.panels = j["panels"].get<int>();
    if (j.contains("nodes_per_panel")) p.nodes_per_panel = j["nodes_per_panel"].get<int>();
    if (j.contains("N")) p.N = j["N"].get<int>();
    if (j.contains("kernel_L")) p.kernel_L = j["kernel_L"].get<double>();
    if (j.contains("kernel_P")) p.kernel_P = j["kernel_P"].get<int>();
    if (j.contains("kernel_dense")) p.kernel_dense = j["kernel_dense"].get<int>();
    if (j.contains("rockland")) p.rockland = j["rockland"].get<std::string>();
    return p;
}

json RunParams::to_json() const {
    return json{{"group", group},
                {"refine", refine},
                {"L", L},
                {"P", P},
                {"lambda_min", lambda_min},
                {"lambda_max", lambda_max},
                {"panels", panels},
                {"nodes_per_panel", nodes_per_panel},
                {"N", N},
                {"kernel_L", kernel_L},
                {"kernel_P", kernel_P},
                {"kernel_dense", kernel_dense},
                {"rockland", rockland}};
}

std::unique_ptr<CalcContext> make_context(const RunParams& p) {
    auto ctx = std::make_unique<CalcContext>();
    ctx->s = GradedStructure::named(p.group);
    ctx->grid = GroupGrid::make(ctx->s, p.L, p.P);
    const RocklandKind kind = p.rockland == "graded_powers" ? RocklandKind::graded_powers
                                                            : RocklandKind::sublaplacian;
    if (ctx->s.step() == 1) {   // abelian backend
        ctx->kgrid = ctx->grid;
        ctx->fg = FrequencyGrid::abelian_for(ctx->grid);
    } else {
        ctx->kgrid = GroupGrid::make(ctx->s, p.kernel_L, p.kernel_P);
        ctx->fg = FrequencyGrid::heisenberg(p.lambda_min, p.lambda_max, p.panels,
                                            p.nodes_per_panel, p.N);
    }
    ctx->main_eng = std::make_unique<FourierEngine>(ctx->s, ctx->grid, ctx->fg);
    ctx->kpipe = std::make_unique<KernelPipeline>(ctx->s, ctx->kgrid, ctx->fg, p.kernel_dense);
    ctx->dcalc = std::make_unique<DifferenceCalculus>(ctx->s, ctx->fg, ctx->main_eng.get());
    ctx->spec = SpectralCalculus::make(ctx->s, ctx->fg, kind);
    return ctx;
}

Symbol build_symbol(const json& spec, const CalcContext& ctx) {
    const std::string kind = spec.value("kind", std::string("multiplier"));
    if (kind == "multiplier" || kind == "coeff_multiplier") {
        const std::string phi = spec.value("phi", std::string("one"));
        const double gamma = spec.value("gamma", 0.0);
        SymbolClassParams cls;
        if (phi == "power")
            cls.m = spec.contains("m") ? spec["m"].get<double>()
                                       : gamma * ctx.spec->nu();
        else if (phi == "one")
            cls.m = spec.value("m", 0.0);
        else
            cls.m = spec.value("m", -10.0);
        cls.rho = spec.value("rho", 1.0);
        cls.delta = spec.value("delta", 0.0);
        Symbol sym = from_multiplier(ctx.spec, phi, gamma, cls);
        if (kind == "coeff_multiplier")
            sym = with_coefficient(std::move(sym),
                                   Coefficient::named(spec.value("a", std::string("one"))));
        return sym;
    }
    if (kind == "invariant") {
        MultiIndex alpha = spec.value("alpha", MultiIndex(static_cast<std::size_t>(ctx.s.dim()), 0));
        if (alpha.size() != static_cast<std::size_t>(ctx.s.dim()))
            throw std::invalid_argument("invariant symbol: alpha length != dimension");
        return from_invariant_operator(ctx.spec, alpha);
    }
    if (kind == "one_plus_rockland") {
        SymbolClassParams cls;
        cls.m = ctx.spec->nu();
        Symbol sym = from_multiplier(ctx.spec, "power", 1.0, cls);
        if (spec.contains("a"))
            sym = with_coefficient(std::move(sym),
                                   Coefficient::named(spec["a"].get<std::string>()));
        return sym;
    }
    throw std::invalid_argument("unknown symbol kind: " + kind);
}

json to_json(const GardingReport& r) {
    return json{{"symbol_id", r.symbol_id},
                {"m", r.m},
                {"rho", r.rho},
                {"delta", r.delta},
                {"s", r.s},
                {"C_est", r.C_est},
                {"violations", r.violations},
                {"min_re_form", r.min_re_form},
                {"fit_trials", r.fit_trials},
                {"holdout_trials", r.holdout_trials},
                {"re_form", r.re_form},
                {"sobolev_sq", r.sob2}};
}

json to_json(const DecayReport& r) {
    json shells_near = json::array(), shells_far = json::array();
    for (const auto& s : r.near_shells)
        shells_near.push_back({{"q_lo", s.q_lo},
                               {"q_hi", s.q_hi},
                               {"count", s.count},
                               {"max_abs", s.max_abs},
                               {"mean_abs", s.mean_abs}});
    for (const auto& s : r.far_shells)
        shells_far.push_back({{"q_lo", s.q_lo},
                              {"q_hi", s.q_hi},
                              {"count", s.count},
                              {"max_abs", s.max_abs},
                              {"mean_abs", s.mean_abs}});
    json cm = json::object();
    for (std::size_t i = 0; i < r.CM.size(); ++i)
        cm["C" + std::to_string(r.CM_orders[i])] = r.CM[i];
    return json{{"near_slope", r.near_slope},
                {"near_slope_halfwidth", r.near_slope_halfwidth},
                {"near_bound", r.near_bound},
                {"near_ok", r.near_ok},
                {"slope_below_minus_Q", r.slope_below_minus_Q},
                {"CM", cm},
                {"margin_at_4", r.margin_at_4},
                {"far_ok", r.far_ok},
                {"partial", r.partial},
                {"near_shells", shells_near},
                {"far_shells", shells_far}};
}

json to_json(const DecayProfile& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"beta", row.beta}, {"M", row.M}, {"weighted_sup", row.weighted_sup}});
    return json{{"rows", rows}, {"boundary_max", r.boundary_max}};
}

json to_json(const NormEstimate& r) {
    return json{{"estimate", r.estimate},
                {"last_change", r.last_change},
                {"converged", r.converged},
                {"rayleigh", r.rayleigh}};
}

json to_json(const std::vector<ClassReportRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"alpha", r.triple.alpha},
                       {"beta", r.triple.beta},
                       {"gamma", r.triple.gamma},
                       {"base", r.base},
                       {"refined", r.refined},
                       {"ratio", r.ratio}});
    return out;
}

void write_manifest(const std::string& dir, const json& config,
                    const std::map<std::string, double>& timings) {
    json m;
    m["config"] = config;
    m["versions"] = {
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
#if defined(__GNUC__)
        {"compiler", "gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__)},
#else
        {"compiler", "unknown"},
#endif
    };
    m["timings_s"] = timings;
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << m.dump(2) << "\n";
}

}   // namespace gpdo
