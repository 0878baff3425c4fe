#include "bklab/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

namespace bklab {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownMethods = {"standard", "mollifier", "angular",
                                             "combined", "freq"};

cplx parse_cplx(const json& j) {
    if (j.is_number()) return cplx{j.get<double>(), 0.0};
    return cplx{j.value("re", 0.0), j.value("im", 0.0)};
}

json cplx_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

Vec2 parse_vec2(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

PrimitiveShape shape_from_string(const std::string& s) {
    if (s == "rectangle") return PrimitiveShape::kRectangle;
    if (s == "ellipse") return PrimitiveShape::kEllipse;
    if (s == "disc") return PrimitiveShape::kDisc;
    throw std::invalid_argument("unknown primitive shape: " + s);
}

std::string shape_to_string(PrimitiveShape s) {
    switch (s) {
        case PrimitiveShape::kRectangle: return "rectangle";
        case PrimitiveShape::kEllipse: return "ellipse";
        case PrimitiveShape::kDisc: return "disc";
    }
    return "unknown";
}

PhantomSpec parse_phantom(const json& j) {
    const std::string kind_name = j.at("kind").get<std::string>();
    PhantomSpec spec;
    if (j.value("preset", false)) {
        spec = preset_phantom(phantom_kind_from_string(kind_name));
    } else {
        spec.kind = phantom_kind_from_string(kind_name);
    }
    if (j.contains("half_width")) spec.half_width = j["half_width"].get<double>();
    if (j.contains("amplitude")) spec.amplitude = parse_cplx(j["amplitude"]);
    if (j.contains("gaussian_center")) spec.gaussian_center = parse_vec2(j["gaussian_center"]);
    if (j.contains("gaussian_width")) spec.gaussian_width = j["gaussian_width"].get<double>();
    if (j.contains("primitives")) {
        spec.primitives.clear();
        for (const json& pj : j["primitives"]) {
            Primitive p;
            p.shape = shape_from_string(pj.at("shape").get<std::string>());
            p.center = parse_vec2(pj.at("center"));
            p.half_axes = parse_vec2(pj.at("half_axes"));
            p.angle = pj.value("angle", 0.0);
            p.intensity = pj.contains("intensity") ? parse_cplx(pj["intensity"]) : cplx{1.0, 0.0};
            spec.primitives.push_back(p);
        }
    }
    spec.validate();
    return spec;
}

json phantom_to_json(const PhantomSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["half_width"] = spec.half_width;
    j["amplitude"] = cplx_json(spec.amplitude);
    if (spec.kind == PhantomKind::kGaussian) {
        j["gaussian_center"] = {spec.gaussian_center[0], spec.gaussian_center[1]};
        j["gaussian_width"] = spec.gaussian_width;
    }
    if (!spec.primitives.empty()) {
        json arr = json::array();
        for (const Primitive& p : spec.primitives) {
            arr.push_back({{"shape", shape_to_string(p.shape)},
                           {"center", {p.center[0], p.center[1]}},
                           {"half_axes", {p.half_axes[0], p.half_axes[1]}},
                           {"angle", p.angle},
                           {"intensity", cplx_json(p.intensity)}});
        }
        j["primitives"] = arr;
    }
    return j;
}

std::string lambda_tag(double lambda) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", lambda);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

}  // namespace

void RunSpec::validate() const {
    phantom.validate();
    if (lambdas.empty()) throw std::invalid_argument("RunSpec: lambdas must be nonempty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0))
            throw std::invalid_argument("RunSpec: lambdas must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw std::invalid_argument("RunSpec: lambdas must be strictly increasing");
    }
    if (methods.empty()) throw std::invalid_argument("RunSpec: methods must be nonempty");
    for (const std::string& m : methods)
        if (!kKnownMethods.count(m))
            throw std::invalid_argument("RunSpec: unknown method " + m);
    if (output_size < 2) throw std::invalid_argument("RunSpec: output_size must be >= 2");
    if (input_refinement < 0)
        throw std::invalid_argument("RunSpec: input_refinement must be >= 0");
    averaging.validate();
    if (window && !(window->first <= window->second))
        throw std::invalid_argument("RunSpec: window min must be <= max");
}

RunSpec parse_run_spec(const std::string& json_text) {
    json j = json::parse(json_text);
    RunSpec spec;
    spec.phantom = parse_phantom(j.at("phantom"));
    spec.lambdas = j.at("lambdas").get<std::vector<double>>();
    spec.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("engine")) {
        const json& e = j["engine"];
        if (e.contains("kind")) spec.engine.engine = engine_kind_from_string(e["kind"]);
        if (e.contains("refinement")) spec.engine.refinement = e["refinement"].get<int>();
        if (e.contains("summation"))
            spec.engine.summation = e["summation"] == "sequential" ? Summation::kSequential
                                                                   : Summation::kPairwise;
        if (e.contains("pad_factor")) spec.engine.pad_factor = e["pad_factor"].get<int>();
    }
    if (j.contains("averaging")) {
        const json& a = j["averaging"];
        spec.averaging.n_angles = a.value("n_angles", spec.averaging.n_angles);
        spec.averaging.n_srad = a.value("n_srad", spec.averaging.n_srad);
        spec.averaging.freq_depth = a.value("freq_depth", spec.averaging.freq_depth);
        if (a.contains("sigma_grid"))
            spec.averaging.sigma_grid = a["sigma_grid"].get<std::vector<double>>();
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        spec.output_size = o.value("size", spec.output_size);
        spec.out_dir = o.value("dir", spec.out_dir);
        if (o.contains("window") && o["window"].is_object())
            spec.window = std::make_pair(o["window"].at("min").get<double>(),
                                         o["window"].at("max").get<double>());
        const std::string dom = o.value("domain", "frame");
        if (dom == "omega")
            spec.error_domain = ErrorDomain::kOmega;
        else if (dom != "frame")
            throw std::invalid_argument("RunSpec: domain must be frame or omega");
    }
    spec.input_refinement = j.value("input_refinement", 0);
    spec.validate();
    return spec;
}

RunSpec load_run_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open run spec " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_run_spec(text);
}

std::string run_spec_to_json(const RunSpec& spec) {
    json j;
    j["phantom"] = phantom_to_json(spec.phantom);
    j["lambdas"] = spec.lambdas;
    j["methods"] = spec.methods;
    j["engine"] = {{"kind", to_string(spec.engine.engine)},
                   {"summation", spec.engine.summation == Summation::kPairwise
                                     ? "pairwise"
                                     : "sequential"},
                   {"pad_factor", spec.engine.pad_factor}};
    j["averaging"] = {{"n_angles", spec.averaging.n_angles},
                      {"n_srad", spec.averaging.n_srad},
                      {"freq_depth", spec.averaging.freq_depth}};
    if (!spec.averaging.sigma_grid.empty())
        j["averaging"]["sigma_grid"] = spec.averaging.sigma_grid;
    j["output"] = {{"size", spec.output_size},
                   {"dir", spec.out_dir},
                   {"domain", spec.error_domain == ErrorDomain::kOmega ? "omega" : "frame"}};
    if (spec.window)
        j["output"]["window"] = {{"min", spec.window->first}, {"max", spec.window->second}};
    j["input_refinement"] = spec.input_refinement;
    return j.dump(2);
}

int auto_refinement(double lambda, double out_spacing, double half_width) {
    const double req = required_spacing(lambda, half_width);
    const double factor = 1.25 * out_spacing / req;
    return std::max(1, static_cast<int>(std::ceil(factor)));
}

std::string render_pgm(const ScalarField& f, double window_min, double window_max) {
    const Grid2& g = f.grid;
    std::string out = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
    out.reserve(out.size() + g.size());
    const bool degenerate = !(window_max > window_min);
    const double scale = degenerate ? 0.0 : 255.0 / (window_max - window_min);
    for (int iy = g.ny - 1; iy >= 0; --iy) {  // row 1 = top of the frame
        for (int ix = 0; ix < g.nx; ++ix) {
            double v = degenerate ? 127.5 : (f.at(ix, iy).real() - window_min) * scale;
            v = std::floor(v + 0.5);  // round half up
            v = std::clamp(v, 0.0, 255.0);
            out.push_back(static_cast<char>(static_cast<unsigned char>(v)));
        }
    }
    return out;
}

namespace {

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed for " + path);
}

/// per-pixel iterated frequency average of the main term over a lambda
/// lattice of reconstruction grids
ScalarField freq_recon(const ScalarField& input, double lambda, const Grid2& out,
                       const AveragingParams& p, const EngineConfig& cfg) {
    const int depth = std::max(1, p.freq_depth);
    const double span = std::ldexp(1.0, depth);  // 2^depth
    const double dt = lambda / 32.0;
    // each recursion level overshoots its dyadic endpoint by up to dt, so the
    // lattice must reach 2^depth (lambda + dt)
    const long nt =
        static_cast<long>(std::ceil(((span - 1.0) * lambda + span * dt) / dt)) + 2;
    std::vector<ScalarField> fields;
    fields.reserve(nt);
    for (long i = 0; i < nt; ++i)
        fields.push_back(main_term_grid(input, lambda + dt * i, out, cfg));
    ScalarField result(out);
    SampledFreqMap map;
    map.t0 = lambda;
    map.dt = dt;
    map.values.resize(nt);
    for (std::size_t px = 0; px < result.samples.size(); ++px) {
        for (long i = 0; i < nt; ++i) map.values[i] = fields[i].samples[px];
        result.samples[px] = freq_average_iterated(map, lambda, depth);
    }
    return result;
}

}  // namespace

std::vector<SuiteEntry> default_suite() {
    return {
        {PhantomKind::kRectangles, {10, 15, 20, 30}},
        {PhantomKind::kOvals, {15, 20, 30}},
        {PhantomKind::kCirclesSpiral, {20, 30, 50}},
        {PhantomKind::kGeometricFigures, {20, 30, 50}},
        {PhantomKind::kSheppLogan, {50, 75, 100}},
    };
}

RunSpec suite_run_spec(PhantomKind kind, const std::string& out_dir) {
    RunSpec spec;
    spec.phantom = preset_phantom(kind);
    for (const SuiteEntry& entry : default_suite())
        if (entry.kind == kind) spec.lambdas = entry.lambdas;
    if (spec.lambdas.empty())
        throw std::invalid_argument("suite_run_spec: kind is not part of the suite");
    spec.methods = {"standard", "mollifier", "angular", "combined"};
    spec.engine.engine = EngineKind::kSpectral;
    spec.output_size = 200;
    spec.out_dir = out_dir;
    return spec;
}

RunResult run(const RunSpec& spec, int threads) {
    spec.validate();
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();
    fs::create_directories(spec.out_dir);

    const std::string name = to_string(spec.phantom.kind);
    const double hw = spec.phantom.half_width;
    const Grid2 out_grid = Grid2::centered_square(hw, spec.output_size);
    const ScalarField truth = render_phantom(spec.phantom, out_grid);

    double wmin = 0.0, wmax = 0.0;
    if (spec.window) {
        wmin = spec.window->first;
        wmax = spec.window->second;
    } else {
        wmin = wmax = truth.samples.empty() ? 0.0 : truth.samples[0].real();
        for (const cplx& v : truth.samples) {
            wmin = std::min(wmin, v.real());
            wmax = std::max(wmax, v.real());
        }
    }
    const ErrorDomain domain = spec.error_domain == ErrorDomain::kOmega
                                   ? ErrorDomain::omega(hw)
                                   : ErrorDomain::frame();

    RunResult result;
    auto emit = [&](const std::string& stem, const ScalarField& field) {
        const std::string pgm_path = spec.out_dir + "/" + stem + ".pgm";
        const std::string bkf_path = spec.out_dir + "/" + stem + ".bkf";
        write_bytes(pgm_path, render_pgm(field, wmin, wmax));
        write_field(field, bkf_path);
        result.artifacts.push_back(pgm_path);
        result.artifacts.push_back(bkf_path);
    };
    emit(name + "_truth", truth);

    json timings = json::array();
    const bool want_freq =
        std::find(spec.methods.begin(), spec.methods.end(), "freq") != spec.methods.end();
    auto wants = [&](const std::string& m) {
        return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
    };

    for (double lambda : spec.lambdas) {
        const auto t_lambda = std::chrono::steady_clock::now();
        // input mesh: refinement of the output lattice, rendered directly at
        // full resolution ("brute force over a sufficiently dense mesh")
        const double lambda_eff =
            want_freq ? lambda * std::ldexp(1.0, std::max(1, spec.averaging.freq_depth))
                      : lambda;
        const int refinement =
            spec.input_refinement > 0
                ? spec.input_refinement
                : auto_refinement(lambda_eff, out_grid.spacing, hw);
        const Grid2 in_grid(out_grid.origin, out_grid.spacing / refinement,
                            (out_grid.nx - 1) * refinement + 1,
                            (out_grid.ny - 1) * refinement + 1);
        const ScalarField input = render_phantom(spec.phantom, in_grid);

        const std::vector<double> sigma_grid =
            spec.averaging.sigma_grid.empty()
                ? default_sigma_grid(lambda, out_grid.spacing)
                : spec.averaging.sigma_grid;

        const std::string tag = name + "_lambda" + lambda_tag(lambda);

        // the standard main term is the baseline for every reduction figure
        const ScalarField standard = main_term_grid(input, lambda, out_grid, spec.engine);
        result.report.add(name, lambda, "standard", l1_error(standard, truth, domain));
        if (wants("standard")) emit(tag + "_standard", standard);

        if (wants("mollifier")) {
            const SigmaSearchResult best = best_sigma(standard, truth, sigma_grid, domain);
            result.report.add(name, lambda, "mollifier", best.l1, best.sigma);
            emit(tag + "_mollifier", best.best);
        }
        if (wants("angular") || wants("combined")) {
            const ScalarField angular =
                angular_average_recon(input, lambda, out_grid, spec.averaging, spec.engine);
            if (wants("angular")) {
                result.report.add(name, lambda, "angular", l1_error(angular, truth, domain));
                emit(tag + "_angular", angular);
            }
            if (wants("combined")) {
                const SigmaSearchResult best = best_sigma(angular, truth, sigma_grid, domain);
                result.report.add(name, lambda, "combined", best.l1, best.sigma);
                emit(tag + "_combined", best.best);
            }
        }
        if (want_freq) {
            const ScalarField averaged =
                freq_recon(input, lambda, out_grid, spec.averaging, spec.engine);
            result.report.add(name, lambda, "freq", l1_error(averaged, truth, domain));
            emit(tag + "_freq", averaged);
        }
        const auto dt_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - t_lambda)
                               .count();
        timings.push_back({{"lambda", lambda},
                           {"input_nodes", in_grid.size()},
                           {"refinement", refinement},
                           {"ms", dt_ms}});
    }

    result.csv = error_report_csv(result.report);
    result.table = error_report_table(result.report);
    const std::string csv_path = spec.out_dir + "/summary.csv";
    write_bytes(csv_path, result.csv);
    result.artifacts.push_back(csv_path);

    json manifest;
    manifest["version"] = kVersion;
    manifest["spec"] = json::parse(run_spec_to_json(spec));
    manifest["window"] = {{"min", wmin}, {"max", wmax}};
    manifest["timings"] = timings;
    manifest["total_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - t_start)
                               .count();
    write_bytes(spec.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    result.artifacts.push_back(spec.out_dir + "/manifest.json");
    return result;
}

}  // namespace bklab
