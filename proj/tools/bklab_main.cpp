// bklab command line driver: declarative reconstruction runs, numerical
// verification suites, and an engine benchmark harness.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "bklab/lemma_checks.hpp"
#include "bklab/run.hpp"
#include "bklab/sobolev.hpp"

namespace {

using namespace bklab;

int env_threads() {
    const char* env = std::getenv("BKLAB_THREADS");
    if (!env) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

/// n x n window on the input lattice spanning roughly [-w, w] about the center
Grid2 nested_window(const Grid2& in, double w, int n) {
    const double h = in.spacing;
    const int stride = std::max(1, static_cast<int>(std::floor(2.0 * w / ((n - 1) * h))));
    const int center = (in.nx - 1) / 2;
    const int start = center - stride * (n / 2);
    return Grid2({in.x(start), in.y(start)}, stride * h, n, n);
}

int cmd_run(const std::vector<std::string>& spec_paths, int threads) {
    for (const std::string& path : spec_paths) {
        RunSpec spec = load_run_spec(path);
        std::cout << "== " << to_string(spec.phantom.kind) << " -> " << spec.out_dir
                  << "\n";
        RunResult result = run(spec, threads);
        std::cout << result.table;
        std::cout << "artifacts: " << result.artifacts.size() << " files in "
                  << spec.out_dir << "\n";
    }
    return 0;
}

bool report_line(const std::string& label, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << label;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    return pass;
}

int cmd_verify_lemmas() {
    bool ok = true;
    {
        // stationary-phase decay on a smooth Gaussian potential
        PhantomSpec g;
        g.kind = PhantomKind::kGaussian;
        g.half_width = 4.0;
        g.gaussian_width = 1.0;
        const ScalarField q = render_phantom(g, Grid2::centered_square(4.0, 1024));
        EngineConfig cfg;
        cfg.engine = EngineKind::kSpectral;
        cfg.spectral_kernel = SpectralKernel::kAnalytic;  // asymptotic ladder
        const SlopeReport rep =
            check_lemma_statphase(q, 2.9, nested_window(q.grid, 1.5, 33), cfg);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "slope %.3f, threshold %.3f", rep.slope,
                      rep.threshold);
        ok &= report_line("stationary-phase decay (Gaussian)",
                          rep.pass && rep.slope <= -0.9, buf);
    }
    {
        const auto rep = check_lemma_freqavg_derivative([](double t) { return t * t; }, 0, 1.0);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "formula %.6f vs fd %.6f", rep.formula,
                      rep.finite_difference);
        ok &= report_line("radial smoothing derivative formula (k=0)", rep.pass, buf);
    }
    {
        std::vector<cplx> bump(513);
        RadialProfile f(1.0, bump);
        for (int i = 0; i < f.nr(); ++i) {
            const double r = f.r(i);
            f.values[i] = (r < 1.0) ? std::pow(1.0 - r * r, 3.0) : 0.0;
        }
        AveragingParams p;
        const IdentityReport rep =
            check_lemma_alambda(f, Grid2::centered_square(1.5, 1024), p);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max |lhs - rhs| = %.2e", rep.max_diff);
        ok &= report_line("frequency-average identity at the origin", rep.pass, buf);
    }
    return ok ? 0 : 1;
}

int cmd_verify_engines() {
    bool ok = true;
    PhantomSpec g;
    g.kind = PhantomKind::kGaussian;
    g.half_width = 1.0;
    g.gaussian_width = 0.35;
    const ScalarField q = render_phantom(g, Grid2::centered_square(1.0, 256));
    const Grid2 out = nested_output_grid(q.grid, 64);
    for (double lambda : {10.0, 40.0}) {
        EngineConfig cfg;
        cfg.engine = EngineKind::kNaive;
        const ScalarField a = main_term_grid(q, lambda, out, cfg);
        cfg.engine = EngineKind::kSeparable;
        const ScalarField b = main_term_grid(q, lambda, out, cfg);
        cfg.engine = EngineKind::kSpectral;
        const ScalarField c = main_term_grid(q, lambda, out, cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
            worst = std::max(worst, std::abs(a.samples[i] - c.samples[i]));
            worst = std::max(worst, std::abs(b.samples[i] - c.samples[i]));
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "lambda %g, pairwise max |diff| = %.2e", lambda,
                      worst);
        ok &= report_line("engine cross-validation", worst <= 1e-3, buf);
    }
    return ok ? 0 : 1;
}

int cmd_bench(const std::string& engine_name, int size, int out_size, double lambda,
              int sample_nodes) {
    using clock = std::chrono::steady_clock;
    PhantomSpec g;
    g.kind = PhantomKind::kGaussian;
    g.half_width = 1.0;
    g.gaussian_width = 0.35;
    const ScalarField q = render_phantom(g, Grid2::centered_square(1.0, size));
    const Grid2 out = nested_output_grid(q.grid, out_size);
    EngineConfig cfg;
    cfg.engine = engine_kind_from_string(engine_name);

    if (cfg.engine == EngineKind::kNaive && sample_nodes > 0 &&
        sample_nodes < out.nx * out.ny) {
        // per-node cost is constant, so time a node subset and scale
        (void)main_term_point(q, PhaseContext(out.node(0, 0), lambda), cfg);  // warm up
        const int count = std::max(1, sample_nodes);
        const auto t0 = clock::now();
        cplx sink{};
        for (int i = 0; i < count; ++i) {
            const int ox = i % out.nx;
            const int oy = (i / out.nx) % out.ny;
            sink += main_term_point(q, PhaseContext(out.node(ox, oy), lambda), cfg);
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        const double per_node = secs / count;
        const double projected = per_node * out.nx * out.ny;
        std::printf("engine=naive input=%d^2 output=%d^2 lambda=%g\n", size, out_size,
                    lambda);
        std::printf("measured %d nodes in %.3f s (%.3e s/node, checksum %.3e)\n", count,
                    secs, per_node, std::abs(sink));
        std::printf("projected_full_s=%.3f (linear per-node extrapolation)\n", projected);
        return 0;
    }

    const auto t0 = clock::now();
    const ScalarField field = main_term_grid(q, lambda, out, cfg);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    double checksum = 0.0;
    for (const cplx& v : field.samples) checksum += std::abs(v);
    std::printf("engine=%s input=%d^2 output=%d^2 lambda=%g\n", engine_name.c_str(), size,
                out_size, lambda);
    std::printf("elapsed_s=%.3f checksum=%.6e\n", secs, checksum);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bklab: quadratic-phase reconstruction laboratory"};
    app.require_subcommand(1);

    std::vector<std::string> spec_paths;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a declarative run spec");
    run_cmd->add_option("specs", spec_paths, "run spec JSON files")
        ->required()
        ->check(CLI::ExistingFile);

    std::string suite = "all";
    CLI::App* verify_cmd = app.add_subcommand("verify", "numerical verification suites");
    verify_cmd->add_option("--suite", suite, "lemmas | engines | all")
        ->check(CLI::IsMember({"lemmas", "engines", "all"}));

    std::string engine_name = "spectral";
    int size = 2048, out_size = 200, sample_nodes = 0;
    double lambda = 10.0;
    CLI::App* bench_cmd = app.add_subcommand("bench", "engine benchmark harness");
    bench_cmd->add_option("--engine", engine_name, "naive | separable | spectral");
    bench_cmd->add_option("--size", size, "input grid nodes per axis");
    bench_cmd->add_option("--out-size", out_size, "output grid nodes per axis");
    bench_cmd->add_option("--lambda", lambda, "frequency");
    bench_cmd->add_option("--sample-nodes", sample_nodes,
                          "naive: time this many nodes and extrapolate");

    CLI11_PARSE(app, argc, argv);

    const int threads = env_threads();
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (run_cmd->parsed()) return cmd_run(spec_paths, threads);
        if (verify_cmd->parsed()) {
            int rc = 0;
            if (suite == "lemmas" || suite == "all") rc |= cmd_verify_lemmas();
            if (suite == "engines" || suite == "all") rc |= cmd_verify_engines();
            return rc;
        }
        if (bench_cmd->parsed())
            return cmd_bench(engine_name, size, out_size, lambda, sample_nodes);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
