#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bklab/averaging.hpp"
#include "bklab/engine.hpp"
#include "bklab/metrics.hpp"
#include "bklab/phantom.hpp"

namespace bklab {

inline constexpr const char* kVersion = "0.1.0";

/// Declarative experiment description, one phantom with a frequency ladder.
struct RunSpec {
    PhantomSpec phantom;
    std::vector<double> lambdas;
    std::vector<std::string> methods;  // subset of standard|mollifier|angular|combined|freq
    EngineConfig engine;
    AveragingParams averaging;
    int output_size = 200;  // ~40,000 reconstruction pixels
    std::string out_dir = "out";
    /// Grayscale window; unset = auto (min/max of the truth phantom, shared
    /// by every panel of the run).
    std::optional<std::pair<double, double>> window;
    ErrorDomain::Kind error_domain = ErrorDomain::kFrame;
    /// Input mesh refinement over the output lattice; 0 = auto from the
    /// oscillation resolution rule per lambda.
    int input_refinement = 0;

    void validate() const;
};

RunSpec parse_run_spec(const std::string& json_text);
RunSpec load_run_spec(const std::string& path);
std::string run_spec_to_json(const RunSpec& spec);

/// Automatic input refinement factor for one lambda (resolution rule with a
/// 1.25 safety margin).
int auto_refinement(double lambda, double out_spacing, double half_width);

struct RunResult {
    ErrorReport report;
    std::vector<std::string> artifacts;  // paths written, in order
    std::string csv;
    std::string table;
};

/// Executes the spec: per (lambda, method) a field snapshot, a PGM image of
/// the real part (row 1 = top), and an error row; plus truth artifacts, a
/// summary CSV and a manifest. `threads` > 0 caps the worker count.
RunResult run(const RunSpec& spec, int threads = 0);

/// Real part affinely mapped onto [0, 255] with round-half-up quantization;
/// a degenerate window produces a midgray image. Returns the PGM P5 bytes.
std::string render_pgm(const ScalarField& f, double window_min, double window_max);

/// The versioned five-phantom benchmark suite with its frequency ladders.
struct SuiteEntry {
    PhantomKind kind;
    std::vector<double> lambdas;
};
std::vector<SuiteEntry> default_suite();

/// RunSpec for one suite entry (preset geometry, spectral engine, standard +
/// mollifier + angular + combined methods, 200^2 output).
RunSpec suite_run_spec(PhantomKind kind, const std::string& out_dir);

}  // namespace bklab
