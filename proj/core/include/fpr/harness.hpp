#pragma once

#include <filesystem>
#include <optional>

#include "fpr/eval.hpp"
#include "fpr/sim.hpp"
#include "fpr/solvers.hpp"

namespace fpr {

enum class Protocol { random_init, hio_init };

/// One experiment: images x alphas x algorithms, each cell run with
/// `restarts` independent restarts and min-residual selection.
struct ExperimentConfig {
    std::vector<std::string> images;  // paths, or fixture:<name> pseudo-paths
    int side = 128;
    int oversample = 2;
    std::vector<double> alphas = {0.0};
    std::vector<Algorithm> algorithms = {Algorithm::hio};
    Protocol protocol = Protocol::random_init;
    int restarts = 3;
    int iterations = 1200;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    DenoiserSpec denoiser = DenoiserSpec::tv(10.0);
    std::optional<double> lambda_override;
    std::optional<double> rho_override;
    double beta = 0.9;
    int red_inner_iters = 1;
    bool emit_trace = false;
    bool save_reconstructions = true;
    int workers = 0;  // 0 = hardware concurrency

    // hio_init protocol stage sizes
    int hio_init_probes = 50;
    int hio_init_probe_iters = 50;
    int hio_init_refine_iters = 1000;
};

/// Flat key=value text; '#' comments. Keys mirror the ExperimentConfig fields.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Everything fixed about one (image, alpha) instance of the grid.
struct RunContext {
    std::string image_name;
    ImagePlane truth;
    OversamplingMap map;
    Measurement meas;
    std::vector<double> true_amplitudes;
    double alpha = 0.0;
};

RunContext make_run_context(const ExperimentConfig& cfg, const std::string& image_name,
                            const ImagePlane& truth, double alpha);

struct ProtocolOutcome {
    RunReport report;              // selected restart, aligned metrics
    ImagePlane reconstruction;     // aligned
    std::optional<RunReport> init_report;  // hio_init protocol only
    std::optional<ImagePlane> init_reconstruction;
    std::vector<std::vector<double>> traces;  // per restart, per iteration residual (if enabled)
};

/// Shared random start, full schedule, best of `restarts` by residual.
ProtocolOutcome protocol_random_init(const ExperimentConfig& cfg, const RunContext& ctx,
                                     Algorithm algorithm);

/// 50x50-iteration HIO probes, min-residual survivor refined by a long HIO
/// run, which then initializes the algorithm; repeated per restart.
ProtocolOutcome protocol_hio_init(const ExperimentConfig& cfg, const RunContext& ctx,
                                  Algorithm algorithm);

/// The shared random initial point of restart r: i.i.d. uniform [0,255] real
/// parts on the extended support, zero elsewhere.
ComplexField random_init_field(const ExperimentConfig& cfg, const RunContext& ctx, int restart);

/// Runs the whole grid (parallel across cells), writes metrics.csv, aligned
/// reconstructions and optional residual traces under cfg.out_dir; returns
/// all emitted reports in CSV order.
std::vector<RunReport> run_experiment(const ExperimentConfig& cfg);

/// Loads a path, or synthesizes a fixture for "fixture:<name>"; resizes to
/// cfg.side.
ImagePlane load_experiment_image(const ExperimentConfig& cfg, const std::string& name);

SolverConfig make_solver_config(const ExperimentConfig& cfg, Algorithm algorithm);

}  // namespace fpr
