#include "fpr/harness.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fpr/fixtures.hpp"
#include "fpr/image_io.hpp"
#include "fpr/rng.hpp"

namespace fpr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::uint64_t name_tag(const std::string& name) {
    // FNV-1a, stable across runs and platforms
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

DenoiserSpec parse_denoiser(const std::string& text) {
    if (text == "identity") return DenoiserSpec::identity();
    if (text == "gaussian") return DenoiserSpec::gaussian(1.5);
    if (text == "median") return DenoiserSpec::median(3);
    if (text == "tv") return DenoiserSpec::tv(10.0);
    if (text.rfind("cnn:", 0) == 0) {
        auto model = std::make_shared<CnnModel>(load_cnn(text.substr(4)));
        return DenoiserSpec::cnn(std::move(model));
    }
    throw std::invalid_argument("unknown denoiser: " + text +
                                " (want identity|gaussian|median|tv|cnn:<path>)");
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        detail::require(eq != std::string::npos,
                        "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "images") {
            cfg.images = split_list(value);
        } else if (key == "side") {
            cfg.side = std::stoi(value);
        } else if (key == "oversample") {
            cfg.oversample = std::stoi(value);
        } else if (key == "alpha") {
            cfg.alphas.clear();
            for (const std::string& a : split_list(value)) cfg.alphas.push_back(std::stod(a));
        } else if (key == "algorithms" || key == "algorithm") {
            cfg.algorithms.clear();
            for (const std::string& a : split_list(value)) {
                const auto alg = parse_algorithm(a);
                detail::require(alg.has_value(), "config: unknown algorithm " + a);
                cfg.algorithms.push_back(*alg);
            }
        } else if (key == "protocol") {
            if (value == "random_init") cfg.protocol = Protocol::random_init;
            else if (value == "hio_init") cfg.protocol = Protocol::hio_init;
            else throw std::invalid_argument("config: unknown protocol " + value);
        } else if (key == "restarts") {
            cfg.restarts = std::stoi(value);
        } else if (key == "iterations" || key == "iters") {
            cfg.iterations = std::stoi(value);
        } else if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "denoiser") {
            cfg.denoiser = parse_denoiser(value);
        } else if (key == "lambda") {
            cfg.lambda_override = std::stod(value);
        } else if (key == "rho") {
            cfg.rho_override = std::stod(value);
        } else if (key == "beta") {
            cfg.beta = std::stod(value);
        } else if (key == "p" || key == "red_inner_iters") {
            cfg.red_inner_iters = std::stoi(value);
        } else if (key == "trace") {
            cfg.emit_trace = value == "1" || value == "true";
        } else if (key == "save_reconstructions") {
            cfg.save_reconstructions = value == "1" || value == "true";
        } else if (key == "workers") {
            cfg.workers = std::stoi(value);
        } else if (key == "hio_init_probes") {
            cfg.hio_init_probes = std::stoi(value);
        } else if (key == "hio_init_probe_iters") {
            cfg.hio_init_probe_iters = std::stoi(value);
        } else if (key == "hio_init_refine_iters") {
            cfg.hio_init_refine_iters = std::stoi(value);
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    detail::require(cfg.restarts >= 1, "config: restarts must be >= 1");
    detail::require(cfg.iterations >= 0, "config: iterations must be >= 0");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), "load_config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg = parse_config_text(ss.str());
    for (const std::string& img : cfg.images) {
        if (img.rfind("fixture:", 0) == 0) continue;
        detail::require(std::filesystem::exists(img), "config: image file missing: " + img);
    }
    return cfg;
}

ImagePlane load_experiment_image(const ExperimentConfig& cfg, const std::string& name) {
    if (name.rfind("fixture:", 0) == 0) return fixture_image(name.substr(8), cfg.side);
    ImagePlane img = load_image(name);
    if (img.side != cfg.side) img = resize_bilinear(img, cfg.side);
    return img;
}

RunContext make_run_context(const ExperimentConfig& cfg, const std::string& image_name,
                            const ImagePlane& truth, double alpha) {
    detail::require(cfg.side >= 11, "experiment side must be at least the 11x11 SSIM window");
    OversamplingMap map(cfg.side, cfg.oversample);
    NoiseModel noise;
    noise.alpha = alpha;
    noise.seed = derive_seed(cfg.seed, name_tag(image_name), name_tag("meas"),
                             static_cast<std::uint64_t>(alpha * 1024.0));
    RunContext ctx{image_name, truth, map, synthesize_measurement(truth, map, noise),
                   field_amplitudes(embed(truth, map)), alpha};
    return ctx;
}

SolverConfig make_solver_config(const ExperimentConfig& cfg, Algorithm algorithm) {
    SolverConfig sc;
    sc.algorithm = algorithm;
    sc.beta = cfg.beta;
    sc.lambda_override = cfg.lambda_override;
    sc.rho_override = cfg.rho_override;
    sc.red.fixed_point_iters = cfg.red_inner_iters;
    sc.red.constraint = ConstraintSet::nonneg();  // object-domain C of the regularizer
    sc.red.denoiser = cfg.denoiser;
    sc.schedule = default_schedule(cfg.iterations);
    return sc;
}

ComplexField random_init_field(const ExperimentConfig& cfg, const RunContext& ctx, int restart) {
    SplitMix64 rng(derive_seed(cfg.seed, name_tag(ctx.image_name),
                               static_cast<std::uint64_t>(ctx.alpha * 1024.0), name_tag("init"),
                               static_cast<std::uint64_t>(restart)));
    ComplexField field = ComplexField::zeros(ctx.map.padded_side);
    for (int r = 0; r < ctx.map.object_side; ++r)
        for (int c = 0; c < ctx.map.object_side; ++c)
            field.at(r, c) = Complex(rng.uniform(0.0, 255.0), 0.0);
    return field;
}

namespace {

RunReport make_report(const ExperimentConfig& cfg, const RunContext& ctx, const std::string& algo,
                      const ImagePlane& estimate, double final_residual, long iterations,
                      int restart, double wall_ms, ImagePlane* aligned_out) {
    const AlignmentResult aligned = align_to_truth_detail(estimate, ctx.truth);
    RunReport r;
    r.image = ctx.image_name;
    r.algorithm = algo;
    r.alpha = ctx.alpha;
    r.seed = cfg.seed;
    r.restart = restart;
    r.psnr = psnr(aligned.aligned, ctx.truth);
    r.ssim = ssim(aligned.aligned, ctx.truth);
    r.msnr1 = msnr(ctx.meas, ctx.true_amplitudes, 1);
    r.msnr2 = msnr(ctx.meas, ctx.true_amplitudes, 2);
    r.residual = final_residual;
    r.iterations = iterations;
    r.wall_ms = wall_ms;
    r.aligned_flip = aligned.flipped;
    r.aligned_shift_r = aligned.shift_r;
    r.aligned_shift_c = aligned.shift_c;
    r.rng_name = SplitMix64::name();
    r.init_kind = cfg.protocol == Protocol::random_init ? "uniform_block" : "hio_init";
    if (aligned_out) *aligned_out = aligned.aligned;
    return r;
}

struct RestartRun {
    SolveResult solve;
    double residual = 0.0;
    double wall_ms = 0.0;
    std::vector<double> trace;
};

RestartRun run_one(const ExperimentConfig& cfg, const RunContext& ctx, const SolverConfig& sc,
                   const SolverState& init) {
    RestartRun run;
    const double t0 = now_ms();
    IterationHook hook;
    if (cfg.emit_trace) {
        hook = [&run, &ctx](const IterationEvent&, const ImagePlane& est) {
            run.trace.push_back(residual(est, ctx.meas, ctx.map));
        };
    }
    run.solve = run_solver(init, sc, ctx.meas, ctx.map, hook);
    run.wall_ms = now_ms() - t0;
    run.residual = run.solve.stage_residuals.empty() ? residual(run.solve.image, ctx.meas, ctx.map)
                                                     : run.solve.stage_residuals.back();
    return run;
}

}  // namespace

ProtocolOutcome protocol_random_init(const ExperimentConfig& cfg, const RunContext& ctx,
                                     Algorithm algorithm) {
    const SolverConfig sc = make_solver_config(cfg, algorithm);
    ProtocolOutcome out;
    int best = -1;
    std::vector<RestartRun> runs;
    runs.reserve(static_cast<size_t>(cfg.restarts));
    for (int r = 0; r < cfg.restarts; ++r) {
        const SolverState init = make_initial_state(random_init_field(cfg, ctx, r), ctx.map);
        runs.push_back(run_one(cfg, ctx, sc, init));
        if (best < 0 || runs[static_cast<size_t>(r)].residual < runs[static_cast<size_t>(best)].residual)
            best = r;
        if (cfg.emit_trace) out.traces.push_back(runs.back().trace);
    }
    const RestartRun& sel = runs[static_cast<size_t>(best)];
    out.report = make_report(cfg, ctx, algorithm_name(algorithm), sel.solve.image, sel.residual,
                             sel.solve.iterations, best, sel.wall_ms, &out.reconstruction);
    return out;
}

namespace {

struct HioInit {
    SolverState state;      // ready to hand to any algorithm
    ImagePlane image;       // extract of the refined padded iterate
    double residual = 0.0;
    long hio_iterations = 0;
    double wall_ms = 0.0;
};

HioInit compute_hio_init(const ExperimentConfig& cfg, const RunContext& ctx, int restart) {
    const double t0 = now_ms();
    const ConstraintSet support = ConstraintSet::padded_block(ctx.map, false);
    HioInit init;

    ComplexField best_probe;
    double best_res = 0.0;
    for (int probe = 0; probe < cfg.hio_init_probes; ++probe) {
        SplitMix64 rng(derive_seed(cfg.seed, name_tag(ctx.image_name),
                                   static_cast<std::uint64_t>(ctx.alpha * 1024.0),
                                   name_tag("hio_probe"), static_cast<std::uint64_t>(restart),
                                   static_cast<std::uint64_t>(probe)));
        ComplexField field = ComplexField::zeros(ctx.map.padded_side);
        for (int r = 0; r < ctx.map.object_side; ++r)
            for (int c = 0; c < ctx.map.object_side; ++c)
                field.at(r, c) = Complex(rng.uniform(0.0, 255.0), 0.0);
        for (int it = 0; it < cfg.hio_init_probe_iters; ++it) {
            field = hio_step(field, ctx.meas, support, cfg.beta);
            ++init.hio_iterations;
        }
        const double res = residual(extract(field, ctx.map), ctx.meas, ctx.map);
        if (probe == 0 || res < best_res) {
            best_res = res;
            best_probe = field;
        }
    }

    ComplexField refined = best_probe;
    for (int it = 0; it < cfg.hio_init_refine_iters; ++it) {
        refined = hio_step(refined, ctx.meas, support, cfg.beta);
        ++init.hio_iterations;
    }

    init.state = make_initial_state(refined, ctx.map);
    init.image = init.state.x;
    init.residual = residual(init.image, ctx.meas, ctx.map);
    init.wall_ms = now_ms() - t0;
    return init;
}

}  // namespace

ProtocolOutcome protocol_hio_init(const ExperimentConfig& cfg, const RunContext& ctx,
                                  Algorithm algorithm) {
    const SolverConfig sc = make_solver_config(cfg, algorithm);
    ProtocolOutcome out;
    int best = -1, best_init = -1;
    std::vector<RestartRun> runs;
    std::vector<HioInit> inits;
    for (int r = 0; r < cfg.restarts; ++r) {
        inits.push_back(compute_hio_init(cfg, ctx, r));
        runs.push_back(run_one(cfg, ctx, sc, inits.back().state));
        if (best < 0 || runs[static_cast<size_t>(r)].residual < runs[static_cast<size_t>(best)].residual)
            best = r;
        if (best_init < 0 || inits[static_cast<size_t>(r)].residual < inits[static_cast<size_t>(best_init)].residual)
            best_init = r;
        if (cfg.emit_trace) out.traces.push_back(runs.back().trace);
    }
    const RestartRun& sel = runs[static_cast<size_t>(best)];
    out.report = make_report(cfg, ctx, algorithm_name(algorithm), sel.solve.image, sel.residual,
                             sel.solve.iterations + inits[static_cast<size_t>(best)].hio_iterations,
                             best, sel.wall_ms + inits[static_cast<size_t>(best)].wall_ms,
                             &out.reconstruction);

    const HioInit& isel = inits[static_cast<size_t>(best_init)];
    ImagePlane init_aligned;
    out.init_report = make_report(cfg, ctx, "hio_init", isel.image, isel.residual,
                                  isel.hio_iterations, best_init, isel.wall_ms, &init_aligned);
    out.init_reconstruction = std::move(init_aligned);
    return out;
}

std::vector<RunReport> run_experiment(const ExperimentConfig& cfg) {
    detail::require(!cfg.images.empty(), "run_experiment: no images configured");
    detail::require(!cfg.algorithms.empty(), "run_experiment: no algorithms configured");
    std::filesystem::create_directories(cfg.out_dir);

    struct Cell {
        size_t image_idx, alpha_idx, algo_idx;
    };
    std::vector<Cell> cells;
    for (size_t i = 0; i < cfg.images.size(); ++i)
        for (size_t a = 0; a < cfg.alphas.size(); ++a)
            for (size_t g = 0; g < cfg.algorithms.size(); ++g) cells.push_back({i, a, g});

    // Contexts are shared per (image, alpha); build them up front.
    std::vector<std::vector<RunContext>> contexts(cfg.images.size());
    for (size_t i = 0; i < cfg.images.size(); ++i) {
        const ImagePlane truth = load_experiment_image(cfg, cfg.images[i]);
        std::string name = cfg.images[i];
        if (name.rfind("fixture:", 0) == 0)
            name = name.substr(8);
        else
            name = std::filesystem::path(name).stem().string();
        for (double alpha : cfg.alphas) contexts[i].push_back(make_run_context(cfg, name, truth, alpha));
    }

    std::vector<ProtocolOutcome> outcomes(cells.size());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (true) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            try {
                const Cell& cell = cells[idx];
                const RunContext& ctx = contexts[cell.image_idx][cell.alpha_idx];
                const Algorithm algo = cfg.algorithms[cell.algo_idx];
                outcomes[idx] = cfg.protocol == Protocol::random_init
                                    ? protocol_random_init(cfg, ctx, algo)
                                    : protocol_hio_init(cfg, ctx, algo);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    unsigned n_workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(cells.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Deterministic emission order: image-major, alpha, then the init pseudo
    // row (hio_init protocol) followed by the algorithms in config order.
    std::vector<RunReport> reports;
    std::ofstream csv(std::filesystem::path(cfg.out_dir) / "metrics.csv", std::ios::trunc);
    detail::require(static_cast<bool>(csv), "run_experiment: cannot write metrics.csv");
    csv << run_report_csv_header() << "\n";

    auto cell_index = [&](size_t i, size_t a, size_t g) {
        return (i * cfg.alphas.size() + a) * cfg.algorithms.size() + g;
    };

    char alpha_buf[32];
    for (size_t i = 0; i < cfg.images.size(); ++i) {
        for (size_t a = 0; a < cfg.alphas.size(); ++a) {
            const RunContext& ctx = contexts[i][a];
            std::snprintf(alpha_buf, sizeof(alpha_buf), "%g", ctx.alpha);
            for (size_t g = 0; g < cfg.algorithms.size(); ++g) {
                const ProtocolOutcome& out = outcomes[cell_index(i, a, g)];
                if (g == 0 && out.init_report) {
                    reports.push_back(*out.init_report);
                    csv << run_report_csv_row(*out.init_report) << "\n";
                    if (cfg.save_reconstructions && out.init_reconstruction)
                        save_image(*out.init_reconstruction,
                                   std::filesystem::path(cfg.out_dir) /
                                       (ctx.image_name + "_hio_init_a" + alpha_buf + ".pgm"));
                }
                reports.push_back(out.report);
                csv << run_report_csv_row(out.report) << "\n";
                const std::string stem = ctx.image_name + "_" + out.report.algorithm + "_a" + alpha_buf;
                if (cfg.save_reconstructions)
                    save_image(out.reconstruction, std::filesystem::path(cfg.out_dir) / (stem + ".pgm"));
                if (cfg.emit_trace && !out.traces.empty()) {
                    std::ofstream trace(std::filesystem::path(cfg.out_dir) / (stem + "_trace.csv"),
                                        std::ios::trunc);
                    trace << "restart,iteration,residual\n";
                    char buf[96];
                    for (size_t rr = 0; rr < out.traces.size(); ++rr)
                        for (size_t it = 0; it < out.traces[rr].size(); ++it) {
                            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", rr, it,
                                          out.traces[rr][it]);
                            trace << buf;
                        }
                }
            }
        }
    }
    return reports;
}

}  // namespace fpr
