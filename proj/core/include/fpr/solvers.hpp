#pragma once

#include <functional>
#include <optional>

#include "fpr/fourier.hpp"
#include "fpr/grid.hpp"
#include "fpr/red.hpp"

namespace fpr {

enum class Algorithm { hio, er, hpr, oss, pnp_admm, prred, red_ita_f, red_ita_s };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

/// Splitting-variable state shared by every solver. Projection algorithms
/// (HIO/ER/HPR/OSS) keep their padded iterate in z; prRED iterates on x; the
/// ADMM solvers use x, z, u and (ITA-S only) xi.
struct SolverState {
    ImagePlane x;
    ComplexField z, u, xi;
    long iter = 0;
};

/// A state whose variables all start from one shared random point x0.
SolverState make_initial_state(const ComplexField& x0, const OversamplingMap& map);

struct ScheduleStage {
    double denoiser_sigma = 0.0;
    int iterations = 0;
    double lambda_scale = 1.0;  // optional per-stage reduction of lambda and rho
};

/// The 60/40/20/10 denoiser-strength ladder, iterations split evenly.
std::vector<ScheduleStage> default_schedule(int total_iterations = 1200);

struct SolverConfig {
    Algorithm algorithm = Algorithm::hio;
    double beta = 0.9;                    // HIO/HPR/OSS feedback
    std::optional<double> lambda_override;  // else coefficient(algorithm) * sigma_bar^2
    std::optional<double> rho_override;     // else lambda / 2
    double mu = 0.0;                        // prRED stepsize; 0 selects n/m
    RedParams red;                          // p, constraint, denoiser kind
    std::vector<ScheduleStage> schedule = default_schedule();
    double oss_filter_floor = 0.1;  // final OSS filter width as a fraction of full bandwidth
    int oss_stages = 10;

    int total_iterations() const;
};

/// lambda = coefficient * sigma_bar^2: 0.025 for the ITA solvers, 0.05 for
/// prRED, 0.01 for PnP-ADMM; zero for the plain projection algorithms.
double lambda_coefficient(Algorithm a);

// --- single steps -----------------------------------------------------------

/// Fienup feedback step on the padded iterate. The constraint must carry a
/// support mask; with support_and_nonneg, in-support pixels whose reflected
/// value (1+beta)z - x has negative real part also take the feedback branch,
/// which at beta = 1 is exactly the HPR recursion.
ComplexField hio_step(const ComplexField& xt, const Measurement& meas, const ConstraintSet& support,
                      double beta);

/// Pi_C(Pi_M(x)).
ComplexField er_step(const ComplexField& xt, const Measurement& meas, const ConstraintSet& support);

/// HIO step, then the out-of-support region is replaced by its Gaussian
/// low-pass-filtered version (width filter_sigma, frequency bins).
ComplexField oss_step(const ComplexField& xt, const Measurement& meas, const ConstraintSet& support,
                      double beta, double filter_sigma);

/// Multiply the spectrum by exp(-|k|^2 / (2 sigma^2)) with centered bin indices.
ComplexField lowpass_gaussian(const ComplexField& v, double filter_sigma);

SolverState pnp_admm_step(const SolverState& s, const Measurement& meas, const OversamplingMap& map,
                          double rho, const DenoiserSpec& denoiser);

ImagePlane prred_step(const ImagePlane& x, const Measurement& meas, const OversamplingMap& map,
                      double mu, const RedParams& red);

/// Subgradient of f(x) = 1/2 ||y - |F O x|||^2; zero-amplitude bins contribute 0.
ImagePlane amplitude_loss_gradient(const ImagePlane& x, const Measurement& meas,
                                   const OversamplingMap& map);

SolverState red_ita_f_step(const SolverState& s, const Measurement& meas, const OversamplingMap& map,
                           double rho, const RedParams& red);

SolverState red_ita_s_step(const SolverState& s, const Measurement& meas, const OversamplingMap& map,
                           double rho, const RedParams& red);

/// 1/2 ||y - |F embed(x)|||^2.
double residual(const ImagePlane& x, const Measurement& meas, const OversamplingMap& map);

// --- schedule-driven driver --------------------------------------------------

struct IterationEvent {
    long iteration = 0;   // 0-based, across all stages
    int stage = 0;
    double denoiser_sigma = 0.0;
};
/// Called after every iteration with the current object-domain estimate.
using IterationHook = std::function<void(const IterationEvent&, const ImagePlane&)>;

struct SolveResult {
    ImagePlane image;
    std::vector<double> stage_residuals;  // residual at the end of each stage
    long iterations = 0;
    SolverState final_state;
};

SolveResult run_solver(const SolverState& init, const SolverConfig& config, const Measurement& meas,
                       const OversamplingMap& map, const IterationHook& hook = {});

}  // namespace fpr
