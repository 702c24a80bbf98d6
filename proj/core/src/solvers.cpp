#include "fpr/solvers.hpp"

#include <cmath>
#include <numeric>

namespace fpr {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::hio: return "hio";
        case Algorithm::er: return "er";
        case Algorithm::hpr: return "hpr";
        case Algorithm::oss: return "oss";
        case Algorithm::pnp_admm: return "pnp_admm";
        case Algorithm::prred: return "prred";
        case Algorithm::red_ita_f: return "red_ita_f";
        case Algorithm::red_ita_s: return "red_ita_s";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::hio, Algorithm::er, Algorithm::hpr, Algorithm::oss,
                        Algorithm::pnp_admm, Algorithm::prred, Algorithm::red_ita_f,
                        Algorithm::red_ita_s})
        if (name == algorithm_name(a)) return a;
    return std::nullopt;
}

SolverState make_initial_state(const ComplexField& x0, const OversamplingMap& map) {
    detail::require(x0.side == map.padded_side, "make_initial_state: field does not match map");
    SolverState s;
    s.z = x0;
    s.u = ComplexField::zeros(map.padded_side);
    s.xi = ComplexField::zeros(map.padded_side);
    s.x = extract(x0, map);
    return s;
}

std::vector<ScheduleStage> default_schedule(int total_iterations) {
    detail::require(total_iterations >= 0, "default_schedule: negative iteration count");
    const std::vector<double> sigmas = {60.0, 40.0, 20.0, 10.0};
    std::vector<ScheduleStage> stages;
    const int per = total_iterations / 4;
    int assigned = 0;
    for (size_t i = 0; i < sigmas.size(); ++i) {
        ScheduleStage st;
        st.denoiser_sigma = sigmas[i];
        st.iterations = (i + 1 == sigmas.size()) ? total_iterations - assigned : per;
        assigned += st.iterations;
        stages.push_back(st);
    }
    return stages;
}

int SolverConfig::total_iterations() const {
    int total = 0;
    for (const ScheduleStage& s : schedule) total += s.iterations;
    return total;
}

double lambda_coefficient(Algorithm a) {
    switch (a) {
        case Algorithm::red_ita_f:
        case Algorithm::red_ita_s: return 0.025;
        case Algorithm::prred: return 0.05;
        case Algorithm::pnp_admm: return 0.01;
        default: return 0.0;
    }
}

ComplexField hio_step(const ComplexField& xt, const Measurement& meas, const ConstraintSet& support,
                      double beta) {
    detail::require(support.has_mask(), "hio_step: constraint must carry a support mask");
    detail::require(support.mask_side == xt.side, "hio_step: mask side mismatch");
    const ComplexField zt = project_measurement(xt, meas);
    const bool nonneg = support.has_nonneg();
    ComplexField out = ComplexField::zeros(xt.side);
    for (size_t i = 0; i < out.values.size(); ++i) {
        const Complex z = zt.values[i];
        const Complex x = xt.values[i];
        bool keep = support.mask[i] != 0;
        if (keep && nonneg)
            keep = ((1.0 + beta) * z - x).real() >= 0.0;
        out.values[i] = keep ? z : x - beta * z;
    }
    return out;
}

ComplexField er_step(const ComplexField& xt, const Measurement& meas, const ConstraintSet& support) {
    detail::require(support.has_mask(), "er_step: constraint must carry a support mask");
    return project_constraint(project_measurement(xt, meas), support);
}

ComplexField lowpass_gaussian(const ComplexField& v, double filter_sigma) {
    detail::require(filter_sigma > 0.0, "lowpass_gaussian: filter width must be positive");
    ComplexField spec = dft2(v);
    const int side = v.side;
    const double inv2s2 = 1.0 / (2.0 * filter_sigma * filter_sigma);
    for (int r = 0; r < side; ++r) {
        const int kr = (r <= side / 2) ? r : r - side;
        for (int c = 0; c < side; ++c) {
            const int kc = (c <= side / 2) ? c : c - side;
            spec.at(r, c) *= std::exp(-(static_cast<double>(kr) * kr + static_cast<double>(kc) * kc) * inv2s2);
        }
    }
    return idft2(spec);
}

ComplexField oss_step(const ComplexField& xt, const Measurement& meas, const ConstraintSet& support,
                      double beta, double filter_sigma) {
    ComplexField h = hio_step(xt, meas, support, beta);
    const ComplexField smooth = lowpass_gaussian(h, filter_sigma);
    for (size_t i = 0; i < h.values.size(); ++i)
        if (!support.mask[i]) h.values[i] = smooth.values[i];
    return h;
}

SolverState pnp_admm_step(const SolverState& s, const Measurement& meas, const OversamplingMap& map,
                          double rho, const DenoiserSpec& denoiser) {
    detail::require(rho > 0.0, "pnp_admm_step: rho must be positive");
    (void)rho;  // the denoiser stands in for the whole prox; rho cancels
    SolverState next = s;
    ComplexField v = s.z;
    for (size_t i = 0; i < v.values.size(); ++i) v.values[i] += s.u.values[i];
    next.x = apply_denoiser(extract(v, map), denoiser);
    const ComplexField xt = embed(next.x, map);
    ComplexField zin = xt;
    for (size_t i = 0; i < zin.values.size(); ++i) zin.values[i] -= s.u.values[i];
    next.z = project_measurement(zin, meas);
    next.u = s.u;
    for (size_t i = 0; i < next.u.values.size(); ++i)
        next.u.values[i] += next.z.values[i] - xt.values[i];
    next.iter = s.iter + 1;
    return next;
}

ImagePlane amplitude_loss_gradient(const ImagePlane& x, const Measurement& meas,
                                   const OversamplingMap& map) {
    const ComplexField spec = dft2(embed(x, map));
    detail::require(spec.side == meas.side, "amplitude_loss_gradient: measurement side mismatch");
    ComplexField d = ComplexField::zeros(spec.side);
    for (int i = 0; i < spec.bin_count(); ++i) {
        const double a = std::abs(spec.values[i]);
        if (a == 0.0) continue;  // subgradient choice: zero contribution
        d.values[i] = (a - meas.amplitudes[i]) * (spec.values[i] / a);
    }
    ImagePlane g = extract(idft2(d), map);
    const double mn = static_cast<double>(map.m()) / map.n();
    for (double& v : g.values) v *= mn;
    return g;
}

ImagePlane prred_step(const ImagePlane& x, const Measurement& meas, const OversamplingMap& map,
                      double mu, const RedParams& red) {
    detail::require(mu > 0.0, "prred_step: mu must be positive");
    const ImagePlane g = amplitude_loss_gradient(x, meas, map);
    ImagePlane forward = x;
    for (size_t i = 0; i < forward.values.size(); ++i) forward.values[i] -= mu * g.values[i];
    return prox_red(forward, mu, red);
}

SolverState red_ita_f_step(const SolverState& s, const Measurement& meas, const OversamplingMap& map,
                           double rho, const RedParams& red) {
    detail::require(rho > 0.0, "red_ita_f_step: rho must be positive");
    SolverState next = s;
    ComplexField v = s.z;
    for (size_t i = 0; i < v.values.size(); ++i) v.values[i] += s.u.values[i];
    const double tau = static_cast<double>(map.n()) / (static_cast<double>(map.m()) * rho);
    next.x = prox_red(extract(v, map), tau, red);
    const ComplexField xt = embed(next.x, map);
    ComplexField zin = xt;
    for (size_t i = 0; i < zin.values.size(); ++i) zin.values[i] -= s.u.values[i];
    next.z = prox_amplitude(zin, meas, 1.0 / rho);
    next.u = s.u;
    for (size_t i = 0; i < next.u.values.size(); ++i)
        next.u.values[i] += next.z.values[i] - xt.values[i];
    next.iter = s.iter + 1;
    return next;
}

SolverState red_ita_s_step(const SolverState& s, const Measurement& meas, const OversamplingMap& map,
                           double rho, const RedParams& red) {
    detail::require(rho > 0.0, "red_ita_s_step: rho must be positive");
    SolverState next = s;
    ComplexField v = s.z;
    for (size_t i = 0; i < v.values.size(); ++i) v.values[i] += s.u.values[i] - s.xi.values[i];
    const double tau = static_cast<double>(map.n()) / (static_cast<double>(map.m()) * rho);
    next.x = prox_red(extract(v, map), tau, red);
    const ComplexField xt = embed(next.x, map);
    ComplexField zin = xt;
    for (size_t i = 0; i < zin.values.size(); ++i) zin.values[i] += s.xi.values[i] - s.u.values[i];
    next.z = project_measurement(zin, meas);
    const double shrink = rho / (rho + 1.0);
    next.xi = ComplexField::zeros(xt.side);
    for (size_t i = 0; i < next.xi.values.size(); ++i)
        next.xi.values[i] = shrink * (next.z.values[i] - xt.values[i] + s.u.values[i]);
    next.u = s.u;
    for (size_t i = 0; i < next.u.values.size(); ++i)
        next.u.values[i] += next.z.values[i] - xt.values[i] - next.xi.values[i];
    next.iter = s.iter + 1;
    return next;
}

double residual(const ImagePlane& x, const Measurement& meas, const OversamplingMap& map) {
    const std::vector<double> amps = field_amplitudes(embed(x, map));
    detail::require(static_cast<int>(amps.size()) == meas.bin_count(),
                    "residual: measurement side mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < amps.size(); ++i) {
        const double d = meas.amplitudes[i] - amps[i];
        acc += d * d;
    }
    return 0.5 * acc;
}

namespace {

bool finite(const ComplexField& v) {
    for (const Complex& z : v.values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool finite(const ImagePlane& x) {
    for (double v : x.values)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

SolveResult run_solver(const SolverState& init, const SolverConfig& config, const Measurement& meas,
                       const OversamplingMap& map, const IterationHook& hook) {
    for (const ScheduleStage& st : config.schedule)
        detail::require(st.iterations >= 0, "run_solver: stage iteration counts must be nonnegative");

    const double lambda_base = config.lambda_override
                                   ? *config.lambda_override
                                   : lambda_coefficient(config.algorithm) * meas.sigma_bar * meas.sigma_bar;

    const ConstraintSet padded_support = ConstraintSet::padded_block(
        map, config.algorithm == Algorithm::hpr);

    SolverState state = init;
    ComplexField padded = init.z;  // projection-algorithm iterate
    ImagePlane object = init.x;    // prRED iterate

    const int total = config.total_iterations();
    const int oss_stage_len =
        std::max(1, (config.oss_stages > 0) ? (total + config.oss_stages - 1) / config.oss_stages : total);

    SolveResult result;
    result.stage_residuals.reserve(config.schedule.size());

    long global_iter = 0;
    for (size_t stage_idx = 0; stage_idx < config.schedule.size(); ++stage_idx) {
        const ScheduleStage& stage = config.schedule[stage_idx];
        const double lambda = lambda_base * stage.lambda_scale;
        const double rho = config.rho_override ? (*config.rho_override * stage.lambda_scale)
                                               : 0.5 * lambda;

        RedParams red = config.red;
        red.lambda = lambda;
        red.denoiser = config.red.denoiser.with_strength(stage.denoiser_sigma);

        const double mu = (config.mu > 0.0) ? config.mu
                                            : static_cast<double>(map.n()) / map.m();

        for (int it = 0; it < stage.iterations; ++it, ++global_iter) {
            switch (config.algorithm) {
                case Algorithm::hio:
                case Algorithm::hpr:
                    padded = hio_step(padded, meas, padded_support, config.beta);
                    break;
                case Algorithm::er:
                    padded = er_step(padded, meas, padded_support);
                    break;
                case Algorithm::oss: {
                    const int oss_stage = static_cast<int>(global_iter / oss_stage_len);
                    const double full = static_cast<double>(map.padded_side);
                    const double frac =
                        (config.oss_stages <= 1)
                            ? 1.0
                            : 1.0 - (1.0 - config.oss_filter_floor) *
                                        (static_cast<double>(oss_stage) / (config.oss_stages - 1));
                    padded = oss_step(padded, meas, padded_support, config.beta, full * frac);
                    break;
                }
                case Algorithm::pnp_admm:
                    state = pnp_admm_step(state, meas, map, std::max(rho, 1e-12), red.denoiser);
                    break;
                case Algorithm::prred:
                    object = prred_step(object, meas, map, mu, red);
                    break;
                case Algorithm::red_ita_f:
                    state = red_ita_f_step(state, meas, map, rho, red);
                    break;
                case Algorithm::red_ita_s:
                    state = red_ita_s_step(state, meas, map, rho, red);
                    break;
            }
            if (hook) {
                const IterationEvent ev{global_iter, static_cast<int>(stage_idx), stage.denoiser_sigma};
                switch (config.algorithm) {
                    case Algorithm::hio:
                    case Algorithm::hpr:
                    case Algorithm::er:
                    case Algorithm::oss:
                        hook(ev, extract(padded, map));
                        break;
                    case Algorithm::prred:
                        hook(ev, object);
                        break;
                    default:
                        hook(ev, state.x);
                        break;
                }
            }
        }

        // Fold the iterate back into a single state snapshot per stage.
        switch (config.algorithm) {
            case Algorithm::hio:
            case Algorithm::hpr:
            case Algorithm::er:
            case Algorithm::oss:
                state.z = padded;
                state.x = extract(padded, map);
                break;
            case Algorithm::prred:
                state.x = object;
                state.z = embed(object, map);
                break;
            default:
                break;
        }
        state.iter = global_iter;
        if (!finite(state.x) || !finite(state.z))
            throw std::runtime_error(std::string("run_solver: non-finite state in ") +
                                     algorithm_name(config.algorithm) + " at iteration " +
                                     std::to_string(global_iter));
        result.stage_residuals.push_back(residual(state.x, meas, map));
    }

    result.image = state.x;
    result.iterations = global_iter;
    result.final_state = std::move(state);
    return result;
}

}  // namespace fpr
