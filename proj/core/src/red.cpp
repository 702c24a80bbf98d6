#include "fpr/red.hpp"

namespace fpr {

double red_value(const ImagePlane& x, const RedParams& params) {
    detail::require(params.lambda >= 0.0, "red_value: lambda must be nonnegative");
    if (params.lambda == 0.0) return 0.0;
    const ImagePlane dx = apply_denoiser(x, params.denoiser);
    double inner = 0.0;
    for (size_t i = 0; i < x.values.size(); ++i)
        inner += x.values[i] * (x.values[i] - dx.values[i]);
    return 0.5 * params.lambda * inner;
}

ImagePlane prox_red(const ImagePlane& s, double tau, const RedParams& params) {
    detail::require(tau > 0.0, "prox_red: tau must be positive");
    detail::require(params.lambda >= 0.0, "prox_red: lambda must be nonnegative");
    detail::require(params.fixed_point_iters >= 1, "prox_red: p must be >= 1");

    const double lt = params.lambda * tau;
    if (lt == 0.0) return project_constraint(s, params.constraint);

    const double inv = 1.0 / (1.0 + lt);
    ImagePlane cur = s;
    for (int it = 0; it < params.fixed_point_iters; ++it) {
        const ImagePlane den = apply_denoiser(cur, params.denoiser);
        ImagePlane next = ImagePlane::zeros(s.side);
        for (size_t i = 0; i < next.values.size(); ++i)
            next.values[i] = inv * (s.values[i] + lt * den.values[i]);
        cur = project_constraint(next, params.constraint);
    }
    return cur;
}

}  // namespace fpr
