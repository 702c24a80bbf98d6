#pragma once

#include "fpr/denoise.hpp"
#include "fpr/grid.hpp"
#include "fpr/types.hpp"

namespace fpr {

/// Parameters of the regularizer R(x) = I_C(x) + (lambda/2) <x, x - D(x)>.
/// fixed_point_iters is the p of the truncated prox evaluation; p = 1 in the
/// solvers' default configuration.
struct RedParams {
    double lambda = 0.0;
    int fixed_point_iters = 1;
    ConstraintSet constraint;
    DenoiserSpec denoiser;
};

/// (lambda/2) <x, x - D(x)>, the explicit RED penalty value.
double red_value(const ImagePlane& x, const RedParams& params);

/// Approximate prox_{tau R}(s): p rounds of
///   s <- Pi_C((s0 + lambda*tau*D(s)) / (1 + lambda*tau))
/// starting from s0 = s.
ImagePlane prox_red(const ImagePlane& s, double tau, const RedParams& params);

}  // namespace fpr
