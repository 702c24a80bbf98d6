#pragma once

#include "fpr/cnn.hpp"
#include "fpr/types.hpp"

namespace fpr {

enum class DenoiserKind { identity, gaussian, median, tv, cnn };

/// Pluggable denoiser D(.) used inside RED and PnP. `strength` is the nominal
/// noise std (in [0,255] units) the denoiser targets; with_strength() derives
/// the per-kind parameters from it so a solver schedule can swap strengths.
struct DenoiserSpec {
    DenoiserKind kind = DenoiserKind::identity;
    double strength = 0.0;

    double gaussian_sigma = 1.5;  // blur width, pixels
    int median_window = 3;
    double tv_weight = 10.0;
    int tv_iters = 30;
    std::shared_ptr<const CnnModel> model;

    static DenoiserSpec identity();
    static DenoiserSpec gaussian(double sigma_blur);
    static DenoiserSpec median(int window = 3);
    static DenoiserSpec tv(double weight, int iters = 30);
    static DenoiserSpec cnn(std::shared_ptr<const CnnModel> model);

    /// Re-target the denoiser at noise std sigma (the 60/40/20/10 schedule).
    DenoiserSpec with_strength(double sigma) const;
};

ImagePlane apply_denoiser(const ImagePlane& x, const DenoiserSpec& spec);

/// Isotropic total variation with forward differences; the quantity the tv
/// denoiser is guaranteed not to increase.
double total_variation(const ImagePlane& x);

}  // namespace fpr
