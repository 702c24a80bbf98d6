#pragma once

#include "fpr/fourier.hpp"
#include "fpr/grid.hpp"

namespace fpr {

/// Gaussian approximation of shot noise on the Fourier intensity:
/// y^2 = |q|^2 + w, w_i ~ N(0, alpha^2 |q_i|^2).
struct NoiseModel {
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

/// Forward model. Negative noisy intensities clamp to zero before the square
/// root; sigma_bar is the RMS of (y - |q|), or the 0.1 sentinel when alpha=0.
Measurement synthesize_measurement(const ImagePlane& x, const OversamplingMap& map,
                                   const NoiseModel& noise);

/// Measurement SNR in dB. kind 1 compares intensities, kind 2 amplitudes:
///   MSNR1 = 10 log10(|| |q|^2 || / || y^2 - |q|^2 ||)
///   MSNR2 = 20 log10(|| |q| ||   / || y   - |q|   ||)
/// Returns +inf when the noise term vanishes.
double msnr(const Measurement& meas, const std::vector<double>& true_amplitudes, int kind);

}  // namespace fpr
