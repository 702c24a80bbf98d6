#pragma once

#include <string>

#include "fpr/types.hpp"

namespace fpr {

struct AlignmentResult {
    ImagePlane aligned;
    int shift_r = 0, shift_c = 0;
    bool flipped = false;
    double sign = 1.0;
};

/// Registers a reconstruction against the truth over the trivial ambiguities:
/// all circular translations, conjugate inversion (the flip, for real
/// signals) and global sign. Ties prefer the smallest shift, then unflipped.
AlignmentResult align_to_truth_detail(const ImagePlane& candidate, const ImagePlane& truth);
ImagePlane align_to_truth(const ImagePlane& candidate, const ImagePlane& truth);

/// 10 log10(255^2 / MSE), capped at 80 dB.
double psnr(const ImagePlane& a, const ImagePlane& b);

/// Mean SSIM over valid 11x11 windows (Gaussian sigma 1.5, K1=0.01, K2=0.03,
/// L=255). Requires images at least 11x11.
double ssim(const ImagePlane& a, const ImagePlane& b);

/// One experiment-grid cell result; serialized as a CSV row.
struct RunReport {
    std::string image;
    std::string algorithm;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    int restart = 0;
    double psnr = 0.0;
    double ssim = 0.0;
    double msnr1 = 0.0;
    double msnr2 = 0.0;
    double residual = 0.0;
    long iterations = 0;
    double wall_ms = 0.0;

    // reproducibility metadata (not part of the CSV schema)
    bool aligned_flip = false;
    int aligned_shift_r = 0, aligned_shift_c = 0;
    std::string rng_name;
    std::string init_kind;
};

std::string run_report_csv_header();
std::string run_report_csv_row(const RunReport& r);

}  // namespace fpr
