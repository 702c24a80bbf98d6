#include "fpr/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "fpr/fourier.hpp"

namespace fpr {

namespace {

ImagePlane flip_image(const ImagePlane& x) {
    // Circular conjugate inversion: index i -> (-i) mod side.
    ImagePlane out = ImagePlane::zeros(x.side);
    for (int r = 0; r < x.side; ++r)
        for (int c = 0; c < x.side; ++c)
            out.at(r, c) = x.at((x.side - r) % x.side, (x.side - c) % x.side);
    return out;
}

ImagePlane shift_image(const ImagePlane& x, int sr, int sc) {
    ImagePlane out = ImagePlane::zeros(x.side);
    for (int r = 0; r < x.side; ++r)
        for (int c = 0; c < x.side; ++c)
            out.at(r, c) = x.at(((r - sr) % x.side + x.side) % x.side,
                                ((c - sc) % x.side + x.side) % x.side);
    return out;
}

// Scores of all circular shifts: corr[s] = sum_t truth[t] * cand[t - s],
// computed in one FFT pass.
std::vector<double> correlation_surface(const ImagePlane& cand, const ImagePlane& truth) {
    const int side = truth.side;
    ComplexField a = ComplexField::zeros(side), b = ComplexField::zeros(side);
    for (int i = 0; i < side * side; ++i) {
        a.values[i] = Complex(truth.values[i], 0.0);
        b.values[i] = Complex(cand.values[i], 0.0);
    }
    const ComplexField fa = dft2(a), fb = dft2(b);
    ComplexField spec = ComplexField::zeros(side);
    for (int i = 0; i < side * side; ++i) spec.values[i] = fa.values[i] * std::conj(fb.values[i]);
    const ComplexField corr = idft2(spec);
    std::vector<double> out(corr.values.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = side * corr.values[i].real();
    return out;
}

int wrapped_norm2(int s, int side) {
    const int w = std::min(s, side - s);
    return w * w;
}

}  // namespace

AlignmentResult align_to_truth_detail(const ImagePlane& candidate, const ImagePlane& truth) {
    detail::require(candidate.side == truth.side, "align_to_truth: dimension mismatch");
    const int side = truth.side;
    const ImagePlane flipped = flip_image(candidate);

    struct Best {
        double score = 0.0;
        double abs_score = -1.0;  // any real candidate beats the sentinel
        int sr = 0, sc = 0;
        bool flip = false;
    } best;

    double max_abs = 0.0;
    const std::vector<double> surfaces[2] = {correlation_surface(candidate, truth),
                                             correlation_surface(flipped, truth)};
    for (const auto& s : surfaces)
        for (double v : s) max_abs = std::max(max_abs, std::abs(v));
    const double tie_eps = 1e-9 * std::max(max_abs, 1e-300);

    for (int flip = 0; flip < 2; ++flip) {
        const std::vector<double>& surface = surfaces[flip];
        for (int sr = 0; sr < side; ++sr) {
            for (int sc = 0; sc < side; ++sc) {
                const double score = std::abs(surface[static_cast<size_t>(sr) * side + sc]);
                const double diff = score - best.abs_score;
                bool better = diff > tie_eps;
                if (!better && diff > -tie_eps && best.abs_score >= 0.0) {
                    // tie: smallest wrapped shift, then lexicographic, then unflipped
                    const int dn = wrapped_norm2(sr, side) + wrapped_norm2(sc, side);
                    const int db = wrapped_norm2(best.sr, side) + wrapped_norm2(best.sc, side);
                    better = dn < db ||
                             (dn == db && std::make_tuple(sr, sc, flip) <
                                              std::make_tuple(best.sr, best.sc, best.flip ? 1 : 0));
                }
                if (better) {
                    best.score = surface[static_cast<size_t>(sr) * side + sc];
                    best.abs_score = score;
                    best.sr = sr;
                    best.sc = sc;
                    best.flip = flip != 0;
                }
            }
        }
    }

    AlignmentResult res;
    res.flipped = best.flip;
    res.shift_r = best.sr;
    res.shift_c = best.sc;
    res.sign = best.score < 0.0 ? -1.0 : 1.0;
    res.aligned = shift_image(best.flip ? flipped : candidate, best.sr, best.sc);
    if (res.sign < 0.0)
        for (double& v : res.aligned.values) v = -v;
    return res;
}

ImagePlane align_to_truth(const ImagePlane& candidate, const ImagePlane& truth) {
    return align_to_truth_detail(candidate, truth).aligned;
}

double psnr(const ImagePlane& a, const ImagePlane& b) {
    detail::require(a.side == b.side, "psnr: dimension mismatch");
    double mse = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.values.size());
    if (mse == 0.0) return 80.0;
    return std::min(80.0, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const ImagePlane& a, const ImagePlane& b) {
    detail::require(a.side == b.side, "ssim: dimension mismatch");
    constexpr int kWindow = 11;
    constexpr double kSigma = 1.5;
    constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
    detail::require(a.side >= kWindow, "ssim: image smaller than the 11x11 window");

    static const auto window = [] {
        std::array<double, kWindow * kWindow> w{};
        double sum = 0.0;
        for (int r = 0; r < kWindow; ++r) {
            for (int c = 0; c < kWindow; ++c) {
                const double dr = r - (kWindow - 1) / 2.0;
                const double dc = c - (kWindow - 1) / 2.0;
                w[r * kWindow + c] = std::exp(-(dr * dr + dc * dc) / (2.0 * kSigma * kSigma));
                sum += w[r * kWindow + c];
            }
        }
        for (double& v : w) v /= sum;
        return w;
    }();

    const int valid = a.side - kWindow + 1;
    double total = 0.0;
    for (int r0 = 0; r0 < valid; ++r0) {
        for (int c0 = 0; c0 < valid; ++c0) {
            double mu1 = 0, mu2 = 0, s11 = 0, s22 = 0, s12 = 0;
            for (int r = 0; r < kWindow; ++r) {
                for (int c = 0; c < kWindow; ++c) {
                    const double w = window[r * kWindow + c];
                    const double va = a.at(r0 + r, c0 + c);
                    const double vb = b.at(r0 + r, c0 + c);
                    mu1 += w * va;
                    mu2 += w * vb;
                    s11 += w * va * va;
                    s22 += w * vb * vb;
                    s12 += w * va * vb;
                }
            }
            const double var1 = s11 - mu1 * mu1;
            const double var2 = s22 - mu2 * mu2;
            const double cov = s12 - mu1 * mu2;
            total += ((2.0 * mu1 * mu2 + kC1) * (2.0 * cov + kC2)) /
                     ((mu1 * mu1 + mu2 * mu2 + kC1) * (var1 + var2 + kC2));
        }
    }
    return total / (static_cast<double>(valid) * valid);
}

std::string run_report_csv_header() {
    return "image,algorithm,alpha,seed,restart,psnr,ssim,msnr1,msnr2,residual,iters,wall_ms";
}

namespace {
std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}
}  // namespace

std::string run_report_csv_row(const RunReport& r) {
    std::string row;
    row += r.image + ',' + r.algorithm + ',';
    row += fmt_double(r.alpha) + ',';
    row += std::to_string(r.seed) + ',';
    row += std::to_string(r.restart) + ',';
    row += fmt_double(r.psnr) + ',' + fmt_double(r.ssim) + ',';
    row += fmt_double(r.msnr1) + ',' + fmt_double(r.msnr2) + ',';
    row += fmt_double(r.residual) + ',';
    row += std::to_string(r.iterations) + ',';
    row += fmt_double(r.wall_ms);
    return row;
}

}  // namespace fpr
