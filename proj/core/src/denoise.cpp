#include "fpr/denoise.hpp"

#include <algorithm>
#include <cmath>

namespace fpr {

namespace {

// Calibrated on the desk-scale fixtures; see with_strength().
constexpr double kTvStrengthScale = 0.9;
constexpr double kTvDualStep = 0.25;

void check_finite(const ImagePlane& x) {
    for (double v : x.values)
        detail::require(std::isfinite(v), "apply_denoiser: non-finite input");
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(static_cast<size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        const double v = std::exp(-0.5 * t * t / (sigma * sigma));
        k[static_cast<size_t>(t + radius)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable circular convolution. The operator matrix is symmetric and
// doubly stochastic, which gives RED its linear/symmetric test denoiser.
ImagePlane gaussian_blur_circular(const ImagePlane& x, double sigma) {
    const int side = x.side;
    const std::vector<double> k = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(k.size()) - 1) / 2;

    ImagePlane tmp = ImagePlane::zeros(side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int cc = ((c + t) % side + side) % side;
                acc += k[static_cast<size_t>(t + radius)] * x.at(r, cc);
            }
            tmp.at(r, c) = acc;
        }
    }
    ImagePlane out = ImagePlane::zeros(side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int rr = ((r + t) % side + side) % side;
                acc += k[static_cast<size_t>(t + radius)] * tmp.at(rr, c);
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

ImagePlane median_filter(const ImagePlane& x, int window) {
    detail::require(window >= 1 && window % 2 == 1, "median denoiser: window must be odd");
    const int side = x.side;
    const int radius = window / 2;
    ImagePlane out = ImagePlane::zeros(side);
    std::vector<double> buf;
    buf.reserve(static_cast<size_t>(window) * window);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            buf.clear();
            for (int dr = -radius; dr <= radius; ++dr) {
                for (int dc = -radius; dc <= radius; ++dc) {
                    const int rr = std::clamp(r + dr, 0, side - 1);
                    const int cc = std::clamp(c + dc, 0, side - 1);
                    buf.push_back(x.at(rr, cc));
                }
            }
            auto mid = buf.begin() + buf.size() / 2;
            std::nth_element(buf.begin(), mid, buf.end());
            out.at(r, c) = *mid;
        }
    }
    return out;
}

// Chambolle's dual projection for min_u 1/2||u-f||^2 + w TV(u).
// Forward-difference gradient, Neumann boundary; div is its negative adjoint,
// so the output mean equals the input mean exactly.
ImagePlane tv_denoise(const ImagePlane& f, double weight, int iters) {
    if (weight <= 0.0 || iters <= 0) return f;
    const int side = f.side;
    const size_t npix = static_cast<size_t>(side) * side;
    std::vector<double> p1(npix, 0.0), p2(npix, 0.0), div(npix, 0.0);

    auto compute_div = [&] {
        for (int r = 0; r < side; ++r) {
            for (int c = 0; c < side; ++c) {
                const size_t i = static_cast<size_t>(r) * side + c;
                double d = 0.0;
                if (r < side - 1) d += p1[i];
                if (r > 0) d -= p1[i - side];
                if (c < side - 1) d += p2[i];
                if (c > 0) d -= p2[i - 1];
                div[i] = d;
            }
        }
    };

    for (int it = 0; it < iters; ++it) {
        compute_div();
        for (int r = 0; r < side; ++r) {
            for (int c = 0; c < side; ++c) {
                const size_t i = static_cast<size_t>(r) * side + c;
                const double base = div[i] - f.values[i] / weight;
                const double gr = (r < side - 1) ? (div[i + side] - f.values[i + side] / weight) - base : 0.0;
                const double gc = (c < side - 1) ? (div[i + 1] - f.values[i + 1] / weight) - base : 0.0;
                const double mag = std::sqrt(gr * gr + gc * gc);
                const double denom = 1.0 + kTvDualStep * mag;
                p1[i] = (p1[i] + kTvDualStep * gr) / denom;
                p2[i] = (p2[i] + kTvDualStep * gc) / denom;
            }
        }
    }
    compute_div();
    ImagePlane out = ImagePlane::zeros(side);
    for (size_t i = 0; i < npix; ++i) out.values[i] = f.values[i] - weight * div[i];
    return out;
}

}  // namespace

DenoiserSpec DenoiserSpec::identity() { return {}; }

DenoiserSpec DenoiserSpec::gaussian(double sigma_blur) {
    DenoiserSpec s;
    s.kind = DenoiserKind::gaussian;
    s.gaussian_sigma = sigma_blur;
    return s;
}

DenoiserSpec DenoiserSpec::median(int window) {
    DenoiserSpec s;
    s.kind = DenoiserKind::median;
    s.median_window = window;
    return s;
}

DenoiserSpec DenoiserSpec::tv(double weight, int iters) {
    DenoiserSpec s;
    s.kind = DenoiserKind::tv;
    s.tv_weight = weight;
    s.tv_iters = iters;
    return s;
}

DenoiserSpec DenoiserSpec::cnn(std::shared_ptr<const CnnModel> model) {
    detail::require(model != nullptr, "DenoiserSpec::cnn: null model");
    DenoiserSpec s;
    s.kind = DenoiserKind::cnn;
    s.model = std::move(model);
    return s;
}

DenoiserSpec DenoiserSpec::with_strength(double sigma) const {
    detail::require(sigma >= 0.0, "with_strength: sigma must be nonnegative");
    DenoiserSpec s = *this;
    s.strength = sigma;
    switch (kind) {
        case DenoiserKind::gaussian:
            s.gaussian_sigma = 0.5 + sigma / 40.0;
            break;
        case DenoiserKind::tv:
            s.tv_weight = kTvStrengthScale * sigma;
            break;
        case DenoiserKind::identity:
        case DenoiserKind::median:
        case DenoiserKind::cnn:
            break;  // a single CNN targets whatever it was trained for
    }
    return s;
}

ImagePlane apply_denoiser(const ImagePlane& x, const DenoiserSpec& spec) {
    check_finite(x);
    switch (spec.kind) {
        case DenoiserKind::identity:
            return x;
        case DenoiserKind::gaussian:
            return gaussian_blur_circular(x, spec.gaussian_sigma);
        case DenoiserKind::median:
            return median_filter(x, spec.median_window);
        case DenoiserKind::tv:
            return tv_denoise(x, spec.tv_weight, spec.tv_iters);
        case DenoiserKind::cnn:
            detail::require(spec.model != nullptr, "apply_denoiser: cnn spec without model");
            return apply_cnn(x, *spec.model);
    }
    throw std::invalid_argument("apply_denoiser: unknown denoiser kind");
}

double total_variation(const ImagePlane& x) {
    double tv = 0.0;
    for (int r = 0; r < x.side; ++r) {
        for (int c = 0; c < x.side; ++c) {
            const double dr = (r < x.side - 1) ? x.at(r + 1, c) - x.at(r, c) : 0.0;
            const double dc = (c < x.side - 1) ? x.at(r, c + 1) - x.at(r, c) : 0.0;
            tv += std::sqrt(dr * dr + dc * dc);
        }
    }
    return tv;
}

}  // namespace fpr
