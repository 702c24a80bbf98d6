#include "fpr/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fpr/rng.hpp"

namespace fpr {

namespace {

double gauss_bump(double r, double c, double r0, double c0, double sr, double sc) {
    const double dr = (r - r0) / sr;
    const double dc = (c - c0) / sc;
    return std::exp(-0.5 * (dr * dr + dc * dc));
}

ImagePlane from_function(int side, const std::function<double(double, double)>& f) {
    ImagePlane img = ImagePlane::zeros(side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            // normalized coordinates in [0,1)
            const double nr = (r + 0.5) / side;
            const double nc = (c + 0.5) / side;
            img.at(r, c) = std::clamp(f(nr, nc), 0.0, 255.0);
        }
    }
    return img;
}

ImagePlane blobs(int side) {
    return from_function(side, [](double r, double c) {
        double v = 20.0;
        v += 210.0 * gauss_bump(r, c, 0.32, 0.28, 0.16, 0.13);
        v += 150.0 * gauss_bump(r, c, 0.68, 0.62, 0.10, 0.17);
        v += 90.0 * gauss_bump(r, c, 0.25, 0.75, 0.07, 0.07);
        return v;
    });
}

ImagePlane gradient_disk(int side) {
    return from_function(side, [](double r, double c) {
        double v = 30.0 + 120.0 * (0.65 * r + 0.35 * c);
        const double d = std::hypot(r - 0.42, c - 0.58);
        if (d < 0.22) v += 95.0 * (1.0 - d / 0.22);
        return v;
    });
}

ImagePlane bars(int side) {
    return from_function(side, [](double r, double c) {
        double v = 25.0;
        const double phase = 6.28318530717958647692 * (3.0 * c + 0.8 * r);
        v += 95.0 * (0.5 + 0.5 * std::sin(phase));
        if (r > 0.7 && c < 0.45) v += 70.0;
        return v;
    });
}

// soft indicator of [lo, hi) with edge width w
double soft_box(double t, double lo, double hi, double w) {
    auto ramp = [w](double d) { return std::clamp(d / w + 0.5, 0.0, 1.0); };
    return ramp(t - lo) * ramp(hi - t);
}

ImagePlane glyph(int side) {
    // letter-like strokes, slightly rotated and on a gradient, with soft
    // edges and generous stroke widths (hard axis-aligned binary steps and
    // thin strokes make the 32x32 phase retrieval instances stagnation-prone
    // for every algorithm)
    return from_function(side, [](double r, double c) {
        const double ang = 0.22;
        const double rr = 0.5 + std::cos(ang) * (r - 0.5) - std::sin(ang) * (c - 0.5);
        const double rc = 0.5 + std::sin(ang) * (r - 0.5) + std::cos(ang) * (c - 0.5);
        const double w = 0.10;
        double ink = 0.0;
        ink = std::max(ink, 0.92 * soft_box(rr, 0.10, 0.34, w) * soft_box(rc, 0.12, 0.88, w));
        ink = std::max(ink, 0.74 * soft_box(rr, 0.42, 0.66, w) * soft_box(rc, 0.12, 0.64, w));
        ink = std::max(ink, 0.52 * soft_box(rr, 0.72, 0.92, w) * soft_box(rc, 0.34, 0.90, w));
        return 20.0 + 55.0 * (0.4 * r + 0.6 * c) + 180.0 * ink;
    });
}

ImagePlane checker_soft(int side) {
    return from_function(side, [](double r, double c) {
        const double cells = 3.0;
        const double wave = std::sin(M_PI * cells * (r + 0.05 * std::sin(6.0 * c))) * std::sin(M_PI * cells * (c + 0.13));
        const double envelope = gauss_bump(r, c, 0.40, 0.56, 0.30, 0.24);
        return 35.0 + (110.0 + 105.0 * wave) * envelope;
    });
}

ImagePlane spots(int side) {
    ImagePlane img = ImagePlane::zeros(side);
    for (double& v : img.values) v = 14.0;
    SplitMix64 rng(0xF1C7u);  // fixed: fixture must be deterministic
    const int count = 9;
    for (int i = 0; i < count; ++i) {
        const double r0 = 0.10 + 0.80 * rng.uniform();
        const double c0 = 0.10 + 0.80 * rng.uniform();
        const double amp = 110.0 + 120.0 * rng.uniform();
        const double width = 0.045 + 0.04 * rng.uniform();
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c) {
                const double nr = (r + 0.5) / side;
                const double nc = (c + 0.5) / side;
                img.at(r, c) = std::min(255.0, img.at(r, c) + amp * gauss_bump(nr, nc, r0, c0, width, width));
            }
    }
    return img;
}

}  // namespace

std::vector<std::string> fixture_names() {
    return {"blobs", "gradient_disk", "bars", "glyph", "checker_soft", "spots"};
}

ImagePlane fixture_image(const std::string& name, int side) {
    detail::require(side > 0, "fixture_image: side must be positive");
    if (name == "blobs") return blobs(side);
    if (name == "gradient_disk") return gradient_disk(side);
    if (name == "bars") return bars(side);
    if (name == "glyph") return glyph(side);
    if (name == "checker_soft") return checker_soft(side);
    if (name == "spots") return spots(side);
    throw std::invalid_argument("fixture_image: unknown fixture " + name);
}

}  // namespace fpr
