#include <doctest.h>

#include "fpr/denoise.hpp"
#include "support/oracles.hpp"

using namespace fpr;

TEST_CASE("identity denoiser is a bit-exact passthrough") {
    SplitMix64 rng(31);
    const ImagePlane x = oracle::random_image(8, rng);
    const ImagePlane out = apply_denoiser(x, DenoiserSpec::identity());
    CHECK(out.values == x.values);
}

TEST_CASE("denoisers reject non-finite input") {
    ImagePlane x = ImagePlane::zeros(4);
    x.values[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(apply_denoiser(x, DenoiserSpec::identity()), std::invalid_argument);
}

TEST_CASE("gaussian denoiser preserves constants and the mean") {
    const ImagePlane c(4, std::vector<double>(16, 7.25));
    const DenoiserSpec spec = DenoiserSpec::gaussian(1.2);
    const ImagePlane out = apply_denoiser(c, spec);
    for (double v : out.values) CHECK(v == doctest::Approx(7.25).epsilon(1e-14));

    SplitMix64 rng(32);
    const ImagePlane x = oracle::random_image(8, rng);
    const ImagePlane y = apply_denoiser(x, spec);
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.values.size(); ++i) {
        mx += x.values[i];
        my += y.values[i];
    }
    CHECK(my / 64.0 == doctest::Approx(mx / 64.0).epsilon(1e-9));
}

TEST_CASE("gaussian denoiser matches the direct circular convolution oracle") {
    SplitMix64 rng(33);
    const ImagePlane x = oracle::random_image(8, rng);
    const ImagePlane fast = apply_denoiser(x, DenoiserSpec::gaussian(1.7));
    const ImagePlane ref = oracle::naive_circular_blur(x, 1.7);
    CHECK(max_abs_diff(fast, ref) <= 1e-10);
}

TEST_CASE("gaussian denoiser is linear") {
    SplitMix64 rng(34);
    const DenoiserSpec spec = DenoiserSpec::gaussian(2.0);
    const ImagePlane x = oracle::random_image(8, rng);
    const ImagePlane y = oracle::random_image(8, rng);
    const double a = 0.7, b = -1.3;
    ImagePlane combo = ImagePlane::zeros(8);
    for (size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = a * x.values[i] + b * y.values[i];
    const ImagePlane lhs = apply_denoiser(combo, spec);
    const ImagePlane dx = apply_denoiser(x, spec);
    const ImagePlane dy = apply_denoiser(y, spec);
    for (size_t i = 0; i < lhs.values.size(); ++i)
        CHECK(lhs.values[i] == doctest::Approx(a * dx.values[i] + b * dy.values[i]).epsilon(1e-9));
}

TEST_CASE("median removes an impulse spike in a flat region") {
    ImagePlane x(7, std::vector<double>(49, 50.0));
    x.at(3, 3) = 250.0;
    const ImagePlane out = apply_denoiser(x, DenoiserSpec::median(3));
    for (double v : out.values) CHECK(v == 50.0);
}

TEST_CASE("tv denoiser does not increase total variation") {
    SplitMix64 rng(35);
    for (int trial = 0; trial < 5; ++trial) {
        const ImagePlane x = oracle::random_image(12, rng);
        const ImagePlane out = apply_denoiser(x, DenoiserSpec::tv(15.0, 30));
        CHECK(total_variation(out) <= total_variation(x) + 1e-9);
    }
}

TEST_CASE("tv denoiser contracts variance and preserves the mean") {
    SplitMix64 rng(36);
    const ImagePlane x = oracle::random_image(12, rng);
    const ImagePlane out = apply_denoiser(x, DenoiserSpec::tv(10.0, 30));
    auto stats = [](const ImagePlane& img) {
        double mean = 0;
        for (double v : img.values) mean += v;
        mean /= static_cast<double>(img.values.size());
        double var = 0;
        for (double v : img.values) var += (v - mean) * (v - mean);
        return std::make_pair(mean, var / static_cast<double>(img.values.size()));
    };
    const auto [min, vin] = stats(x);
    const auto [mout, vout] = stats(out);
    CHECK(mout == doctest::Approx(min).epsilon(1e-10));
    CHECK(vout <= vin);
}

TEST_CASE("all denoiser kinds map finite inputs to finite outputs") {
    SplitMix64 rng(37);
    const ImagePlane x = oracle::random_image(12, rng);
    for (const DenoiserSpec& spec :
         {DenoiserSpec::identity(), DenoiserSpec::gaussian(1.0), DenoiserSpec::median(3),
          DenoiserSpec::tv(20.0, 20)}) {
        const ImagePlane out = apply_denoiser(x, spec);
        for (double v : out.values) CHECK(std::isfinite(v));
    }
}

TEST_CASE("with_strength retargets the strength-driven kinds") {
    const DenoiserSpec tv = DenoiserSpec::tv(99.0).with_strength(40.0);
    CHECK(tv.strength == 40.0);
    CHECK(tv.tv_weight == doctest::Approx(0.9 * 40.0));
    const DenoiserSpec g = DenoiserSpec::gaussian(9.0).with_strength(20.0);
    CHECK(g.gaussian_sigma == doctest::Approx(0.5 + 0.5));
    const DenoiserSpec id = DenoiserSpec::identity().with_strength(60.0);
    CHECK(id.kind == DenoiserKind::identity);
}
