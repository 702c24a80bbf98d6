#include <doctest.h>

#include "fpr/eval.hpp"
#include "fpr/fixtures.hpp"
#include "support/oracles.hpp"

using namespace fpr;

namespace {

ImagePlane circular_shift(const ImagePlane& x, int sr, int sc) {
    ImagePlane out = ImagePlane::zeros(x.side);
    for (int r = 0; r < x.side; ++r)
        for (int c = 0; c < x.side; ++c)
            out.at((r + sr) % x.side, (c + sc) % x.side) = x.at(r, c);
    return out;
}

ImagePlane flip(const ImagePlane& x) {
    ImagePlane out = ImagePlane::zeros(x.side);
    for (int r = 0; r < x.side; ++r)
        for (int c = 0; c < x.side; ++c)
            out.at(r, c) = x.at((x.side - r) % x.side, (x.side - c) % x.side);
    return out;
}

}  // namespace

TEST_CASE("align_to_truth worked examples") {
    SplitMix64 rng(91);
    const ImagePlane truth = oracle::random_image(12, rng);

    SUBCASE("identity") {
        const ImagePlane out = align_to_truth(truth, truth);
        CHECK(out.values == truth.values);
    }
    SUBCASE("circular shift by (3,5)") {
        const ImagePlane out = align_to_truth(circular_shift(truth, 3, 5), truth);
        CHECK(out.values == truth.values);
    }
    SUBCASE("flip") {
        const ImagePlane out = align_to_truth(flip(truth), truth);
        CHECK(out.values == truth.values);
    }
}

TEST_CASE("align_to_truth recovers every trivial-ambiguity transform exactly") {
    SplitMix64 rng(92);
    const ImagePlane truth = oracle::random_image(8, rng);
    for (int flip_it = 0; flip_it < 2; ++flip_it) {
        for (int sr = 0; sr < 8; ++sr) {
            for (int sc = 0; sc < 8; ++sc) {
                ImagePlane cand = flip_it ? flip(truth) : truth;
                cand = circular_shift(cand, sr, sc);
                const ImagePlane out = align_to_truth(cand, truth);
                REQUIRE(out.values == truth.values);
            }
        }
    }
}

TEST_CASE("align_to_truth resolves a global sign flip") {
    SplitMix64 rng(93);
    ImagePlane truth = oracle::random_image(8, rng, -128.0, 128.0);
    ImagePlane neg = truth;
    for (double& v : neg.values) v = -v;
    const AlignmentResult res = align_to_truth_detail(neg, truth);
    CHECK(res.sign == -1.0);
    CHECK(res.aligned.values == truth.values);
}

TEST_CASE("psnr") {
    SplitMix64 rng(94);
    const ImagePlane a = oracle::random_image(8, rng);

    SUBCASE("identical images hit the 80 dB cap") { CHECK(psnr(a, a) == 80.0); }

    SUBCASE("MSE 255^2 is 0 dB") {
        const ImagePlane zero(4, std::vector<double>(16, 0.0));
        const ImagePlane full(4, std::vector<double>(16, 255.0));
        CHECK(psnr(zero, full) == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("uniform offset of 1 gives 10 log10(255^2)") {
        ImagePlane b = a;
        for (double& v : b.values) v += 1.0;
        CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(65025.0)).epsilon(1e-12));
    }

    SUBCASE("symmetry") {
        const ImagePlane b = oracle::random_image(8, rng);
        CHECK(psnr(a, b) == psnr(b, a));
    }
}

TEST_CASE("ssim") {
    SUBCASE("identical images give 1") {
        const ImagePlane a = fixture_image("blobs", 16);
        CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("images smaller than the window are rejected") {
        CHECK_THROWS_AS(ssim(ImagePlane::zeros(8), ImagePlane::zeros(8)), std::invalid_argument);
    }

    SUBCASE("constant images reduce to the closed-form luminance term") {
        const double mu1 = 90.0, mu2 = 100.0;
        const ImagePlane a(12, std::vector<double>(144, mu1));
        const ImagePlane b(12, std::vector<double>(144, mu2));
        const double c1 = (0.01 * 255) * (0.01 * 255);
        const double expect = (2.0 * mu1 * mu2 + c1) / (mu1 * mu1 + mu2 * mu2 + c1);
        CHECK(ssim(a, b) == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("inverted textured image anti-correlates") {
        const ImagePlane a = fixture_image("checker_soft", 32);
        ImagePlane inv = a;
        for (double& v : inv.values) v = 255.0 - v;
        const double s = ssim(a, inv);
        CHECK(s < 0.1);

        // direct naive evaluation oracle (same constants, direct loops)
        const int w = 11;
        std::vector<double> win(w * w);
        double sum = 0;
        for (int r = 0; r < w; ++r)
            for (int c = 0; c < w; ++c) {
                const double dr = r - 5.0, dc = c - 5.0;
                win[r * w + c] = std::exp(-(dr * dr + dc * dc) / (2.0 * 1.5 * 1.5));
                sum += win[r * w + c];
            }
        for (double& v : win) v /= sum;
        const double c1 = 6.5025, c2 = 58.5225;
        double total = 0;
        const int valid = 32 - w + 1;
        for (int r0 = 0; r0 < valid; ++r0)
            for (int c0 = 0; c0 < valid; ++c0) {
                double m1 = 0, m2 = 0, q11 = 0, q22 = 0, q12 = 0;
                for (int r = 0; r < w; ++r)
                    for (int c = 0; c < w; ++c) {
                        const double va = a.at(r0 + r, c0 + c), vb = inv.at(r0 + r, c0 + c);
                        m1 += win[r * w + c] * va;
                        m2 += win[r * w + c] * vb;
                        q11 += win[r * w + c] * va * va;
                        q22 += win[r * w + c] * vb * vb;
                        q12 += win[r * w + c] * va * vb;
                    }
                total += ((2 * m1 * m2 + c1) * (2 * (q12 - m1 * m2) + c2)) /
                         ((m1 * m1 + m2 * m2 + c1) * ((q11 - m1 * m1) + (q22 - m2 * m2) + c2));
            }
        CHECK(s == doctest::Approx(total / (valid * valid)).epsilon(1e-9));
    }
}

TEST_CASE("run report CSV schema") {
    CHECK(run_report_csv_header() ==
          "image,algorithm,alpha,seed,restart,psnr,ssim,msnr1,msnr2,residual,iters,wall_ms");
    RunReport r;
    r.image = "blobs";
    r.algorithm = "hio";
    r.alpha = 4.0;
    r.seed = 42;
    r.restart = 2;
    r.psnr = 31.25;
    r.ssim = 0.875;
    r.msnr1 = std::numeric_limits<double>::infinity();
    r.msnr2 = 33.5;
    r.residual = 1.5e-3;
    r.iterations = 1200;
    r.wall_ms = 12.5;
    const std::string row = run_report_csv_row(r);
    CHECK(row == "blobs,hio,4,42,2,31.25,0.875,inf,33.5,0.0015,1200,12.5");
}
