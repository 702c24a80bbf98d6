#include <doctest.h>

#include <fstream>

#include "fpr/image_io.hpp"
#include "fpr/measurement_io.hpp"
#include "fpr/sim.hpp"
#include "support/oracles.hpp"

using namespace fpr;

namespace {
std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("pgm save/load roundtrips integer images") {
    SplitMix64 rng(111);
    ImagePlane x = ImagePlane::zeros(9);
    for (double& v : x.values) v = std::floor(rng.uniform(0.0, 256.0));
    const auto path = temp_path("fpr_roundtrip.pgm");
    save_image(x, path);
    const ImagePlane back = load_image(path);
    CHECK(back.values == x.values);
    std::filesystem::remove(path);
}

TEST_CASE("png save/load roundtrips integer images") {
    SplitMix64 rng(112);
    ImagePlane x = ImagePlane::zeros(12);
    for (double& v : x.values) v = std::floor(rng.uniform(0.0, 256.0));
    const auto path = temp_path("fpr_roundtrip.png");
    save_image(x, path);
    const ImagePlane back = load_image(path);
    CHECK(back.values == x.values);
    std::filesystem::remove(path);
}

TEST_CASE("2x2 ascii PGM fixture with known pixels") {
    const auto path = temp_path("fpr_fixture.pgm");
    std::ofstream(path) << "P2\n# tiny fixture\n2 2\n255\n0 64\n128 255\n";
    const ImagePlane img = load_image(path);
    CHECK(img.side == 2);
    CHECK(img.values == std::vector<double>{0.0, 64.0, 128.0, 255.0});
    std::filesystem::remove(path);
}

TEST_CASE("unsupported formats and missing files are rejected") {
    CHECK_THROWS(load_image(temp_path("fpr_missing.pgm")));
    const auto path = temp_path("fpr_bad.txt");
    std::ofstream(path) << "hello";
    CHECK_THROWS(load_image(path));
    CHECK_THROWS(save_image(ImagePlane::zeros(2), temp_path("fpr_bad.bmp")));
    const auto badmagic = temp_path("fpr_badmagic.pgm");
    std::ofstream(badmagic) << "P7\n2 2\n255\n";
    CHECK_THROWS(load_image(badmagic));
    std::filesystem::remove(path);
    std::filesystem::remove(badmagic);
}

TEST_CASE("save clips and rounds") {
    ImagePlane x(2, {-5.0, 255.9, 100.4, 100.6});
    const auto path = temp_path("fpr_clip.pgm");
    save_image(x, path);
    const ImagePlane back = load_image(path);
    CHECK(back.values == std::vector<double>{0.0, 255.0, 100.0, 101.0});
    std::filesystem::remove(path);
}

TEST_CASE("bilinear downscale of a 4x4 checkerboard averages 2x2 blocks") {
    ImagePlane x = ImagePlane::zeros(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) x.at(r, c) = ((r + c) % 2) ? 255.0 : 0.0;
    const ImagePlane down = resize_bilinear(x, 2);
    // center-aligned sampling lands exactly between four source pixels
    for (double v : down.values) CHECK(v == doctest::Approx(127.5).epsilon(1e-12));
}

TEST_CASE("measurement binary roundtrip") {
    SplitMix64 rng(113);
    const OversamplingMap map(6, 2);
    const ImagePlane x = oracle::random_image(6, rng);
    const Measurement meas = synthesize_measurement(x, map, NoiseModel{2.0, 5});
    const auto path = temp_path("fpr_meas.fprm");
    save_measurement(meas, path);
    const Measurement back = load_measurement(path);
    CHECK(back.side == meas.side);
    CHECK(back.alpha == meas.alpha);
    CHECK(back.sigma_bar == meas.sigma_bar);
    CHECK(back.amplitudes == meas.amplitudes);
    std::filesystem::remove(path);
}

TEST_CASE("measurement csv is parseable and complete") {
    const OversamplingMap map(2, 2);
    const Measurement meas = synthesize_measurement(
        ImagePlane(2, {1.0, 2.0, 3.0, 4.0}), map, NoiseModel{0.0, 0});
    const auto path = temp_path("fpr_meas.csv");
    write_measurement_csv(meas, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "row,col,amplitude");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 16);
    std::filesystem::remove(path);
}
