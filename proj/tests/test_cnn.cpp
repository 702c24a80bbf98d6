#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "fpr/cnn.hpp"
#include "support/oracles.hpp"

using namespace fpr;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

CnnModel identity_model() {
    CnnLayer layer;
    layer.out_channels = 1;
    layer.in_channels = 1;
    layer.kernel = 1;
    layer.weights = {1.0f};
    layer.bias = {0.0f};
    CnnModel m;
    m.layers.push_back(layer);
    m.residual = false;
    return m;
}

// test-only dense cnn forward pass: [0,1] scaling, zero padding, relu
// between layers, optional residual
ImagePlane naive_cnn(const ImagePlane& x, const CnnModel& model) {
    const int side = x.side;
    std::vector<std::vector<double>> planes(1, std::vector<double>(x.values.size()));
    for (size_t i = 0; i < x.values.size(); ++i) planes[0][i] = x.values[i] / 255.0;
    for (size_t li = 0; li < model.layers.size(); ++li) {
        const CnnLayer& L = model.layers[li];
        const int pad = (L.kernel - 1) / 2;
        std::vector<std::vector<double>> next(static_cast<size_t>(L.out_channels),
                                              std::vector<double>(x.values.size(), 0.0));
        for (int oc = 0; oc < L.out_channels; ++oc)
            for (int r = 0; r < side; ++r)
                for (int c = 0; c < side; ++c) {
                    double acc = L.bias[static_cast<size_t>(oc)];
                    for (int ic = 0; ic < L.in_channels; ++ic)
                        for (int kr = 0; kr < L.kernel; ++kr)
                            for (int kc = 0; kc < L.kernel; ++kc) {
                                const int rr = r + kr - pad, cc = c + kc - pad;
                                if (rr < 0 || rr >= side || cc < 0 || cc >= side) continue;
                                const size_t widx =
                                    ((static_cast<size_t>(oc) * L.in_channels + ic) * L.kernel + kr) *
                                        L.kernel +
                                    kc;
                                acc += L.weights[widx] *
                                       planes[static_cast<size_t>(ic)][static_cast<size_t>(rr) * side + cc];
                            }
                    if (L.relu && acc < 0) acc = 0;
                    next[static_cast<size_t>(oc)][static_cast<size_t>(r) * side + c] = acc;
                }
        planes = std::move(next);
    }
    ImagePlane out = ImagePlane::zeros(side);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = 255.0 * (model.residual ? x.values[i] / 255.0 - planes[0][i] : planes[0][i]);
    return out;
}

}  // namespace

TEST_CASE("identity fixture roundtrips through the weight file and passes through") {
    const auto path = temp_path("fpr_identity.fprw");
    save_cnn(identity_model(), path);
    const CnnModel loaded = load_cnn(path);
    CHECK(loaded.layers.size() == 1);
    CHECK(loaded.residual == false);
    CHECK(loaded.layers[0].relu == false);  // single layer: no activation

    SplitMix64 rng(41);
    const ImagePlane x = oracle::random_image(6, rng);
    const ImagePlane out = apply_cnn(x, loaded);
    CHECK(max_abs_diff(out, x) <= 1e-6);
    std::filesystem::remove(path);
}

TEST_CASE("residual zero-weight net is a passthrough") {
    CnnModel m = identity_model();
    m.layers[0].weights = {0.0f};
    m.residual = true;
    SplitMix64 rng(42);
    const ImagePlane x = oracle::random_image(5, rng);
    CHECK(max_abs_diff(apply_cnn(x, m), x) <= 1e-9);
}

TEST_CASE("two-layer 3x3 fixture matches the direct convolution oracle") {
    CnnModel m;
    CnnLayer l1;
    l1.out_channels = 2;
    l1.in_channels = 1;
    l1.kernel = 3;
    l1.weights = {// channel 0: sharpen-ish
                  0.0f, -0.5f, 0.0f, -0.5f, 3.0f, -0.5f, 0.0f, -0.5f, 0.0f,
                  // channel 1: box blur
                  0.1f, 0.1f, 0.1f, 0.1f, 0.2f, 0.1f, 0.1f, 0.1f, 0.1f};
    l1.bias = {0.05f, -0.02f};
    l1.relu = true;
    CnnLayer l2;
    l2.out_channels = 1;
    l2.in_channels = 2;
    l2.kernel = 3;
    l2.weights = {0.2f, 0.0f, -0.1f, 0.3f, 0.5f, 0.0f, 0.0f, 0.1f, -0.2f,
                  0.05f, 0.05f, 0.05f, 0.0f, 0.6f, 0.0f, -0.05f, 0.0f, 0.05f};
    l2.bias = {0.1f};
    l2.relu = false;
    m.layers = {l1, l2};
    m.residual = false;

    ImagePlane ramp = ImagePlane::zeros(5);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) ramp.at(r, c) = 10.0 * r + 2.0 * c;

    const ImagePlane got = apply_cnn(ramp, m);
    const ImagePlane want = naive_cnn(ramp, m);
    CHECK(max_abs_diff(got, want) <= 1e-6);

    SUBCASE("the same holds after a save/load roundtrip") {
        const auto path = temp_path("fpr_twolayer.fprw");
        save_cnn(m, path);
        const CnnModel loaded = load_cnn(path);
        CHECK(loaded.layers[0].relu == true);
        CHECK(loaded.layers[1].relu == false);
        CHECK(max_abs_diff(apply_cnn(ramp, loaded), want) <= 1e-6);
        std::filesystem::remove(path);
    }
}

TEST_CASE("loader rejects malformed files with distinct categories") {
    const auto path = temp_path("fpr_malformed.fprw");

    SUBCASE("missing file") {
        try {
            load_cnn(temp_path("fpr_does_not_exist.fprw"));
            FAIL("expected CnnLoadError");
        } catch (const CnnLoadError& e) {
            CHECK(e.kind() == CnnError::missing_file);
        }
    }

    SUBCASE("bad magic") {
        std::ofstream(path, std::ios::binary) << "NOPE it is not a weight file at all";
        try {
            load_cnn(path);
            FAIL("expected CnnLoadError");
        } catch (const CnnLoadError& e) {
            CHECK(e.kind() == CnnError::bad_header);
        }
    }

    SUBCASE("declared three layers but two serialized") {
        // write a valid 2-layer file, then patch the layer count to 3 and fix
        // the CRC so only the shape check can fire
        CnnModel m;
        CnnLayer a = identity_model().layers[0];
        CnnLayer b = a;
        m.layers = {a, b};
        save_cnn(m, path);
        std::ifstream in(path, std::ios::binary);
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
        in.close();
        bytes[8] = 3;  // layer count lives after magic+version
        const std::uint32_t crc = crc32_ieee(bytes.data(), bytes.size() - 4);
        std::memcpy(bytes.data() + bytes.size() - 4, &crc, 4);
        std::ofstream(path, std::ios::binary)
            .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        try {
            load_cnn(path);
            FAIL("expected CnnLoadError");
        } catch (const CnnLoadError& e) {
            CHECK(e.kind() == CnnError::shape_inconsistency);
        }
    }

    SUBCASE("corrupted payload trips the checksum") {
        save_cnn(identity_model(), path);
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(14);
        const char junk = 0x5A;
        f.write(&junk, 1);
        f.close();
        try {
            load_cnn(path);
            FAIL("expected CnnLoadError");
        } catch (const CnnLoadError& e) {
            CHECK(e.kind() == CnnError::checksum_mismatch);
        }
    }

    SUBCASE("even kernels cannot preserve the spatial size") {
        CnnModel m = identity_model();
        m.layers[0].kernel = 2;
        m.layers[0].weights = {1.0f, 0.0f, 0.0f, 0.0f};
        save_cnn(m, path);
        try {
            load_cnn(path);
            FAIL("expected CnnLoadError");
        } catch (const CnnLoadError& e) {
            CHECK(e.kind() == CnnError::shape_inconsistency);
        }
    }

    std::filesystem::remove(path);
}
