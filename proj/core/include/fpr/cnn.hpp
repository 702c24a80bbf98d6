#pragma once

#include <filesystem>
#include <memory>

#include "fpr/types.hpp"

namespace fpr {

/// Residual convolution stack loaded from the binary weight format.
/// Batch-norm folding is the exporter's job; the runtime sees conv+bias only.
/// Activation is implicit in the format: ReLU after every layer but the last.
struct CnnLayer {
    int out_channels = 0;
    int in_channels = 0;
    int kernel = 0;  // odd; zero padding (kernel-1)/2 preserves spatial size
    std::vector<float> weights;  // [out][in][row][col]
    std::vector<float> bias;     // [out]
    bool relu = false;
};

struct CnnModel {
    std::vector<CnnLayer> layers;
    bool residual = false;  // output = input - net(input)
};

enum class CnnError {
    missing_file,
    bad_header,
    shape_inconsistency,
    checksum_mismatch,
};

class CnnLoadError : public std::runtime_error {
public:
    CnnLoadError(CnnError kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    CnnError kind() const { return kind_; }

private:
    CnnError kind_;
};

/// Weight file: little-endian, magic "FPRW", version u32, layer count u32,
/// residual u8, then per layer (out_ch u32, in_ch u32, k u32, float32
/// weights out-major/in/row/col, float32 biases), trailing CRC32 over all
/// preceding bytes.
CnnModel load_cnn(const std::filesystem::path& path);
void save_cnn(const CnnModel& model, const std::filesystem::path& path);

/// Forward pass: scale to [0,1], convolve with zero padding, apply the
/// residual subtraction if flagged, scale back to [0,255] units.
ImagePlane apply_cnn(const ImagePlane& x, const CnnModel& model);

std::uint32_t crc32_ieee(const unsigned char* data, size_t length);

}  // namespace fpr
