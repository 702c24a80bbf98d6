#include "fpr/cnn.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

namespace fpr {

namespace {

constexpr std::array<char, 4> kMagic = {'F', 'P', 'R', 'W'};
constexpr std::uint32_t kVersion = 1;
// Guards against absurd layer headers parsed from corrupt bytes.
constexpr std::uint64_t kMaxLayerElements = 1ull << 26;

class ByteReader {
public:
    explicit ByteReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

    template <typename T>
    T take(const char* what) {
        if (pos_ + sizeof(T) > bytes_.size())
            throw CnnLoadError(CnnError::shape_inconsistency,
                               std::string("cnn weights: file ends inside ") + what);
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    void take_floats(std::vector<float>& dst, size_t count, const char* what) {
        if (pos_ + count * sizeof(float) > bytes_.size())
            throw CnnLoadError(CnnError::shape_inconsistency,
                               std::string("cnn weights: file ends inside ") + what);
        dst.resize(count);
        std::memcpy(dst.data(), bytes_.data() + pos_, count * sizeof(float));
        pos_ += count * sizeof(float);
    }

    size_t pos() const { return pos_; }
    size_t size() const { return bytes_.size(); }
    const unsigned char* data() const { return bytes_.data(); }

private:
    std::vector<unsigned char> bytes_;
    size_t pos_ = 0;
};

template <typename T>
void put(std::vector<unsigned char>& out, const T& v) {
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
}

}  // namespace

std::uint32_t crc32_ieee(const unsigned char* data, size_t length) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int b = 0; b < 8; ++b) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (size_t i = 0; i < length; ++i) crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

CnnModel load_cnn(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CnnLoadError(CnnError::missing_file, "cnn weights: cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    if (bytes.size() < 4 + 4 + 4 + 1 + 4)
        throw CnnLoadError(CnnError::bad_header, "cnn weights: file too small for header");
    if (std::memcmp(bytes.data(), kMagic.data(), 4) != 0)
        throw CnnLoadError(CnnError::bad_header, "cnn weights: bad magic");

    // Trailing CRC32 covers everything before it.
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
    const std::uint32_t computed = crc32_ieee(bytes.data(), bytes.size() - 4);
    if (stored_crc != computed)
        throw CnnLoadError(CnnError::checksum_mismatch, "cnn weights: CRC32 mismatch");

    bytes.resize(bytes.size() - 4);
    ByteReader r(std::move(bytes));
    r.take<std::uint32_t>("magic");  // already validated
    const auto version = r.take<std::uint32_t>("version");
    if (version != kVersion)
        throw CnnLoadError(CnnError::bad_header, "cnn weights: unsupported version");
    const auto layer_count = r.take<std::uint32_t>("layer count");
    if (layer_count == 0)
        throw CnnLoadError(CnnError::shape_inconsistency, "cnn weights: zero layers");
    const auto residual = r.take<std::uint8_t>("residual flag");

    CnnModel model;
    model.residual = residual != 0;
    model.layers.reserve(layer_count);
    for (std::uint32_t li = 0; li < layer_count; ++li) {
        CnnLayer layer;
        layer.out_channels = static_cast<int>(r.take<std::uint32_t>("layer out_ch"));
        layer.in_channels = static_cast<int>(r.take<std::uint32_t>("layer in_ch"));
        layer.kernel = static_cast<int>(r.take<std::uint32_t>("layer kernel"));
        if (layer.out_channels <= 0 || layer.in_channels <= 0 || layer.kernel <= 0)
            throw CnnLoadError(CnnError::shape_inconsistency, "cnn weights: zero layer dims");
        if (layer.kernel % 2 == 0)
            throw CnnLoadError(CnnError::shape_inconsistency,
                               "cnn weights: even kernel cannot preserve spatial size");
        const std::uint64_t count = static_cast<std::uint64_t>(layer.out_channels) *
                                    layer.in_channels * layer.kernel * layer.kernel;
        if (count > kMaxLayerElements)
            throw CnnLoadError(CnnError::shape_inconsistency, "cnn weights: implausible layer size");
        r.take_floats(layer.weights, static_cast<size_t>(count), "layer weights");
        r.take_floats(layer.bias, static_cast<size_t>(layer.out_channels), "layer biases");
        layer.relu = li + 1 < layer_count;
        model.layers.push_back(std::move(layer));
    }
    if (r.pos() != r.size())
        throw CnnLoadError(CnnError::shape_inconsistency, "cnn weights: trailing bytes after layers");

    if (model.layers.front().in_channels != 1)
        throw CnnLoadError(CnnError::shape_inconsistency, "cnn weights: first layer in_ch must be 1");
    if (model.layers.back().out_channels != 1)
        throw CnnLoadError(CnnError::shape_inconsistency, "cnn weights: last layer out_ch must be 1");
    for (size_t i = 1; i < model.layers.size(); ++i)
        if (model.layers[i].in_channels != model.layers[i - 1].out_channels)
            throw CnnLoadError(CnnError::shape_inconsistency,
                               "cnn weights: channel chain mismatch between layers");
    return model;
}

void save_cnn(const CnnModel& model, const std::filesystem::path& path) {
    detail::require(!model.layers.empty(), "save_cnn: model has no layers");
    std::vector<unsigned char> bytes;
    bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
    put(bytes, kVersion);
    put(bytes, static_cast<std::uint32_t>(model.layers.size()));
    put(bytes, static_cast<std::uint8_t>(model.residual ? 1 : 0));
    for (const CnnLayer& layer : model.layers) {
        put(bytes, static_cast<std::uint32_t>(layer.out_channels));
        put(bytes, static_cast<std::uint32_t>(layer.in_channels));
        put(bytes, static_cast<std::uint32_t>(layer.kernel));
        const size_t count = static_cast<size_t>(layer.out_channels) * layer.in_channels *
                             layer.kernel * layer.kernel;
        detail::require(layer.weights.size() == count &&
                        layer.bias.size() == static_cast<size_t>(layer.out_channels),
                        "save_cnn: layer tensor sizes inconsistent with dims");
        const auto* w = reinterpret_cast<const unsigned char*>(layer.weights.data());
        bytes.insert(bytes.end(), w, w + count * sizeof(float));
        const auto* b = reinterpret_cast<const unsigned char*>(layer.bias.data());
        bytes.insert(bytes.end(), b, b + layer.bias.size() * sizeof(float));
    }
    put(bytes, crc32_ieee(bytes.data(), bytes.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    detail::require(static_cast<bool>(out), "save_cnn: cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ImagePlane apply_cnn(const ImagePlane& x, const CnnModel& model) {
    detail::require(!model.layers.empty(), "apply_cnn: model has no layers");
    detail::require(model.layers.front().in_channels == 1 && model.layers.back().out_channels == 1,
                    "apply_cnn: model must map one channel to one channel");
    const int side = x.side;
    const size_t npix = static_cast<size_t>(side) * side;

    std::vector<std::vector<double>> planes(1, std::vector<double>(npix));
    for (size_t i = 0; i < npix; ++i) planes[0][i] = x.values[i] / 255.0;

    for (const CnnLayer& layer : model.layers) {
        detail::require(static_cast<int>(planes.size()) == layer.in_channels,
                        "apply_cnn: channel count mismatch");
        const int pad = (layer.kernel - 1) / 2;
        std::vector<std::vector<double>> next(static_cast<size_t>(layer.out_channels),
                                              std::vector<double>(npix));
        for (int oc = 0; oc < layer.out_channels; ++oc) {
            std::vector<double>& dst = next[oc];
            for (int r = 0; r < side; ++r) {
                for (int c = 0; c < side; ++c) {
                    double acc = layer.bias[oc];
                    for (int ic = 0; ic < layer.in_channels; ++ic) {
                        const std::vector<double>& src = planes[ic];
                        const float* w = layer.weights.data() +
                                         (static_cast<size_t>(oc) * layer.in_channels + ic) *
                                             layer.kernel * layer.kernel;
                        for (int dr = 0; dr < layer.kernel; ++dr) {
                            const int rr = r + dr - pad;
                            if (rr < 0 || rr >= side) continue;
                            for (int dc = 0; dc < layer.kernel; ++dc) {
                                const int cc = c + dc - pad;
                                if (cc < 0 || cc >= side) continue;
                                acc += w[dr * layer.kernel + dc] * src[static_cast<size_t>(rr) * side + cc];
                            }
                        }
                    }
                    if (layer.relu && acc < 0.0) acc = 0.0;
                    if (!std::isfinite(acc))
                        throw std::runtime_error("apply_cnn: non-finite intermediate (corrupt weights?)");
                    dst[static_cast<size_t>(r) * side + c] = acc;
                }
            }
        }
        planes = std::move(next);
    }

    ImagePlane out = ImagePlane::zeros(side);
    for (size_t i = 0; i < npix; ++i) {
        const double v = model.residual ? x.values[i] / 255.0 - planes[0][i] : planes[0][i];
        out.values[i] = 255.0 * v;
    }
    return out;
}

}  // namespace fpr
