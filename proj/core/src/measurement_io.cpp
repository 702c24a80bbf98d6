#include "fpr/measurement_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace fpr {

namespace {
constexpr char kMagic[4] = {'F', 'P', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_measurement(const Measurement& meas, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    detail::require(static_cast<bool>(out), "save_measurement: cannot open " + path.string());
    out.write(kMagic, 4);
    const std::uint32_t version = kVersion;
    const std::uint32_t side = static_cast<std::uint32_t>(meas.side);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&side), 4);
    out.write(reinterpret_cast<const char*>(&meas.alpha), 8);
    out.write(reinterpret_cast<const char*>(&meas.sigma_bar), 8);
    out.write(reinterpret_cast<const char*>(meas.amplitudes.data()),
              static_cast<std::streamsize>(meas.amplitudes.size() * sizeof(double)));
}

Measurement load_measurement(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    detail::require(static_cast<bool>(in), "load_measurement: cannot open " + path.string());
    char magic[4];
    std::uint32_t version = 0, side = 0;
    double alpha = 0, sigma_bar = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&side), 4);
    in.read(reinterpret_cast<char*>(&alpha), 8);
    in.read(reinterpret_cast<char*>(&sigma_bar), 8);
    detail::require(in.good() && std::memcmp(magic, kMagic, 4) == 0,
                    "load_measurement: bad header in " + path.string());
    detail::require(version == kVersion, "load_measurement: unsupported version");
    detail::require(side > 0 && side < 65536, "load_measurement: implausible side");
    std::vector<double> y(static_cast<size_t>(side) * side);
    in.read(reinterpret_cast<char*>(y.data()), static_cast<std::streamsize>(y.size() * sizeof(double)));
    detail::require(in.gcount() == static_cast<std::streamsize>(y.size() * sizeof(double)),
                    "load_measurement: truncated payload in " + path.string());
    return Measurement(static_cast<int>(side), std::move(y), alpha, sigma_bar);
}

void write_measurement_csv(const Measurement& meas, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    detail::require(static_cast<bool>(out), "write_measurement_csv: cannot open " + path.string());
    out << "row,col,amplitude\n";
    char buf[64];
    for (int r = 0; r < meas.side; ++r) {
        for (int c = 0; c < meas.side; ++c) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", r, c,
                          meas.amplitudes[static_cast<size_t>(r) * meas.side + c]);
            out << buf;
        }
    }
}

}  // namespace fpr
