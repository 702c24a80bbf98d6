#include "fpr/sim.hpp"

#include <cmath>
#include <limits>

#include "fpr/rng.hpp"

namespace fpr {

Measurement synthesize_measurement(const ImagePlane& x, const OversamplingMap& map,
                                   const NoiseModel& noise) {
    detail::require(noise.alpha >= 0.0, "synthesize_measurement: alpha must be nonnegative");
    for (double v : x.values)
        detail::require(v >= 0.0 && v <= 255.0,
                        "synthesize_measurement: ground truth must lie in [0,255]");

    const std::vector<double> q = field_amplitudes(embed(x, map));
    std::vector<double> y(q.size());
    if (noise.alpha == 0.0) {
        y = q;
        return Measurement(map.padded_side, std::move(y), 0.0, 0.1);
    }

    SplitMix64 rng(derive_seed(noise.seed, 0x6d656173u));
    double rms = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        const double intensity = q[i] * q[i] + noise.alpha * q[i] * rng.normal();
        y[i] = std::sqrt(std::max(intensity, 0.0));
        const double d = y[i] - q[i];
        rms += d * d;
    }
    rms = std::sqrt(rms / static_cast<double>(q.size()));
    return Measurement(map.padded_side, std::move(y), noise.alpha, rms);
}

double msnr(const Measurement& meas, const std::vector<double>& true_amplitudes, int kind) {
    detail::require(kind == 1 || kind == 2, "msnr: kind must be 1 or 2");
    detail::require(true_amplitudes.size() == meas.amplitudes.size(), "msnr: dimension mismatch");
    double signal = 0.0, noise = 0.0;
    for (size_t i = 0; i < true_amplitudes.size(); ++i) {
        const double q = true_amplitudes[i];
        const double y = meas.amplitudes[i];
        if (kind == 1) {
            signal += q * q * q * q;
            const double d = y * y - q * q;
            noise += d * d;
        } else {
            signal += q * q;
            const double d = y - q;
            noise += d * d;
        }
    }
    detail::require(signal > 0.0, "msnr: vanishing signal");
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    const double ratio = std::sqrt(signal) / std::sqrt(noise);
    return (kind == 1 ? 10.0 : 20.0) * std::log10(ratio);
}

}  // namespace fpr
