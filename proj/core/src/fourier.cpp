#include "fpr/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace fpr {

namespace {

// FFTW's planner is not thread-safe; plan execution on distinct arrays is.
// Plans are cached per (side, direction) and created FFTW_UNALIGNED so they
// can run on any caller buffer via fftw_execute_dft.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int side, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(side, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> scratch_in(static_cast<size_t>(side) * side);
        std::vector<fftw_complex> scratch_out(scratch_in.size());
        fftw_plan p = fftw_plan_dft_2d(side, side, scratch_in.data(), scratch_out.data(), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        detail::require(p != nullptr, "fourier: FFTW plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

ComplexField transform(const ComplexField& v, int sign) {
    ComplexField out = ComplexField::zeros(v.side);
    fftw_plan plan = PlanCache::instance().get(v.side, sign);
    // Out-of-place c2c transforms leave the input intact.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(v.values.data())),
                     reinterpret_cast<fftw_complex*>(out.values.data()));
    const double scale = 1.0 / v.side;  // 1/sqrt(m)
    for (Complex& z : out.values) z *= scale;
    return out;
}

}  // namespace

ComplexField dft2(const ComplexField& v) { return transform(v, FFTW_FORWARD); }

ComplexField idft2(const ComplexField& v) { return transform(v, FFTW_BACKWARD); }

ComplexField project_measurement(const ComplexField& v, const Measurement& meas) {
    detail::require(v.side == meas.side, "project_measurement: dimension mismatch");
    ComplexField spec = dft2(v);
    for (int i = 0; i < spec.bin_count(); ++i) {
        const double a = std::abs(spec.values[i]);
        const double y = meas.amplitudes[i];
        if (a == 0.0)
            spec.values[i] = Complex(y, 0.0);
        else
            spec.values[i] *= y / a;
    }
    return idft2(spec);
}

ComplexField prox_amplitude(const ComplexField& v, const Measurement& meas, double tau) {
    detail::require(tau > 0.0, "prox_amplitude: tau must be positive");
    ComplexField proj = project_measurement(v, meas);
    const double wv = 1.0 / (tau + 1.0);
    const double wp = tau / (tau + 1.0);
    ComplexField out = ComplexField::zeros(v.side);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = wv * v.values[i] + wp * proj.values[i];
    return out;
}

std::vector<double> field_amplitudes(const ComplexField& v) {
    ComplexField spec = dft2(v);
    std::vector<double> amps(spec.values.size());
    for (size_t i = 0; i < amps.size(); ++i) amps[i] = std::abs(spec.values[i]);
    return amps;
}

}  // namespace fpr
