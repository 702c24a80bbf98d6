#pragma once

#include "fpr/types.hpp"

namespace fpr {

/// Oversampled Fourier amplitudes with noise metadata. sigma_bar is the
/// estimated amplitude-domain noise std feeding the lambda = c*sigma_bar^2
/// parameter rule; it is the 0.1 sentinel when alpha = 0.
struct Measurement {
    int side = 0;
    std::vector<double> amplitudes;  // y >= 0, row-major over the padded grid
    double alpha = 0.0;
    double sigma_bar = 0.1;

    Measurement() = default;
    Measurement(int side_, std::vector<double> y, double alpha_ = 0.0, double sigma_bar_ = 0.1)
        : side(side_), amplitudes(std::move(y)), alpha(alpha_), sigma_bar(sigma_bar_) {
        detail::require(side > 0, "Measurement: side must be positive");
        detail::require(static_cast<int>(amplitudes.size()) == side * side,
                        "Measurement: amplitude count must equal side^2");
        for (double a : amplitudes)
            detail::require(a >= 0.0, "Measurement: amplitudes must be nonnegative");
        detail::require(alpha >= 0.0 && sigma_bar >= 0.0,
                        "Measurement: alpha and sigma_bar must be nonnegative");
    }

    int bin_count() const { return side * side; }
};

/// Unitary 2-D DFT (1/sqrt(m) scaling on both directions, so Parseval holds).
ComplexField dft2(const ComplexField& v);
ComplexField idft2(const ComplexField& v);

/// Projection onto M = { z : |Fz| = y }: replace Fourier amplitudes by y,
/// keep phases. Bins where Fv vanishes take amplitude y with phase 0.
ComplexField project_measurement(const ComplexField& v, const Measurement& meas);

/// prox of tau * (1/2)||y - |Fz|||^2: the convex combination
/// v/(tau+1) + tau/(tau+1) * proj_M(v), the global minimizer.
ComplexField prox_amplitude(const ComplexField& v, const Measurement& meas, double tau);

/// |F v| per bin.
std::vector<double> field_amplitudes(const ComplexField& v);

}  // namespace fpr
