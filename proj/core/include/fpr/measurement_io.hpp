#pragma once

#include <filesystem>

#include "fpr/fourier.hpp"

namespace fpr {

/// Flat binary: magic "FPRM", version u32, side u32, alpha f64, sigma_bar
/// f64, then side^2 float64 amplitudes. Little-endian.
void save_measurement(const Measurement& meas, const std::filesystem::path& path);
Measurement load_measurement(const std::filesystem::path& path);

/// Inspection CSV: header row, then one "row,col,amplitude" line per bin.
void write_measurement_csv(const Measurement& meas, const std::filesystem::path& path);

}  // namespace fpr
