#pragma once

#include <string>
#include <vector>

#include "fpr/types.hpp"

namespace fpr {

/// Procedurally generated stand-ins for the natural/unnatural test corpus,
/// deterministic for any side. Used by CI and the acceptance suite so no
/// copyrighted images ship with the repository.
std::vector<std::string> fixture_names();
ImagePlane fixture_image(const std::string& name, int side);

}  // namespace fpr
