#pragma once

#include <cstdint>

#include "fpr/types.hpp"

namespace fpr {

/// Embedding of the n-pixel object into the m-bin padded grid: a literal
/// zero-pad into the top-left corner block, scaled by sqrt(m/n). The factor
/// is per-dimension and must be an integer >= 2.
struct OversamplingMap {
    int object_side = 0;
    int padded_side = 0;

    OversamplingMap(int object_side_, int factor = 2)
        : object_side(object_side_), padded_side(object_side_ * factor) {
        detail::require(object_side > 0, "OversamplingMap: object side must be positive");
        detail::require(factor >= 2, "OversamplingMap: oversampling factor must be >= 2");
    }

    int n() const { return object_side * object_side; }
    int m() const { return padded_side * padded_side; }
    int factor() const { return padded_side / object_side; }
    double scale() const { return static_cast<double>(factor()); }  // sqrt(m/n)
};

enum class ConstraintKind { none, support, nonneg_real, support_and_nonneg };

/// A constraint set with an idempotent projection. Masks apply to whichever
/// domain the projected signal lives in; the mask side must match.
struct ConstraintSet {
    ConstraintKind kind = ConstraintKind::none;
    int mask_side = 0;
    std::vector<std::uint8_t> mask;  // nonzero = inside support

    static ConstraintSet none() { return {}; }
    static ConstraintSet nonneg() {
        ConstraintSet c;
        c.kind = ConstraintKind::nonneg_real;
        return c;
    }
    static ConstraintSet support(std::vector<std::uint8_t> m, int side, bool nonneg = false);
    /// The extended support S~ of an oversampling map: the object block in
    /// the padded grid, optionally with the nonnegativity constraint.
    static ConstraintSet padded_block(const OversamplingMap& map, bool nonneg = false);

    bool has_mask() const {
        return kind == ConstraintKind::support || kind == ConstraintKind::support_and_nonneg;
    }
    bool has_nonneg() const {
        return kind == ConstraintKind::nonneg_real || kind == ConstraintKind::support_and_nonneg;
    }
};

/// sqrt(m/n)-scaled zero-pad of x into the corner block; imaginary parts zero.
ComplexField embed(const ImagePlane& x, const OversamplingMap& map);

/// (n/m) * Re(O^T v): the real corner block scaled by sqrt(n/m).
ImagePlane extract(const ComplexField& v, const OversamplingMap& map);

ImagePlane project_constraint(const ImagePlane& x, const ConstraintSet& c);
ComplexField project_constraint(const ComplexField& v, const ConstraintSet& c);

}  // namespace fpr
