#include "fpr/grid.hpp"

namespace fpr {

ConstraintSet ConstraintSet::support(std::vector<std::uint8_t> m, int side, bool nonneg) {
    detail::require(side > 0 && static_cast<int>(m.size()) == side * side,
                    "ConstraintSet: mask size must equal side^2");
    ConstraintSet c;
    c.kind = nonneg ? ConstraintKind::support_and_nonneg : ConstraintKind::support;
    c.mask_side = side;
    c.mask = std::move(m);
    return c;
}

ConstraintSet ConstraintSet::padded_block(const OversamplingMap& map, bool nonneg) {
    std::vector<std::uint8_t> m(static_cast<size_t>(map.m()), 0);
    for (int r = 0; r < map.object_side; ++r)
        for (int c = 0; c < map.object_side; ++c)
            m[static_cast<size_t>(r) * map.padded_side + c] = 1;
    return support(std::move(m), map.padded_side, nonneg);
}

ComplexField embed(const ImagePlane& x, const OversamplingMap& map) {
    detail::require(x.side == map.object_side, "embed: image side does not match map");
    ComplexField out = ComplexField::zeros(map.padded_side);
    const double s = map.scale();
    for (int r = 0; r < x.side; ++r)
        for (int c = 0; c < x.side; ++c)
            out.at(r, c) = Complex(s * x.at(r, c), 0.0);
    return out;
}

ImagePlane extract(const ComplexField& v, const OversamplingMap& map) {
    detail::require(v.side == map.padded_side, "extract: field side does not match map");
    ImagePlane out = ImagePlane::zeros(map.object_side);
    const double s = 1.0 / map.scale();  // (n/m) * sqrt(m/n)
    for (int r = 0; r < out.side; ++r)
        for (int c = 0; c < out.side; ++c)
            out.at(r, c) = s * v.at(r, c).real();
    return out;
}

namespace {

void check_mask(const ConstraintSet& c, int side) {
    if (c.has_mask())
        detail::require(c.mask_side == side, "project_constraint: mask side does not match signal");
}

}  // namespace

ImagePlane project_constraint(const ImagePlane& x, const ConstraintSet& c) {
    check_mask(c, x.side);
    ImagePlane out = x;
    if (c.has_mask()) {
        for (size_t i = 0; i < out.values.size(); ++i)
            if (!c.mask[i]) out.values[i] = 0.0;
    }
    if (c.has_nonneg()) {
        for (double& v : out.values)
            if (v < 0.0) v = 0.0;
    }
    return out;
}

ComplexField project_constraint(const ComplexField& v, const ConstraintSet& c) {
    check_mask(c, v.side);
    ComplexField out = v;
    if (c.has_mask()) {
        for (size_t i = 0; i < out.values.size(); ++i)
            if (!c.mask[i]) out.values[i] = Complex(0.0, 0.0);
    }
    if (c.has_nonneg()) {
        for (Complex& z : out.values)
            if (z.real() < 0.0) z = Complex(0.0, z.imag());
    }
    return out;
}

}  // namespace fpr
