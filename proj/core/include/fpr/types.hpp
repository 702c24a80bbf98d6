#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpr {

using Real = double;
using Complex = std::complex<double>;

namespace detail {
inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}
}  // namespace detail

/// Real-valued square signal in the object domain, row-major.
/// Ground-truth inputs live in [0,255]; solver intermediates may not.
struct ImagePlane {
    int side = 0;
    std::vector<Real> values;

    ImagePlane() = default;
    ImagePlane(int side_, std::vector<Real> v) : side(side_), values(std::move(v)) {
        detail::require(side > 0, "ImagePlane: side must be positive");
        detail::require(static_cast<int>(values.size()) == side * side,
                        "ImagePlane: values size must equal side^2");
    }
    static ImagePlane zeros(int side) {
        return ImagePlane(side, std::vector<Real>(static_cast<size_t>(side) * side, 0.0));
    }

    int pixel_count() const { return side * side; }
    Real& at(int r, int c) { return values[static_cast<size_t>(r) * side + c]; }
    Real at(int r, int c) const { return values[static_cast<size_t>(r) * side + c]; }
};

/// Complex square signal in the padded (oversampled) domain, row-major.
struct ComplexField {
    int side = 0;
    std::vector<Complex> values;

    ComplexField() = default;
    ComplexField(int side_, std::vector<Complex> v) : side(side_), values(std::move(v)) {
        detail::require(side > 0, "ComplexField: side must be positive");
        detail::require(static_cast<int>(values.size()) == side * side,
                        "ComplexField: values size must equal side^2");
    }
    static ComplexField zeros(int side) {
        return ComplexField(side, std::vector<Complex>(static_cast<size_t>(side) * side));
    }

    int bin_count() const { return side * side; }
    Complex& at(int r, int c) { return values[static_cast<size_t>(r) * side + c]; }
    Complex at(int r, int c) const { return values[static_cast<size_t>(r) * side + c]; }
};

inline double norm2(const ImagePlane& x) {
    double s = 0;
    for (double v : x.values) s += v * v;
    return std::sqrt(s);
}

inline double norm2(const ComplexField& v) {
    double s = 0;
    for (const Complex& c : v.values) s += std::norm(c);
    return std::sqrt(s);
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
    detail::require(a.side == b.side, "max_abs_diff: size mismatch");
    double m = 0;
    for (size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

inline double max_abs_diff(const ImagePlane& a, const ImagePlane& b) {
    detail::require(a.side == b.side, "max_abs_diff: size mismatch");
    double m = 0;
    for (size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace fpr
