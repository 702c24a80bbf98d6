#include <doctest.h>

#include "fpr/fourier.hpp"
#include "support/oracles.hpp"

using namespace fpr;

TEST_CASE("dft2 of a delta is the constant 1/sqrt(m)") {
    ComplexField v = ComplexField::zeros(4);
    v.at(0, 0) = Complex(1.0, 0.0);
    const ComplexField spec = dft2(v);
    for (const Complex& z : spec.values) {
        CHECK(z.real() == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(z.imag()) <= 1e-14);
    }
}

TEST_CASE("dft2 of all-ones concentrates sqrt(m)*mean at DC") {
    ComplexField v(4, std::vector<Complex>(16, Complex(1.0, 0.0)));
    const ComplexField spec = dft2(v);
    CHECK(spec.at(0, 0).real() == doctest::Approx(4.0).epsilon(1e-13));
    for (int i = 1; i < 16; ++i) CHECK(std::abs(spec.values[static_cast<size_t>(i)]) <= 1e-12);

    // direct-summation oracle agrees bin by bin
    const ComplexField ref = oracle::naive_forward(v);
    CHECK(max_abs_diff(spec, ref) <= 1e-12);
}

TEST_CASE("dft2 matches the direct-summation oracle on random fields") {
    SplitMix64 rng(21);
    for (int side : {2, 3, 5, 8}) {
        const ComplexField v = oracle::random_field(side, rng, 2.0);
        CHECK(max_abs_diff(dft2(v), oracle::naive_forward(v)) <= 1e-10);
        CHECK(max_abs_diff(idft2(v), oracle::naive_inverse(v)) <= 1e-10);
    }
}

TEST_CASE("idft2 inverts dft2 and Parseval holds") {
    SplitMix64 rng(22);
    for (int side : {2, 4, 6, 16}) {
        const ComplexField v = oracle::random_field(side, rng, 3.0);
        const ComplexField spec = dft2(v);
        CHECK(max_abs_diff(idft2(spec), v) <= 1e-12 * std::max(1.0, norm2(v)));
        CHECK(norm2(spec) == doctest::Approx(norm2(v)).epsilon(1e-12));
    }
}

namespace {

Measurement random_measurement(int side, SplitMix64& rng) {
    std::vector<double> y(static_cast<size_t>(side) * side);
    for (double& v : y) v = rng.uniform(0.0, 4.0);
    return Measurement(side, std::move(y));
}

ComplexField member_of_m(const Measurement& meas, SplitMix64& rng) {
    ComplexField spec = ComplexField::zeros(meas.side);
    for (int i = 0; i < meas.bin_count(); ++i) {
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        spec.values[static_cast<size_t>(i)] =
            meas.amplitudes[static_cast<size_t>(i)] * Complex(std::cos(phase), std::sin(phase));
    }
    return idft2(spec);
}

}  // namespace

TEST_CASE("project_measurement fixes members of M") {
    SplitMix64 rng(23);
    const Measurement meas = random_measurement(4, rng);
    const ComplexField v = member_of_m(meas, rng);
    CHECK(max_abs_diff(project_measurement(v, meas), v) <= 1e-12 * std::max(1.0, norm2(v)));
}

TEST_CASE("project_measurement output has amplitude y with preserved phases") {
    SplitMix64 rng(24);
    const Measurement meas = random_measurement(8, rng);
    const ComplexField v = oracle::random_field(8, rng, 2.0);
    const ComplexField out = project_measurement(v, meas);

    const ComplexField fv = dft2(v);
    const ComplexField fout = dft2(out);
    double ymax = 0;
    for (double y : meas.amplitudes) ymax = std::max(ymax, y);
    for (int i = 0; i < meas.bin_count(); ++i) {
        const size_t idx = static_cast<size_t>(i);
        CHECK(std::abs(std::abs(fout.values[idx]) - meas.amplitudes[idx]) <= 1e-9 * ymax);
        if (std::abs(fv.values[idx]) > 1e-6) {
            const Complex ratio = fout.values[idx] / fv.values[idx];
            CHECK(std::abs(std::arg(ratio)) <= 1e-9);  // phase preserved
        }
    }
}

TEST_CASE("project_measurement of the zero field is idft2(y)") {
    SplitMix64 rng(25);
    const Measurement meas = random_measurement(4, rng);
    const ComplexField zero = ComplexField::zeros(4);
    ComplexField spec = ComplexField::zeros(4);
    for (int i = 0; i < 16; ++i) spec.values[static_cast<size_t>(i)] = meas.amplitudes[static_cast<size_t>(i)];
    CHECK(max_abs_diff(project_measurement(zero, meas), idft2(spec)) <= 1e-12);
}

TEST_CASE("project_measurement is closer than random members of M") {
    SplitMix64 rng(26);
    const Measurement meas = random_measurement(4, rng);
    const ComplexField v = oracle::random_field(4, rng, 2.0);
    const ComplexField proj = project_measurement(v, meas);
    double dp = 0;
    for (size_t i = 0; i < v.values.size(); ++i) dp += std::norm(proj.values[i] - v.values[i]);
    for (int trial = 0; trial < 10000; ++trial) {
        const ComplexField member = member_of_m(meas, rng);
        double dm = 0;
        for (size_t i = 0; i < v.values.size(); ++i) dm += std::norm(member.values[i] - v.values[i]);
        CHECK(dp <= dm + 1e-9);
    }
}

TEST_CASE("prox_amplitude limits") {
    SplitMix64 rng(27);
    const Measurement meas = random_measurement(4, rng);

    SUBCASE("members of M are fixed points") {
        const ComplexField v = member_of_m(meas, rng);
        CHECK(max_abs_diff(prox_amplitude(v, meas, 0.7), v) <= 1e-12 * std::max(1.0, norm2(v)));
    }
    SUBCASE("tau -> 0 returns v") {
        const ComplexField v = oracle::random_field(4, rng, 2.0);
        CHECK(max_abs_diff(prox_amplitude(v, meas, 1e-9), v) <= 1e-7);
    }
    SUBCASE("tau must be positive") {
        CHECK_THROWS_AS(prox_amplitude(ComplexField::zeros(4), meas, 0.0), std::invalid_argument);
    }
}

TEST_CASE("prox_amplitude satisfies the prox inequality") {
    SplitMix64 rng(28);
    const Measurement meas = random_measurement(4, rng);
    const ComplexField v = oracle::random_field(4, rng, 2.0);
    const double tau = 0.8;
    const ComplexField out = prox_amplitude(v, meas, tau);

    auto objective = [&](const ComplexField& z) {
        double dist = 0;
        for (size_t i = 0; i < v.values.size(); ++i) dist += std::norm(v.values[i] - z.values[i]);
        return tau * oracle::amplitude_objective(z, meas.amplitudes) + 0.5 * dist;
    };
    const double at_out = objective(out);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexField z = oracle::random_field(4, rng, 2.0);
        CHECK(at_out <= objective(z) + 1e-8);
    }
}

TEST_CASE("prox_amplitude on a small instance beats random search and perturbations") {
    SplitMix64 rng(29);
    const Measurement meas = random_measurement(2, rng);
    const ComplexField v = oracle::random_field(2, rng, 1.5);
    const double tau = 1.3;
    const ComplexField out = prox_amplitude(v, meas, tau);

    auto objective = [&](const ComplexField& z) {
        double dist = 0;
        for (size_t i = 0; i < v.values.size(); ++i) dist += std::norm(v.values[i] - z.values[i]);
        return tau * oracle::amplitude_objective(z, meas.amplitudes) + 0.5 * dist;
    };
    const double at_out = objective(out);
    for (int trial = 0; trial < 100000; ++trial) {
        ComplexField z = out;
        const double radius = trial % 2 ? 0.3 : 3.0;
        for (Complex& c : z.values)
            c += Complex(radius * (rng.uniform() - 0.5), radius * (rng.uniform() - 0.5));
        CHECK(at_out <= objective(z) + 1e-10);
    }
    for (size_t i = 0; i < out.values.size(); ++i) {
        for (const Complex d : {Complex(1e-4, 0.0), Complex(-1e-4, 0.0), Complex(0.0, 1e-4),
                                Complex(0.0, -1e-4)}) {
            ComplexField z = out;
            z.values[i] += d;
            CHECK(at_out <= objective(z) + 1e-12);
        }
    }
}
