#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "f2f/comb.hpp"
#include "f2f/error.hpp"
#include "f2f/gamma.hpp"

using namespace f2f;
using fock::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

/// RMS width of |v(t)|^2 over one period centered on t = 0.
double pulse_rms(const comb::CombMode& c) {
    double w = 0.0, w2 = 0.0;
    for (double t : comb::pulse_window(c, 0.0, 2048)) {
        const double p = std::norm(comb::mode_function(c, t));
        w += p;
        w2 += p * t * t;
    }
    return std::sqrt(w2 / w);
}

}  // namespace

TEST(BuildComb, SingleLine) {
    auto c = comb::build_comb(10, 2.0, 1, 0.25);
    ASSERT_EQ(c.lines.size(), 1u);
    EXPECT_EQ(c.lines[0].index, 10);
    EXPECT_DOUBLE_EQ(c.lines[0].weight, 1.0);
}

TEST(BuildComb, DefaultIsNormalized) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    double s = 0.0;
    for (const auto& l : c.lines) s += l.weight * l.weight;
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(c.lines.front().index, 16);
    EXPECT_NO_THROW(comb::validate(c));
}

TEST(BuildComb, RejectsBadParameters) {
    EXPECT_THROW(comb::build_comb(10, 2.0, 30, 0.0), ConfigError);
    EXPECT_THROW(comb::build_comb(40, 0.0, 9, 0.0), ConfigError);
    EXPECT_THROW(comb::build_comb(40, 6.0, 0, 0.0), ConfigError);
    EXPECT_THROW(comb::build_comb(40, 6.0, 9, 1.0), ConfigError);
    EXPECT_THROW(comb::build_comb(40, 6.0, 9, -0.1), ConfigError);
}

TEST(ModeFunction, SingleLineAtOrigin) {
    auto c = comb::build_comb(12, 1.0, 1, 0.3, 2.5);
    EXPECT_NEAR(std::abs(comb::mode_function(c, 0.0) - Complex(2.5 * std::sqrt(12.3 / 12.0), 0.0)), 0.0, 1e-14);
}

TEST(ModeFunction, PulseShortensAsWidthGrows) {
    double prev = 1e9;
    for (double width : {2.0, 4.0, 8.0}) {
        const double rms = pulse_rms(comb::build_comb(60, width, 81, 0.0));
        EXPECT_LT(rms, prev);
        prev = rms;
    }
}

TEST(ModeFunction, EnvelopePhaseSlipPerPeriod) {
    auto c = comb::build_comb(40, 6.0, 49, 0.17);
    for (double t : {-0.3, 0.0, 0.11, 0.4}) {
        const Complex now = comb::mode_function(c, t);
        const Complex next = comb::mode_function(c, t + 1.0);
        EXPECT_NEAR(std::abs(next - std::polar(1.0, -2 * kPi * 0.17) * now), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(next), std::abs(now), 1e-10);
    }
}

TEST(ModeFunction, Parseval) {
    auto c = comb::build_comb(40, 6.0, 49, 0.31, 1.7);
    const int points = 4096;
    double integral = 0.0;
    for (int i = 0; i < points; ++i) integral += std::norm(comb::mode_function(c, double(i) / points)) / points;
    double expected = 0.0;
    for (const auto& l : c.lines) expected += c.frequency(l) / c.center_frequency() * l.weight * l.weight * 1.7 * 1.7;
    EXPECT_NEAR(integral / expected, 1.0, 1e-6);
}

TEST(FieldExpectation, NumberStatesVanish) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    for (std::size_t m : {0u, 3u, 10000u}) {
        for (double t : {-0.2, 0.0, 0.05}) EXPECT_EQ(comb::field_expectation(fock::number_state(m), c, t), 0.0);
    }
}

TEST(FieldExpectation, LinearInAmplitudeAndRotatesWithPhase) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    const Complex b = std::polar(3.0, 0.4);
    for (double t : {-0.1, 0.0, 0.07}) {
        EXPECT_NEAR(comb::field_from_amplitude(2.0 * b, c, t), 2.0 * comb::field_from_amplitude(b, c, t), 1e-12);
    }
    // Phase rotation e^{i n theta} on every |n> rotates <b> by theta.
    auto g = gamma::gamma_state(gamma::make_spec(400, 16, 0.3));
    std::vector<Complex> rotated(g.amplitudes().begin(), g.amplitudes().end());
    const double theta = 0.9;
    for (std::size_t i = 0; i < rotated.size(); ++i) rotated[i] *= std::polar(1.0, theta * double(g.offset() + i));
    fock::FockVector r(g.offset(), rotated);
    EXPECT_NEAR(std::abs(fock::expect_b(r) - std::polar(1.0, theta) * fock::expect_b(g)), 0.0, 1e-10);
    // A global phase leaves <b> and the field alone.
    std::vector<Complex> global(g.amplitudes().begin(), g.amplitudes().end());
    for (auto& a : global) a *= std::polar(1.0, 1.234);
    fock::FockVector gg(g.offset(), global);
    EXPECT_NEAR(comb::field_expectation(gg, c, 0.01), comb::field_expectation(g, c, 0.01), 1e-10);
}

TEST(GammaClosedForm, MatchesGenericFieldAtPiOverTwo) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    const long long m = 10000;
    const int n = 100;
    auto g = gamma::gamma_state(gamma::make_spec(m, n, kPi / 2));
    std::vector<double> closed, generic;
    for (double t : comb::pulse_window(c, 0.0, 512)) {
        closed.push_back(comb::gamma_field_closed_form(m, n, kPi / 2, c, t));
        generic.push_back(comb::field_expectation(g, c, t));
    }
    EXPECT_LE(rel_l2(closed, generic), 0.01);
}

TEST(GammaClosedForm, AgreementImprovesWithN) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    double prev = 1.0;
    for (int n : {16, 64, 256}) {
        const long long m = 100LL * n;
        auto g = gamma::gamma_state(gamma::make_spec(m, n, 0.4));
        std::vector<double> closed, generic;
        for (double t : comb::pulse_window(c, 0.0, 256)) {
            closed.push_back(comb::gamma_field_closed_form(m, n, 0.4, c, t));
            generic.push_back(comb::field_expectation(g, c, t));
        }
        const double err = rel_l2(closed, generic);
        EXPECT_LT(err, prev) << "n=" << n;
        prev = err;
    }
}

TEST(GammaClosedForm, PiShiftFlipsSign) {
    auto c = comb::build_comb(40, 6.0, 49, 0.2);
    for (double t : {-0.1, 0.0, 0.03}) {
        EXPECT_NEAR(comb::gamma_field_closed_form(10000, 100, 0.5 + kPi, c, t),
                    -comb::gamma_field_closed_form(10000, 100, 0.5, c, t), 1e-9);
    }
}

TEST(GammaClosedForm, NextPulseShiftsEnvelopePhase) {
    const double delta = 0.13;
    auto c = comb::build_comb(40, 6.0, 49, delta);
    for (double t : {-0.1, 0.0, 0.03}) {
        EXPECT_NEAR(comb::gamma_field_closed_form(10000, 100, 0.5, c, t + 1.0),
                    comb::gamma_field_closed_form(10000, 100, 0.5 + 2 * kPi * delta, c, t), 1e-8);
    }
}

TEST(GammaClosedForm, RejectsTooFewPhotons) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    EXPECT_THROW(comb::gamma_field_closed_form(100, 100, 0.0, c, 0.0), ConfigError);
}

TEST(PulseWindow, GridCoversOnePeriod) {
    auto c = comb::build_comb(40, 6.0, 49, 0.0);
    auto grid = comb::pulse_window(c, 3.0, 4);
    ASSERT_EQ(grid.size(), 4u);
    EXPECT_DOUBLE_EQ(grid.front(), 2.5);
    EXPECT_DOUBLE_EQ(grid[1] - grid[0], 0.25);
}
