#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "f2f/error.hpp"
#include "f2f/expt/calibration.hpp"
#include "f2f/expt/pipeline.hpp"

using namespace f2f;
using namespace f2f::expt;

namespace {

constexpr double kPi = std::numbers::pi;

/// Noiseless rate(N) = A + B cos(theta0 + phi_N - 2 pi delta (N-1)), written
/// straight from the model rather than through the simulator.
std::vector<RateSample> analytic(double delta, const meas::PhiSchedule& sched, int pulses, double a, double b,
                                 double theta0) {
    std::vector<RateSample> s;
    for (int n = 11; n <= pulses; ++n) {
        const double phi = sched.at(n);
        s.push_back({n, phi, a + b * std::cos(theta0 + phi - 2 * kPi * delta * (n - 1))});
    }
    return s;
}

}  // namespace

TEST(FitDelta, NoiselessRecoveryToMachinePrecision) {
    meas::PhiSchedule quad;
    quad.kind = meas::PhiSchedule::Kind::Quadratic;
    quad.chirp = 0.05;
    meas::PhiSchedule constant;
    for (double delta : {0.0, 0.13, 0.37, 0.5, 0.87, 0.999}) {
        for (const auto& sched : {quad, constant}) {
            if (sched.kind == meas::PhiSchedule::Kind::Constant && (delta == 0.0 || delta == 0.5)) continue;
            const auto fit = fit_delta(analytic(delta, sched, 256, 0.5, 0.4, 0.7));
            if (sched.kind == meas::PhiSchedule::Kind::Constant) {
                // Without phase modulation delta and 1 - delta give the same rates.
                EXPECT_LE(std::min(delta_distance(fit.delta, delta), delta_distance(fit.delta, 1.0 - delta)), 1e-9);
            } else {
                EXPECT_LE(delta_distance(fit.delta, delta), 1e-9) << delta;
                EXPECT_NEAR(fit.offset, 0.5, 1e-9);
                EXPECT_NEAR(fit.amplitude, 0.4, 1e-9);
                EXPECT_NEAR(std::remainder(fit.theta0 - 0.7, 2 * kPi), 0.0, 1e-6);
                EXPECT_NEAR(fit.visibility, 0.8, 1e-9);
            }
            EXPECT_TRUE(fit.accepted);
            EXPECT_LT(fit.rms_residual, 1e-9);
        }
    }
}

TEST(FitDelta, RejectsFlatRates) {
    std::vector<RateSample> s;
    for (int n = 1; n <= 64; ++n) s.push_back({n, 0.0, 0.5 + 0.01 * std::cos(2.0 * n)});
    const auto fit = fit_delta(s);
    EXPECT_FALSE(fit.accepted);
    EXPECT_NE(fit.diagnostic.find("visibility"), std::string::npos);
}

TEST(FitDelta, NeedsFourSamples) {
    std::vector<RateSample> s{{1, 0.0, 0.5}, {2, 0.0, 0.4}, {3, 0.0, 0.3}};
    EXPECT_THROW(fit_delta(s), ConfigError);
}

TEST(RateSamples, DiscardStrideAndEmptyPulses) {
    std::vector<meas::PulseRecord> p(20);
    for (int i = 0; i < 20; ++i) {
        p[i].index = i + 1;
        p[i].n1 = i;
        p[i].n2 = 10;
    }
    p[14].n1 = p[14].n2 = 0;
    const auto s = rate_samples(p, 10, 2);
    ASSERT_EQ(s.size(), 4u);  // pulses 11, 13, 17, 19
    EXPECT_EQ(s[0].pulse, 11);
    EXPECT_DOUBLE_EQ(s[0].rate, 10.0 / 20.0);
    EXPECT_EQ(s[2].pulse, 17);
    EXPECT_THROW(rate_samples(p, -1, 1), ConfigError);
}

TEST(DeltaDistance, WrapsOnUnitCircle) {
    EXPECT_NEAR(delta_distance(0.999, 0.001), 0.002, 1e-15);
    EXPECT_NEAR(delta_distance(0.2, 0.7), 0.5, 1e-15);
}

TEST(CalibrationScan, StationaryCountsAtZeroOffset) {
    ExperimentConfig c;
    c.comb.delta = 0.0;
    c.interferometer.phi.kind = meas::PhiSchedule::Kind::Quadratic;
    c.interferometer.phi.chirp = 0.05;
    c.laser.mean_n = 1e5;
    c.counts.mean = 200;
    c.run.pulses = 64;
    c.run.seed = 3;
    const auto report = calibration_scan(c);
    ASSERT_EQ(report.fits.size(), 1u);
    EXPECT_TRUE(report.fits[0].accepted);
    EXPECT_LT(delta_distance(report.fits[0].delta, 0.0), 1e-3);
}

TEST(CalibrationScan, NeedsEnoughPulses) {
    ExperimentConfig c;
    c.run.pulses = 20;
    EXPECT_THROW(calibration_scan(c), ConfigError);
}
