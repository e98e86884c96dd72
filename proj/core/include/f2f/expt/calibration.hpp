#pragma once

#include <span>
#include <string>
#include <vector>

#include "f2f/meas.hpp"

namespace f2f::expt {

/// Detector-1 rate observed at pulse N under arm phase phi_N.
struct RateSample {
    int pulse = 1;
    double phi = 0.0;
    double rate = 0.0;
};

/// rate(N) = A + B cos(theta0 + phi_N - 2 pi delta (N-1) / f_rep)
struct CalibrationFit {
    double delta = 0.0;  // in [0, 1), units of f_rep
    double offset = 0.0;     // A
    double amplitude = 0.0;  // B >= 0
    double theta0 = 0.0;
    double visibility = 0.0;  // B / A
    double rms_residual = 0.0;
    int samples = 0;
    bool accepted = false;
    std::string diagnostic;
    std::vector<double> residuals;
};

struct FitOptions {
    int grid_points = 1024;
    double min_visibility = 0.05;
    double f_rep = 1.0;
};

/// Per-pulse D1 fraction n1 / (n1 + n2) of the reported counts, after
/// dropping the first `discard` pulses and keeping every `stride`-th.
/// Pulses with no counts are skipped.
std::vector<RateSample> rate_samples(std::span<const meas::PulseRecord> pulses, int discard, int stride = 1);

/// Linear least squares in (A, C, S) at each trial delta, coarse grid over
/// [0, 1) then golden-section refinement of the best cell. Needs at least
/// four samples; throws ConfigError otherwise. A fit below min_visibility
/// comes back with accepted = false and a diagnostic.
CalibrationFit fit_delta(std::span<const RateSample> samples, const FitOptions& options = {});

/// Smallest distance between two offsets on the unit circle [0, 1).
double delta_distance(double a, double b);

}  // namespace f2f::expt
