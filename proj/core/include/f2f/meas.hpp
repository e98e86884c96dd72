#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "f2f/comb.hpp"
#include "f2f/fock.hpp"
#include "f2f/rng.hpp"

namespace f2f::meas {

using fock::Detector;
using fock::FockVector;

/// How xi1 ~ sqrt(m) xi2 is enforced: from the configured mean photon
/// number, or from the trajectory's own initial m (oracle runs only).
enum class BalanceRef { MeanN, ExactN };

struct InterferometerParams {
    double xi1 = 1.0;
    double xi2 = 1.0;
    double phi = 0.0;  // arm phase, radians
    int n_min = 0;     // background counts per detector per pulse
    BalanceRef balance_ref = BalanceRef::MeanN;
};

/// xi1 = detune * sqrt(reference_n) * xi2. Throws ConfigError if both
/// coefficients end up zero.
InterferometerParams balanced_params(double xi2, double reference_n, double phi, int n_min = 0,
                                     BalanceRef ref = BalanceRef::MeanN, double detune = 1.0);

void validate(const InterferometerParams& params);

/// Jump operator at time t: theta = phi - 2 pi delta t.
fock::JumpOperator jump_at(const InterferometerParams& params, double delta, double t);

struct DetectionProbabilities {
    double p1 = 0.5;
    double p2 = 0.5;
};

/// Throws NumericalError if neither detector can fire.
DetectionProbabilities detection_probabilities(const FockVector& state, const InterferometerParams& params,
                                               double delta, double t);

struct Detection {
    Detector detector = Detector::D1;
    FockVector state;
    double p1 = 0.5;
};

Detection detect_one(const FockVector& state, const InterferometerParams& params, double delta, double t, Rng& rng);

/// Applies one detection with a prescribed outcome and renormalizes.
Detection detect_forced(const FockVector& state, const InterferometerParams& params, double delta, double t,
                        Detector detector);

struct CountModel {
    enum class Kind { Fixed, Poisson };
    Kind kind = Kind::Poisson;
    double mean = 100.0;  // Poisson mean, or the fixed count

    int draw(Rng& rng) const;
};

struct StateSummary {
    double mean_n = 0.0;
    double abs_b = 0.0;
    double arg_b = 0.0;
};

StateSummary summarize(const FockVector& state);

struct PulseRecord {
    int index = 1;          // N, 1-based
    double time = 0.0;      // t_N = (N-1)/f_rep
    double phi = 0.0;       // arm phase during this pulse
    int n1 = 0;             // reported counts, including n_min background
    int n2 = 0;
    int jumps1 = 0;         // detections that collapsed the state
    int jumps2 = 0;
    int requested = 0;      // detections drawn from the count model
    double p1_first = 0.5;
    StateSummary post;
    bool exhausted = false;
};

struct PulseResult {
    PulseRecord record;
    FockVector state;
};

struct ForcedCounts {
    int n1 = 0;
    int n2 = 0;
};

/// Runs one pulse at t_N = (N-1)/f_rep. With `forced`, the detector
/// outcomes are prescribed rather than sampled. Background counts n_min
/// are added to both reported totals without collapsing the state.
PulseResult simulate_pulse(const FockVector& state, const InterferometerParams& params, const comb::CombMode& comb,
                           int pulse_index, const CountModel& counts, Rng& rng,
                           std::optional<ForcedCounts> forced = std::nullopt);

enum class LaserInput { FixedM, Poissonian };

/// Arm phase per pulse: phi0 + offset + 2 pi rate (N-1) + pi chirp (N-1)^2.
struct PhiSchedule {
    enum class Kind { Constant, Linear, Quadratic };
    Kind kind = Kind::Constant;
    double phi0 = 0.0;
    double rate = 0.0;
    double chirp = 0.0;

    double at(int pulse_index, double offset = 0.0) const;
};

struct TrajectorySpec {
    comb::CombMode comb;
    double xi2 = 1.0;
    double detune = 1.0;
    BalanceRef balance_ref = BalanceRef::MeanN;
    PhiSchedule phi;
    bool randomize_phi = false;
    int n_min = 0;
    LaserInput laser = LaserInput::FixedM;
    double mean_n = 1e4;
    CountModel counts;
    int pulses = 10;
    bool force_balanced_first_pulse = false;
    std::vector<int> trace_pulses;  // 0 = before the first pulse
    int trace_points = 256;
};

struct FieldTrace {
    int after_pulse = 0;
    std::vector<double> times;
    std::vector<double> field;
};

struct Trajectory {
    std::uint64_t stream = 0;
    long long initial_m = 0;
    double phi_offset = 0.0;
    double xi1 = 0.0;
    StateSummary initial;
    std::vector<PulseRecord> pulses;
    std::vector<FieldTrace> traces;
    bool exhausted = false;
};

/// Called after each pulse (pulse 0 = initial state) with the current state
/// and the number of state-collapsing detections so far.
using StateObserver = std::function<void(int after_pulse, const FockVector& state, int detections)>;

Trajectory run_trajectory(const TrajectorySpec& spec, Rng& rng, const StateObserver& observer = {});

}  // namespace f2f::meas
