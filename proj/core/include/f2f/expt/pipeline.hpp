#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "f2f/expt/calibration.hpp"
#include "f2f/expt/config.hpp"
#include "f2f/expt/records.hpp"

namespace f2f::expt {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Results must be written to slot i by the caller; the first
/// exception thrown is rethrown after all workers join.
template <typename Body>
void parallel_for(int n, int threads, Body&& body) {
    if (n <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Trajectory i uses Rng(seed, i), so records are independent of scheduling.
std::vector<TrajectoryRecord> run_ensemble(const ExperimentConfig& config, bool track_gamma_fidelity = false);

RunMeta make_meta(const ExperimentConfig& config, const std::string& command);

struct CalibrationReport {
    std::vector<TrajectoryRecord> records;
    std::vector<CalibrationFit> fits;  // one per trajectory
    double configured_delta = 0.0;
    int discard = 0;
    int stride = 1;

    bool all_accepted() const;
};

/// Simulates the configured ensemble and fits delta to each trajectory.
CalibrationReport calibration_scan(const ExperimentConfig& config);

struct TraceSummary {
    int after_pulse = 0;
    double peak_abs_field = 0.0;
    double coherent_peak = 0.0;  // 2 sqrt(<n>) max|v(t)| on the same grid
    double mean_n = 0.0;
    double abs_b = 0.0;
};

struct EmergenceReport {
    std::vector<TrajectoryRecord> records;
    /// Per trajectory: localized phase Phi = -arg<b> after the last pulse.
    std::vector<double> final_phases;
    double rayleigh_p = 1.0;
    /// Per trajectory, per requested trace pulse.
    std::vector<std::vector<TraceSummary>> traces;
    bool any_exhausted = false;
};

EmergenceReport field_emergence_report(const ExperimentConfig& config);

struct VisibilityPoint {
    int n_min = 0;
    double mean_visibility = 0.0;
    double expected_ratio = 1.0;  // mu / (mu + 2 n_min)
    double measured_ratio = 1.0;  // relative to the first n_min value
    double mean_delta = 0.0;
    int rejected = 0;
};

/// Repeats calibration_scan for each configured n_min.
std::vector<VisibilityPoint> visibility_sweep(const ExperimentConfig& config);

struct OracleResult {
    OracleCase c;
    double fidelity = 0.0;
    double infidelity = 0.0;
};

/// Binomial expansion against direct operator application at each case,
/// with xi1 = sqrt(m) xi2 and arm phase oracle.phi.
std::vector<OracleResult> run_oracle(const ExperimentConfig& config);

/// Localized phase Phi of a state, -arg<b>.
double localized_phase(double arg_b);

}  // namespace f2f::expt
