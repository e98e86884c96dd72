#include "f2f/expt/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "f2f/error.hpp"
#include "f2f/gamma.hpp"
#include "f2f/stats.hpp"

namespace f2f::expt {

double localized_phase(double arg_b) { return std::remainder(-arg_b, 2.0 * std::numbers::pi); }

RunMeta make_meta(const ExperimentConfig& config, const std::string& command) {
    return {command, fingerprint(config), config.run.seed, kArtifactVersion, kSchemaVersion};
}

std::vector<TrajectoryRecord> run_ensemble(const ExperimentConfig& config, bool track_gamma_fidelity) {
    validate(config);
    const auto spec = trajectory_spec(config);
    const std::string fp = fingerprint(config);
    std::vector<TrajectoryRecord> records(static_cast<std::size_t>(config.run.trajectories));

    parallel_for(config.run.trajectories, config.run.threads, [&](int i) {
        Rng rng(config.run.seed, static_cast<std::uint64_t>(i));
        TrajectoryRecord rec;
        rec.index = i;
        rec.fingerprint = fp;
        rec.seed = config.run.seed;
        meas::StateObserver observer;
        long long m0 = 0;
        if (track_gamma_fidelity) {
            observer = [&](int after_pulse, const fock::FockVector& state, int detections) {
                if (after_pulse == 0) m0 = static_cast<long long>(state.offset());
                double f = std::numeric_limits<double>::quiet_NaN();
                if (m0 > 2LL * detections + 1) f = gamma::best_gamma_match(state, m0, detections).fidelity;
                rec.gamma_fidelity.push_back(f);
            };
        }
        rec.trajectory = meas::run_trajectory(spec, rng, observer);
        records[static_cast<std::size_t>(i)] = std::move(rec);
    });
    return records;
}

bool CalibrationReport::all_accepted() const {
    return std::all_of(fits.begin(), fits.end(), [](const CalibrationFit& f) { return f.accepted; });
}

CalibrationReport calibration_scan(const ExperimentConfig& config) {
    if (config.run.pulses < 32) throw ConfigError("calibration needs run.pulses >= 32");
    if (config.calibration.discard + 4 > config.run.pulses) {
        throw ConfigError("calibration.discard leaves fewer than 4 pulses to fit");
    }
    CalibrationReport report;
    report.records = run_ensemble(config);
    report.configured_delta = config.comb.delta;
    report.discard = config.calibration.discard;
    report.stride = config.calibration.stride;

    FitOptions opts;
    opts.grid_points = config.calibration.grid_points;
    opts.min_visibility = config.calibration.min_visibility;
    for (const auto& rec : report.records) {
        if (rec.trajectory.exhausted) throw NumericalError("trajectory " + std::to_string(rec.index) +
                                                           " ran out of photons before the last pulse");
        const auto samples = rate_samples(rec.trajectory.pulses, config.calibration.discard, config.calibration.stride);
        if (samples.size() < 4) throw NumericalError("too few pulses with counts to fit delta");
        report.fits.push_back(fit_delta(samples, opts));
    }
    return report;
}

EmergenceReport field_emergence_report(const ExperimentConfig& config) {
    EmergenceReport report;
    report.records = run_ensemble(config, config.emergence.track_gamma_fidelity);
    const auto comb = make_comb(config);

    for (const auto& rec : report.records) {
        const auto& traj = rec.trajectory;
        report.any_exhausted = report.any_exhausted || traj.exhausted;
        const double arg_b = traj.pulses.empty() ? traj.initial.arg_b : traj.pulses.back().post.arg_b;
        report.final_phases.push_back(localized_phase(arg_b));

        std::vector<TraceSummary> summaries;
        for (const auto& tr : traj.traces) {
            TraceSummary s;
            s.after_pulse = tr.after_pulse;
            const meas::StateSummary& st =
                tr.after_pulse == 0 ? traj.initial : traj.pulses[static_cast<std::size_t>(tr.after_pulse - 1)].post;
            s.mean_n = st.mean_n;
            s.abs_b = st.abs_b;
            double vmax = 0.0;
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                s.peak_abs_field = std::max(s.peak_abs_field, std::abs(tr.field[i]));
                vmax = std::max(vmax, std::abs(comb::mode_function(comb, tr.times[i])));
            }
            s.coherent_peak = 2.0 * std::sqrt(std::max(st.mean_n, 0.0)) * vmax;
            summaries.push_back(s);
        }
        report.traces.push_back(std::move(summaries));
    }
    report.rayleigh_p = stats::rayleigh_p(report.final_phases);
    return report;
}

std::vector<VisibilityPoint> visibility_sweep(const ExperimentConfig& config) {
    std::vector<VisibilityPoint> points;
    const double mu = config.counts.mean;
    for (int n_min : config.visibility.n_min_values) {
        ExperimentConfig c = config;
        c.interferometer.n_min = n_min;
        const auto report = calibration_scan(c);
        VisibilityPoint p;
        p.n_min = n_min;
        p.expected_ratio = mu / (mu + 2.0 * n_min);
        std::vector<double> vis, phases;
        for (const auto& f : report.fits) {
            vis.push_back(f.visibility);
            phases.push_back(2.0 * std::numbers::pi * f.delta);
            if (!f.accepted) ++p.rejected;
        }
        p.mean_visibility = stats::mean(vis);
        double d = stats::circular_mean(phases) / (2.0 * std::numbers::pi);
        p.mean_delta = d < 0.0 ? d + 1.0 : d;
        points.push_back(p);
    }
    if (!points.empty() && points.front().mean_visibility > 0.0) {
        const double base = points.front().mean_visibility;
        const double base_expected = points.front().expected_ratio;
        for (auto& p : points) {
            p.measured_ratio = p.mean_visibility / base;
            p.expected_ratio /= base_expected;
        }
    }
    return points;
}

std::vector<OracleResult> run_oracle(const ExperimentConfig& config) {
    validate(config);
    std::vector<OracleResult> out;
    for (const auto& c : config.oracle.cases) {
        const fock::JumpOperator jump{std::sqrt(static_cast<double>(c.m)), 1.0, config.oracle.phi};
        const auto exact = gamma::exact_post_state(c.m, c.n1, c.n2, jump);
        const auto expansion = gamma::appendix_expansion(c.m, c.n1, c.n2, jump);
        OracleResult r;
        r.c = c;
        r.fidelity = fock::fidelity(exact, expansion);
        r.infidelity = std::max(0.0, 1.0 - r.fidelity);
        out.push_back(r);
    }
    return out;
}

}  // namespace f2f::expt
