#include "f2f/meas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "f2f/error.hpp"

namespace f2f::meas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Branches {
    FockVector plus;
    FockVector minus;
    double w1 = 0.0;
    double w2 = 0.0;
};

Branches branches(const FockVector& state, const InterferometerParams& params, double delta, double t) {
    const auto jump = jump_at(params, delta, t);
    Branches b{fock::apply_jump(state, jump, Detector::D1), fock::apply_jump(state, jump, Detector::D2)};
    b.w1 = b.plus.norm2();
    b.w2 = b.minus.norm2();
    if (!(b.w1 + b.w2 > 0.0)) throw NumericalError("state cannot fire either detector");
    return b;
}

}  // namespace

InterferometerParams balanced_params(double xi2, double reference_n, double phi, int n_min, BalanceRef ref,
                                     double detune) {
    InterferometerParams p;
    p.xi2 = xi2;
    p.xi1 = detune * std::sqrt(std::max(reference_n, 0.0)) * xi2;
    p.phi = phi;
    p.n_min = n_min;
    p.balance_ref = ref;
    validate(p);
    return p;
}

void validate(const InterferometerParams& params) {
    if (params.xi1 < 0.0 || params.xi2 < 0.0) throw ConfigError("jump coefficients must be nonnegative");
    if (!(params.xi1 * params.xi1 + params.xi2 * params.xi2 > 0.0)) {
        throw ConfigError("at least one jump coefficient must be nonzero");
    }
    if (params.n_min < 0) throw ConfigError("n_min must be nonnegative");
    if (!std::isfinite(params.phi)) throw ConfigError("interferometer phase must be finite");
}

fock::JumpOperator jump_at(const InterferometerParams& params, double delta, double t) {
    return {params.xi1, params.xi2, std::remainder(params.phi - kTwoPi * delta * t, kTwoPi)};
}

DetectionProbabilities detection_probabilities(const FockVector& state, const InterferometerParams& params,
                                               double delta, double t) {
    const auto b = branches(state, params, delta, t);
    const double p1 = b.w1 / (b.w1 + b.w2);
    return {p1, 1.0 - p1};
}

Detection detect_one(const FockVector& state, const InterferometerParams& params, double delta, double t, Rng& rng) {
    auto b = branches(state, params, delta, t);
    const double p1 = b.w1 / (b.w1 + b.w2);
    const bool first = rng.uniform() < p1;
    auto collapsed = fock::normalize(first ? b.plus : b.minus);
    return {first ? Detector::D1 : Detector::D2, std::move(collapsed.state), p1};
}

Detection detect_forced(const FockVector& state, const InterferometerParams& params, double delta, double t,
                        Detector detector) {
    auto b = branches(state, params, delta, t);
    const double p1 = b.w1 / (b.w1 + b.w2);
    auto collapsed = fock::normalize(detector == Detector::D1 ? b.plus : b.minus);
    return {detector, std::move(collapsed.state), p1};
}

int CountModel::draw(Rng& rng) const {
    if (kind == Kind::Fixed) return static_cast<int>(std::lround(mean));
    return rng.poisson(mean);
}

StateSummary summarize(const FockVector& state) {
    const auto b = fock::expect_b(state);
    return {fock::expect_n(state), std::abs(b), std::arg(b)};
}

PulseResult simulate_pulse(const FockVector& state, const InterferometerParams& params, const comb::CombMode& comb,
                           int pulse_index, const CountModel& counts, Rng& rng, std::optional<ForcedCounts> forced) {
    if (pulse_index < 1) throw ConfigError("pulse index must be >= 1");
    PulseRecord rec;
    rec.index = pulse_index;
    rec.time = (pulse_index - 1) / comb.f_rep;
    rec.phi = params.phi;
    rec.requested = forced ? forced->n1 + forced->n2 : counts.draw(rng);

    FockVector current = state;
    bool first = true;
    for (int i = 0; i < rec.requested; ++i) {
        Detection d;
        try {
            if (forced) {
                d = detect_forced(current, params, comb.delta, rec.time, fock::interleaved_outcome(i, forced->n1, forced->n2));
            } else {
                d = detect_one(current, params, comb.delta, rec.time, rng);
            }
        } catch (const NumericalError&) {
            rec.exhausted = true;
            break;
        }
        if (first) {
            rec.p1_first = d.p1;
            first = false;
        }
        (d.detector == Detector::D1 ? rec.jumps1 : rec.jumps2) += 1;
        current = std::move(d.state);
    }
    if (first) {
        try {
            rec.p1_first = detection_probabilities(current, params, comb.delta, rec.time).p1;
        } catch (const NumericalError&) {
            rec.p1_first = 0.5;
        }
    }
    rec.n1 = rec.jumps1 + params.n_min;
    rec.n2 = rec.jumps2 + params.n_min;
    rec.post = summarize(current);
    return {rec, std::move(current)};
}

double PhiSchedule::at(int pulse_index, double offset) const {
    const double k = pulse_index - 1;
    double phase = phi0 + offset;
    if (kind == Kind::Linear || kind == Kind::Quadratic) phase += kTwoPi * rate * k;
    if (kind == Kind::Quadratic) phase += std::numbers::pi * chirp * k * k;
    return std::remainder(phase, kTwoPi);
}

namespace {

FieldTrace trace_of(const FockVector& state, const comb::CombMode& comb, int after_pulse, int points) {
    FieldTrace tr;
    tr.after_pulse = after_pulse;
    tr.times = comb::pulse_window(comb, after_pulse / comb.f_rep, points);
    const auto b = fock::expect_b(state);
    tr.field.reserve(tr.times.size());
    for (double t : tr.times) tr.field.push_back(comb::field_from_amplitude(b, comb, t));
    return tr;
}

bool wants_trace(const TrajectorySpec& spec, int after_pulse) {
    return std::find(spec.trace_pulses.begin(), spec.trace_pulses.end(), after_pulse) != spec.trace_pulses.end();
}

}  // namespace

Trajectory run_trajectory(const TrajectorySpec& spec, Rng& rng, const StateObserver& observer) {
    if (spec.pulses < 0) throw ConfigError("pulse count must be nonnegative");
    if (!(spec.mean_n >= 1.0)) throw ConfigError("mean photon number must be >= 1");

    Trajectory traj;
    traj.stream = rng.stream();
    traj.initial_m = spec.laser == LaserInput::FixedM ? std::llround(spec.mean_n) : rng.poisson(spec.mean_n);
    traj.phi_offset = spec.randomize_phi ? kTwoPi * rng.uniform() : 0.0;

    const double reference = spec.balance_ref == BalanceRef::MeanN ? spec.mean_n : static_cast<double>(traj.initial_m);
    auto params = balanced_params(spec.xi2, reference, spec.phi.at(1, traj.phi_offset), spec.n_min, spec.balance_ref,
                                  spec.detune);
    traj.xi1 = params.xi1;

    FockVector state = fock::number_state(static_cast<std::size_t>(traj.initial_m));
    traj.initial = summarize(state);
    if (observer) observer(0, state, 0);
    if (wants_trace(spec, 0)) traj.traces.push_back(trace_of(state, spec.comb, 0, spec.trace_points));

    int detections = 0;
    for (int n = 1; n <= spec.pulses; ++n) {
        params.phi = spec.phi.at(n, traj.phi_offset);
        std::optional<ForcedCounts> forced;
        if (n == 1 && spec.force_balanced_first_pulse) {
            const int half = spec.counts.draw(rng) / 2;
            forced = ForcedCounts{half, half};
        }
        auto res = simulate_pulse(state, params, spec.comb, n, spec.counts, rng, forced);
        traj.pulses.push_back(res.record);
        state = std::move(res.state);
        if (res.record.exhausted) {
            traj.exhausted = true;
            break;
        }
        detections += res.record.jumps1 + res.record.jumps2;
        if (observer) observer(n, state, detections);
        if (wants_trace(spec, n)) traj.traces.push_back(trace_of(state, spec.comb, n, spec.trace_points));
    }
    return traj;
}

}  // namespace f2f::meas
