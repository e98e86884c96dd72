#include "f2f/expt/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "f2f/error.hpp"
#include "f2f/golden.hpp"

namespace f2f::expt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LinearFit {
    double a = 0.0;
    double c = 0.0;
    double s = 0.0;
    double ssr = std::numeric_limits<double>::infinity();
};

double wrap_unit(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

/// Least squares of rate ~ a + c cos(psi) + s sin(psi) by centering, which
/// removes a, then a 2x2 normal solve.
LinearFit linear_fit(std::span<const RateSample> samples, double delta, double f_rep) {
    const std::size_t n = samples.size();
    std::vector<double> cs(n), sn(n);
    double mc = 0.0, ms = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double psi = samples[i].phi - kTwoPi * delta * (samples[i].pulse - 1) / f_rep;
        cs[i] = std::cos(psi);
        sn[i] = std::sin(psi);
        mc += cs[i];
        ms += sn[i];
        my += samples[i].rate;
    }
    mc /= n;
    ms /= n;
    my /= n;
    double scc = 0.0, sss = 0.0, scs = 0.0, scy = 0.0, ssy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = cs[i] - mc, s = sn[i] - ms, y = samples[i].rate - my;
        scc += c * c;
        sss += s * s;
        scs += c * s;
        scy += c * y;
        ssy += s * y;
    }
    LinearFit f;
    const double det = scc * sss - scs * scs;
    if (std::abs(det) > 1e-12 * std::max(scc * sss, 1e-300)) {
        f.c = (scy * sss - ssy * scs) / det;
        f.s = (ssy * scc - scy * scs) / det;
    } else if (scc + sss > 0.0) {
        // Collinear regressors: project onto the dominant direction.
        const double norm = scc + sss;
        const double k = (scy + ssy) / norm;
        f.c = k * scc / norm;
        f.s = k * sss / norm;
    }
    f.a = my - f.c * mc - f.s * ms;
    // Summing residuals directly keeps the minimum sharp for noiseless data.
    f.ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = samples[i].rate - f.a - f.c * cs[i] - f.s * sn[i];
        f.ssr += r * r;
    }
    return f;
}

}  // namespace

double delta_distance(double a, double b) {
    const double d = wrap_unit(a - b);
    return std::min(d, 1.0 - d);
}

std::vector<RateSample> rate_samples(std::span<const meas::PulseRecord> pulses, int discard, int stride) {
    if (discard < 0 || stride < 1) throw ConfigError("discard must be >= 0 and stride >= 1");
    std::vector<RateSample> out;
    for (std::size_t i = static_cast<std::size_t>(discard); i < pulses.size(); i += static_cast<std::size_t>(stride)) {
        const auto& p = pulses[i];
        const int total = p.n1 + p.n2;
        if (total <= 0) continue;
        out.push_back({p.index, p.phi, static_cast<double>(p.n1) / total});
    }
    return out;
}

CalibrationFit fit_delta(std::span<const RateSample> samples, const FitOptions& options) {
    if (samples.size() < 4) throw ConfigError("calibration fit needs at least 4 rate samples");
    if (options.grid_points < 2) throw ConfigError("calibration grid needs at least 2 points");

    const auto ssr = [&](double d) { return linear_fit(samples, wrap_unit(d), options.f_rep).ssr; };

    const int g = options.grid_points;
    int best = 0;
    double best_ssr = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g; ++i) {
        const double v = ssr(static_cast<double>(i) / g);
        if (v < best_ssr) {
            best_ssr = v;
            best = i;
        }
    }
    const double center = static_cast<double>(best) / g;
    const double step = 1.0 / g;
    auto refined = golden_section_minimize(ssr, center - step, center + step, 1e-14);
    double delta = refined.value <= best_ssr ? wrap_unit(refined.x) : center;

    const auto lin = linear_fit(samples, delta, options.f_rep);
    CalibrationFit fit;
    fit.delta = delta;
    fit.offset = lin.a;
    fit.amplitude = std::hypot(lin.c, lin.s);
    fit.theta0 = std::atan2(-lin.s, lin.c);
    fit.visibility = lin.a != 0.0 ? fit.amplitude / lin.a : 0.0;
    fit.samples = static_cast<int>(samples.size());
    double sq = 0.0;
    fit.residuals.reserve(samples.size());
    for (const auto& s : samples) {
        const double psi = s.phi - kTwoPi * delta * (s.pulse - 1) / options.f_rep;
        const double r = s.rate - (fit.offset + fit.amplitude * std::cos(fit.theta0 + psi));
        fit.residuals.push_back(r);
        sq += r * r;
    }
    fit.rms_residual = std::sqrt(sq / samples.size());
    fit.accepted = fit.visibility >= options.min_visibility;
    if (!fit.accepted) {
        std::ostringstream os;
        os << "fit rejected: visibility " << fit.visibility << " below threshold " << options.min_visibility
           << " (A=" << fit.offset << ", B=" << fit.amplitude << ", " << fit.samples << " samples)";
        fit.diagnostic = os.str();
    }
    return fit;
}

}  // namespace f2f::expt
