#include "f2f/comb.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "f2f/error.hpp"
#include "f2f/gamma.hpp"

namespace f2f::comb {

CombMode build_comb(int center_index, double width, int n_lines, double delta, double field_scale) {
    if (n_lines < 1) throw ConfigError("comb needs at least one line");
    if (!(width > 0.0)) throw ConfigError("comb width must be positive");
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("comb offset delta must lie in [0, 1)");
    const int first = center_index - n_lines / 2;
    if (first < 1) {
        throw ConfigError("comb lines start at j = " + std::to_string(first) + "; need j >= 1");
    }
    CombMode comb;
    comb.delta = delta;
    comb.center_index = center_index;
    comb.field_scale = field_scale;
    double sum = 0.0;
    for (int i = 0; i < n_lines; ++i) {
        const int j = first + i;
        const double x = (j - center_index) / width;
        const double g = std::exp(-0.5 * x * x);
        comb.lines.push_back({j, g});
        sum += g * g;
    }
    const double inv = 1.0 / std::sqrt(sum);
    for (auto& line : comb.lines) line.weight *= inv;
    return comb;
}

void validate(const CombMode& comb) {
    if (comb.lines.empty()) throw ConfigError("comb has no lines");
    if (comb.center_index < 1) throw ConfigError("comb center index must be >= 1");
    double sum = 0.0;
    for (const auto& line : comb.lines) {
        if (!(comb.frequency(line) > 0.0)) throw ConfigError("comb line with nonpositive frequency");
        sum += line.weight * line.weight;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("comb weights are not normalized");
}

std::complex<double> mode_function(const CombMode& comb, double t) {
    const double f0 = comb.center_frequency();
    std::complex<double> v{0.0, 0.0};
    for (const auto& line : comb.lines) {
        const double f = comb.frequency(line);
        v += std::sqrt(f / f0) * line.weight * std::polar(1.0, -2.0 * std::numbers::pi * f * t);
    }
    return comb.field_scale * v;
}

double field_from_amplitude(std::complex<double> b_expect, const CombMode& comb, double t) {
    return 2.0 * (mode_function(comb, t) * b_expect).real();
}

double field_expectation(const fock::FockVector& state, const CombMode& comb, double t) {
    return field_from_amplitude(fock::expect_b(state), comb, t);
}

double gamma_field_closed_form(long long m, int n, double phi, const CombMode& comb, double t) {
    const auto window = gamma::default_window(n);
    if (m <= n + window.k_max) throw ConfigError("m too small for the Gamma window (need m > n + k_max)");
    const auto w = gamma::b_weights(n, window);
    double envelope = 0.0;
    for (int k = window.k_min; k <= window.k_max; ++k) {
        const double prev = k - 1 >= window.k_min ? w[static_cast<std::size_t>(k - 1 - window.k_min)] : 0.0;
        envelope += prev * w[static_cast<std::size_t>(k - window.k_min)] * 2.0 * std::sqrt(static_cast<double>(m - n - k));
    }
    const double f0 = comb.center_frequency();
    double carrier = 0.0;
    for (const auto& line : comb.lines) {
        const double f = comb.frequency(line);
        carrier += std::sqrt(f / f0) * line.weight * std::cos(2.0 * std::numbers::pi * f * t + phi);
    }
    return comb.field_scale * envelope * carrier;
}

std::vector<double> pulse_window(const CombMode& comb, double center, int points) {
    std::vector<double> t(static_cast<std::size_t>(points));
    const double period = 1.0 / comb.f_rep;
    for (int i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = center + period * (-0.5 + static_cast<double>(i) / points);
    return t;
}

}  // namespace f2f::comb
