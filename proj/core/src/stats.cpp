#include "f2f/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace f2f::stats {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> resultant(std::span<const double> angles, double harmonic = 1.0) {
    std::complex<double> s{0.0, 0.0};
    for (double a : angles) s += std::polar(1.0, harmonic * a);
    return s;
}

double wrap_positive(double a) {
    double r = std::fmod(a, kTwoPi);
    return r < 0.0 ? r + kTwoPi : r;
}

}  // namespace

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

double circular_mean(std::span<const double> angles) { return std::arg(resultant(angles)); }

double resultant_length(std::span<const double> angles) {
    if (angles.empty()) return 0.0;
    return std::abs(resultant(angles)) / static_cast<double>(angles.size());
}

double circular_std(std::span<const double> angles) {
    const double r = resultant_length(angles);
    if (r <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(-2.0 * std::log(std::min(r, 1.0)));
}

double rayleigh_p(std::span<const double> angles) {
    const double n = static_cast<double>(angles.size());
    if (n < 2) return 1.0;
    const double r = std::abs(resultant(angles));
    const double p = std::exp(std::sqrt(1.0 + 4.0 * n + 4.0 * (n * n - r * r)) - (1.0 + 2.0 * n));
    return std::clamp(p, 0.0, 1.0);
}

double kuiper_two_sample_p(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return 1.0;
    std::vector<double> x(a.size()), y(b.size());
    std::transform(a.begin(), a.end(), x.begin(), wrap_positive);
    std::transform(b.begin(), b.end(), y.begin(), wrap_positive);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d_plus = 0.0, d_minus = 0.0;
    while (i < x.size() || j < y.size()) {
        const double v = (j == y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        const double diff = i / nx - j / ny;
        d_plus = std::max(d_plus, diff);
        d_minus = std::max(d_minus, -diff);
    }
    const double v = d_plus + d_minus;
    const double ne = nx * ny / (nx + ny);
    const double lambda = (std::sqrt(ne) + 0.155 + 0.24 / std::sqrt(ne)) * v;
    if (lambda < 0.4) return 1.0;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double t = 2.0 * k * k * lambda * lambda;
        q += (2.0 * t - 1.0) * std::exp(-t);
    }
    return std::clamp(2.0 * q, 0.0, 1.0);
}

double angular_distance(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

TwoClusterFit two_cluster_fit(std::span<const double> angles) {
    TwoClusterFit fit;
    const double axis = 0.5 * std::arg(resultant(angles, 2.0));
    const double pole1 = axis;
    const double pole2 = axis + std::numbers::pi;
    std::vector<double> c1, c2;
    for (double a : angles) (angular_distance(a, pole1) <= angular_distance(a, pole2) ? c1 : c2).push_back(a);
    fit.count1 = static_cast<int>(c1.size());
    fit.count2 = static_cast<int>(c2.size());
    fit.center1 = c1.empty() ? pole1 : circular_mean(c1);
    fit.center2 = c2.empty() ? std::remainder(pole2, kTwoPi) : circular_mean(c2);
    fit.spread1 = c1.empty() ? 0.0 : circular_std(c1);
    fit.spread2 = c2.empty() ? 0.0 : circular_std(c2);
    fit.separation = angular_distance(fit.center1, fit.center2);
    return fit;
}

}  // namespace f2f::stats
