#include "f2f/gamma.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "f2f/error.hpp"
#include "f2f/golden.hpp"

namespace f2f::gamma {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWindowFloor = 1e-8;

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

std::vector<BigInt> binomial_row(int n) {
    std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1;
    for (int j = 1; j <= n; ++j) row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] * (n - j + 1) / j;
    return row;
}

void check_post_state_args(long long m, int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw ConfigError("detection counts must be nonnegative");
    if (m <= 2LL * (n1 + n2)) {
        throw ConfigError("photon exhaustion: need m > 2(n1 + n2) for every two-photon branch");
    }
}

}  // namespace

KWindow default_window(int n) {
    if (n < 0) throw ConfigError("detection count n must be nonnegative");
    if (n == 0) return {0, 0};
    const double half_width = std::sqrt(n * std::log(1.0 / kWindowFloor) / 2.0);
    const double center = n / 2.0;
    return {std::max(0, static_cast<int>(std::ceil(center - half_width))),
            std::min(n, static_cast<int>(std::floor(center + half_width)))};
}

GammaSpec make_spec(long long m, int n, double phi) { return {m, n, phi, default_window(n)}; }

double b_weight_raw(int n, double k) {
    if (n == 0) return k == 0.0 ? 1.0 : 0.0;
    const double d = k - n / 2.0;
    return std::exp(-2.0 * d * d / n);
}

std::vector<double> b_weights(int n, const KWindow& window) {
    if (window.k_max < window.k_min) throw ConfigError("empty k window");
    std::vector<double> w;
    double sum = 0.0;
    for (int k = window.k_min; k <= window.k_max; ++k) {
        w.push_back(b_weight_raw(n, k));
        sum += w.back() * w.back();
    }
    if (!(sum > 0.0)) throw ConfigError("k window carries no weight");
    const double inv = 1.0 / std::sqrt(sum);
    for (auto& x : w) x *= inv;
    return w;
}

FockVector gamma_state(const GammaSpec& spec) {
    if (spec.m - spec.n - spec.window.k_max < 0) {
        throw ConfigError("Gamma window reaches below zero photons (m - n - k_max < 0)");
    }
    const auto w = b_weights(spec.n, spec.window);
    // photon number m - n - k decreases with k; store from the lowest number up
    const auto lo = static_cast<std::size_t>(spec.m - spec.n - spec.window.k_max);
    std::vector<fock::Complex> amps(w.size());
    for (int k = spec.window.k_min; k <= spec.window.k_max; ++k) {
        const auto photons = static_cast<std::size_t>(spec.m - spec.n - k);
        amps[photons - lo] = w[static_cast<std::size_t>(k - spec.window.k_min)] * std::polar(1.0, k * spec.phi);
    }
    return FockVector(lo, std::move(amps));
}

FockVector exact_post_state(long long m, int n1, int n2, const fock::JumpOperator& jump) {
    check_post_state_args(m, n1, n2);
    FockVector state = fock::number_state(static_cast<std::size_t>(m));
    for (int i = 0; i < n1 + n2; ++i) {
        state = fock::normalize(fock::apply_jump(state, jump, fock::interleaved_outcome(i, n1, n2))).state;
    }
    return state;
}

FockVector appendix_expansion(long long m, int n1, int n2, const fock::JumpOperator& jump, ExpansionTerms terms) {
    check_post_state_args(m, n1, n2);
    const int n = n1 + n2;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> log_mag(static_cast<std::size_t>(n) + 1, neg_inf);
    std::vector<double> sign(static_cast<std::size_t>(n) + 1, 0.0);
    const double lg_m = std::lgamma(static_cast<double>(m) + 1.0);
    const auto row1 = binomial_row(n1);
    const auto row2 = binomial_row(n2);

    for (int k = 0; k <= n; ++k) {
        double common = 0.0;
        if (terms == ExpansionTerms::Exact) {
            if ((jump.xi1 == 0.0 && k < n) || (jump.xi2 == 0.0 && k > 0)) continue;
            // sqrt(m (m-1) ... (m-n-k+1)) xi1^{n-k} xi2^k
            common = 0.5 * (lg_m - std::lgamma(static_cast<double>(m - n - k) + 1.0));
            if (k < n) common += (n - k) * std::log(jump.xi1);
            if (k > 0) common += k * std::log(jump.xi2);
        }
        // The alternating sum cancels by many orders of magnitude once n
        // reaches a few dozen, so it is done in exact integers.
        BigInt s = 0;
        for (int q = std::max(0, k - n1); q <= std::min(n2, k); ++q) {
            const BigInt term = row1[static_cast<std::size_t>(k - q)] * row2[static_cast<std::size_t>(q)];
            if (q % 2 == 0) {
                s += term;
            } else {
                s -= term;
            }
        }
        if (s == 0) continue;
        log_mag[static_cast<std::size_t>(k)] = common + log(BigFloat(abs(s))).convert_to<double>();
        sign[static_cast<std::size_t>(k)] = s > 0 ? 1.0 : -1.0;
    }

    const double top = *std::max_element(log_mag.begin(), log_mag.end());
    if (!std::isfinite(top)) return FockVector{};
    const auto lo = static_cast<std::size_t>(m - 2 * n);
    std::vector<fock::Complex> amps(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        if (sign[ks] == 0.0) continue;
        const double mag = std::exp(log_mag[ks] - top);
        amps[static_cast<std::size_t>(m - n - k) - lo] = sign[ks] * mag * std::polar(1.0, k * jump.theta);
    }
    return fock::normalize(FockVector(lo, std::move(amps))).state;
}

FockVector approx_post_state(long long m, int n1, int n2, double phi) {
    if (n1 < 0 || n2 < 0 || n1 + n2 < 2) throw ConfigError("approximate post state needs n1 + n2 >= 2");
    const int n = n1 + n2;
    const double shift = kPi * n2 / n;
    const auto plus = gamma_state(make_spec(m, n, phi + shift));
    const auto minus = gamma_state(make_spec(m, n, phi - shift));
    const double r = 1.0 / std::sqrt(2.0);
    return fock::normalize(fock::linear_combination(r, plus, r, minus)).state;
}

GaussianCosineSeries gaussian_cosine_series(double sigma, double mu, int q_min, int q_max, int intervals) {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (q_max < q_min) throw ConfigError("empty q range");
    if (intervals < 2 || intervals % 2 != 0) throw ConfigError("Simpson rule needs an even interval count");
    GaussianCosineSeries out;
    const double h = 2.0 * kPi / intervals;
    const double norm = 1.0 / (2.0 * std::sqrt(2.0 * kPi) * sigma);
    for (int q = q_min; q <= q_max; ++q) {
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i <= intervals; ++i) {
            const double x = -kPi + i * h;
            const double wt = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const double g = std::exp(-0.5 * sigma * sigma * x * x);
            acc += wt * g * (std::polar(1.0, (q - mu) * x) + std::polar(1.0, (q + mu) * x));
        }
        out.q.push_back(q);
        out.quadrature.push_back(acc * (h / 3.0) / (4.0 * kPi));
        const double a = (q - mu) / sigma;
        const double b = (q + mu) / sigma;
        out.closed_form.push_back(norm * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)));
    }
    return out;
}

double alternating_gaussian_sum(int k, int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw ConfigError("alternating Gaussian sum needs n1, n2 >= 1");
    const int n = n1 + n2;
    const BigFloat mu = BigFloat(k) * n2 / n;
    const BigFloat s2 = BigFloat(n1) * n2 / (4 * n);
    const double reach = 22.0 * std::sqrt(static_cast<double>(s2)) + 2.0;
    const auto lo = static_cast<long long>(std::floor(static_cast<double>(mu) - reach));
    const auto hi = static_cast<long long>(std::ceil(static_cast<double>(mu) + reach));
    BigFloat acc = 0;
    for (long long q = lo; q <= hi; ++q) {
        const BigFloat d = BigFloat(q) - mu;
        const BigFloat term = exp(-d * d / (2 * s2));
        if (q % 2 == 0) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    return static_cast<double>(acc);
}

double fourier_resummed_sum(int k, int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw ConfigError("Fourier resummation needs n1, n2 >= 1");
    const int n = n1 + n2;
    const double s2 = static_cast<double>(n1) * n2 / (4.0 * n);
    const double mu = static_cast<double>(k) * n2 / n;
    return 2.0 * std::sqrt(2.0 * kPi * s2) * std::exp(-kPi * kPi * s2 / 2.0) * std::cos(kPi * mu);
}

BranchMatch best_gamma_match(const FockVector& state, long long m, int n) {
    const auto spec = make_spec(m, n, 0.0);
    const auto w = b_weights(n, spec.window);
    std::vector<fock::Complex> c(w.size());
    for (int k = spec.window.k_min; k <= spec.window.k_max; ++k) {
        const long long photons = m - n - k;
        c[static_cast<std::size_t>(k - spec.window.k_min)] =
            photons < 0 ? fock::Complex{0.0, 0.0} : state.at(static_cast<std::size_t>(photons));
    }
    auto overlap = [&](double phi) {
        fock::Complex s{0.0, 0.0};
        for (int k = spec.window.k_min; k <= spec.window.k_max; ++k) {
            const auto i = static_cast<std::size_t>(k - spec.window.k_min);
            s += w[i] * std::polar(1.0, -k * phi) * c[i];
        }
        return std::norm(s);
    };
    constexpr int kGrid = 512;
    double best_phi = 0.0;
    double best = -1.0;
    for (int i = 0; i < kGrid; ++i) {
        const double phi = -kPi + 2.0 * kPi * i / kGrid;
        const double f = overlap(phi);
        if (f > best) {
            best = f;
            best_phi = phi;
        }
    }
    const double step = 2.0 * kPi / kGrid;
    const auto refined =
        golden_section_minimize([&](double phi) { return -overlap(phi); }, best_phi - step, best_phi + step, 1e-10);
    if (-refined.value > best) {
        best = -refined.value;
        best_phi = refined.x;
    }
    return {std::remainder(best_phi, 2.0 * kPi), std::min(1.0, best)};
}

}  // namespace f2f::gamma
