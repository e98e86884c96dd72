#pragma once

#include <complex>
#include <vector>

#include "f2f/fock.hpp"

namespace f2f::comb {

struct CombLine {
    int index = 0;       // j
    double weight = 0.0; // gamma_j, real
};

/// Frequency comb f_j = j f_rep + delta with normalized real line weights.
///
/// Time is measured in units of 1/f_rep, so f_rep is 1. The physical
/// prefactor sqrt(h f_j / 2 eps0 V) becomes field_scale * sqrt(f_j / f_center).
struct CombMode {
    double f_rep = 1.0;
    double delta = 0.0;
    int center_index = 1;
    double field_scale = 1.0;
    std::vector<CombLine> lines;

    double frequency(const CombLine& line) const { return line.index * f_rep + delta; }
    double center_frequency() const { return center_index * f_rep; }
};

/// Gaussian envelope gamma_j ~ exp[-(j - j0)^2 / (2 width^2)] over n_lines
/// lines starting at j0 - n_lines/2. Throws ConfigError for nonpositive
/// frequencies, delta outside [0,1), width <= 0 or n_lines < 1.
CombMode build_comb(int center_index, double width, int n_lines, double delta, double field_scale = 1.0);

/// Checks normalization and positivity; throws ConfigError.
void validate(const CombMode& comb);

/// v_c(t) = field_scale * sum_j sqrt(f_j/f0) gamma_j e^{-i 2 pi f_j t}
std::complex<double> mode_function(const CombMode& comb, double t);

/// 2 Re[v_c(t) <b>]; exact single-mode field expectation for any state.
double field_expectation(const fock::FockVector& state, const CombMode& comb, double t);

/// Same, from a precomputed <b>.
double field_from_amplitude(std::complex<double> b_expect, const CombMode& comb, double t);

/// Closed-form field of |Gamma(m, n, Phi)>:
/// sum_k B(n,k-1) B(n,k) * 2 sqrt(m-n-k) * field_scale sum_j sqrt(f_j/f0) gamma_j cos(2 pi f_j t + Phi).
/// Throws ConfigError when m <= n + k_max.
double gamma_field_closed_form(long long m, int n, double phi, const CombMode& comb, double t);

/// Evenly spaced grid of `points` samples over [center - 1/2, center + 1/2).
std::vector<double> pulse_window(const CombMode& comb, double center, int points);

}  // namespace f2f::comb
