#pragma once

#include <complex>
#include <vector>

#include "f2f/fock.hpp"

namespace f2f::gamma {

using fock::FockVector;

/// Inclusive range of retained two-photon counts k.
struct KWindow {
    int k_min = 0;
    int k_max = 0;
};

/// Parameters of |Gamma(m, n, Phi)> = sum_k B(n,k) e^{i k Phi} |m - n - k>.
struct GammaSpec {
    long long m = 0;
    int n = 0;
    double phi = 0.0;
    KWindow window;
};

/// Keeps k in [0, n] with B(n,k) >= 1e-8 of the peak weight.
KWindow default_window(int n);

GammaSpec make_spec(long long m, int n, double phi);

/// exp[-2 (k - n/2)^2 / n], unnormalized; the Kronecker delta at k = 0 for n = 0.
double b_weight_raw(int n, double k);

/// B(n,k) over the window, normalized so that sum B^2 = 1.
std::vector<double> b_weights(int n, const KWindow& window);

/// Throws ConfigError if the window reaches below zero photons.
FockVector gamma_state(const GammaSpec& spec);

/// [jump(+)]^{n1} [jump(-)]^{n2} |m>, normalized, by repeated operator
/// application. Requires m > 2(n1 + n2); throws ConfigError otherwise.
FockVector exact_post_state(long long m, int n1, int n2, const fock::JumpOperator& jump);

enum class ExpansionTerms {
    Exact,   // full double sum with falling factorial and xi powers
    LargeM,  // falling factorial -> m^{k/2} and (xi2 sqrt(m)/xi1)^k -> 1
};

/// Builds the post-detection state from the explicit binomial double sum
/// over (p, q), k = p + q, accumulated in log space. Same preconditions as
/// exact_post_state.
FockVector appendix_expansion(long long m, int n1, int n2, const fock::JumpOperator& jump,
                              ExpansionTerms terms = ExpansionTerms::Exact);

/// (|Gamma(m,n,phi + pi n2/n)> + |Gamma(m,n,phi - pi n2/n)>)/sqrt(2), normalized.
FockVector approx_post_state(long long m, int n1, int n2, double phi);

struct GaussianCosineSeries {
    std::vector<int> q;
    std::vector<std::complex<double>> quadrature;
    std::vector<double> closed_form;
};

/// Fourier coefficients of exp(-sigma^2 x^2/2) cos(mu x) on [-pi, pi], by
/// composite Simpson quadrature and by the infinite-interval Gaussian form.
GaussianCosineSeries gaussian_cosine_series(double sigma, double mu, int q_min, int q_max, int intervals = 2048);

/// sum_q exp[-2 n (q - k n2/n)^2 / (n1 n2)] (-1)^q, summed in 50-digit
/// arithmetic because the result is exponentially small against its terms.
double alternating_gaussian_sum(int k, int n1, int n2);

/// Poisson-resummed value of alternating_gaussian_sum:
/// 2 sqrt(2 pi) s exp(-pi^2 s^2 / 2) cos(pi k n2 / n), s^2 = n1 n2 / (4n).
double fourier_resummed_sum(int k, int n1, int n2);

struct BranchMatch {
    double phi = 0.0;
    double fidelity = 0.0;
};

/// Phase Phi maximizing |<Gamma(m, n, Phi)|state>|^2.
BranchMatch best_gamma_match(const FockVector& state, long long m, int n);

}  // namespace f2f::gamma
