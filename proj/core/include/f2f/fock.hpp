#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace f2f::fock {

using Complex = std::complex<double>;

/// Edge amplitudes below this fraction of the largest magnitude are dropped.
inline constexpr double kTrimCutoff = 1e-14;

/// Single-mode state over a contiguous photon-number window.
///
/// Amplitude i belongs to |offset + i>. Values are immutable; every
/// operation returns a new vector. Construction trims negligible edge
/// amplitudes, and an all-zero input collapses to the canonical zero
/// vector (offset 0, one zero amplitude), which stands for an impossible
/// detection branch.
class FockVector {
public:
    FockVector();
    FockVector(std::size_t offset, std::vector<Complex> amplitudes);

    std::size_t offset() const { return offset_; }
    std::size_t size() const { return amps_.size(); }
    /// Largest photon number held in the window.
    std::size_t top() const { return offset_ + amps_.size() - 1; }
    std::span<const Complex> amplitudes() const { return amps_; }

    /// Amplitude of |n>; zero outside the window.
    Complex at(std::size_t n) const;

    bool is_zero() const;
    double norm2() const;

private:
    std::size_t offset_;
    std::vector<Complex> amps_;
};

enum class Detector : int { D1 = 1, D2 = 2 };

inline double sign_of(Detector d) { return d == Detector::D1 ? 1.0 : -1.0; }

/// Outcome i of a fixed (n1, n2) record, spread evenly over the sequence.
/// The jumps commute, but all D1 before all D2 passes through a nearly
/// forbidden branch and cancels catastrophically.
inline Detector interleaved_outcome(int i, int n1, int n2) {
    const long long n = n1 + n2;
    const long long before = n1 * static_cast<long long>(i) / n;
    return n1 * static_cast<long long>(i + 1) / n > before ? Detector::D1 : Detector::D2;
}

/// xi1 b + sign * xi2 e^{i theta} b^2, with theta the interferometer phase
/// already combined with the carrier-envelope slip at detection time.
struct JumpOperator {
    double xi1 = 1.0;
    double xi2 = 1.0;
    double theta = 0.0;
};

struct Normalized {
    FockVector state;
    double norm2 = 0.0;
};

FockVector number_state(std::size_t m);

/// b|state>, not renormalized. Vacuum maps to the zero vector.
FockVector apply_annihilation(const FockVector& state);

/// Jump operator for one detection, not renormalized. Its squared norm is
/// the relative firing weight of that detector.
FockVector apply_jump(const FockVector& state, const JumpOperator& jump, Detector detector);

/// Throws NumericalError on the zero vector.
Normalized normalize(const FockVector& state);

/// <a|b>
Complex inner_product(const FockVector& a, const FockVector& b);

/// <b> = sum_k conj(c_{k-1}) c_k sqrt(k). For a state carrying e^{+ik Phi}
/// on |m-n-k>, arg<b> = -Phi.
Complex expect_b(const FockVector& state);
double expect_n(const FockVector& state);
/// <n(n-1)> = <b^dag^2 b^2>
double expect_n_n_minus_1(const FockVector& state);
/// <b^dag b^2>
Complex expect_bdag_b2(const FockVector& state);

/// |<a|b>|^2 for normalized inputs.
double fidelity(const FockVector& a, const FockVector& b);

/// ca*a + cb*b on the union of both windows.
FockVector linear_combination(Complex ca, const FockVector& a, Complex cb, const FockVector& b);

}  // namespace f2f::fock
