#include "f2f/fock.hpp"

#include <algorithm>
#include <cmath>

#include "f2f/error.hpp"

namespace f2f::fock {

FockVector::FockVector() : offset_(0), amps_(1, Complex{0.0, 0.0}) {}

FockVector::FockVector(std::size_t offset, std::vector<Complex> amplitudes)
    : offset_(offset), amps_(std::move(amplitudes)) {
    double peak = 0.0;
    for (const auto& c : amps_) {
        const double a = std::abs(c);
        if (!std::isfinite(a)) throw NumericalError("non-finite amplitude in Fock vector");
        peak = std::max(peak, a);
    }
    if (peak == 0.0) {
        offset_ = 0;
        amps_.assign(1, Complex{0.0, 0.0});
        return;
    }
    const double cut = kTrimCutoff * peak;
    std::size_t first = 0;
    while (std::abs(amps_[first]) < cut) ++first;
    std::size_t last = amps_.size() - 1;
    while (std::abs(amps_[last]) < cut) --last;
    if (first > 0 || last + 1 < amps_.size()) {
        amps_.erase(amps_.begin() + static_cast<std::ptrdiff_t>(last + 1), amps_.end());
        amps_.erase(amps_.begin(), amps_.begin() + static_cast<std::ptrdiff_t>(first));
        offset_ += first;
    }
}

Complex FockVector::at(std::size_t n) const {
    if (n < offset_ || n > top()) return {0.0, 0.0};
    return amps_[n - offset_];
}

bool FockVector::is_zero() const {
    return amps_.size() == 1 && amps_[0] == Complex{0.0, 0.0};
}

double FockVector::norm2() const {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
}

FockVector number_state(std::size_t m) { return FockVector(m, {Complex{1.0, 0.0}}); }

FockVector apply_annihilation(const FockVector& state) {
    if (state.is_zero() || state.top() == 0) return FockVector{};
    const std::size_t lo = state.offset() == 0 ? 0 : state.offset() - 1;
    const std::size_t hi = state.top() - 1;
    std::vector<Complex> out(hi - lo + 1);
    for (std::size_t n = lo; n <= hi; ++n) {
        out[n - lo] = std::sqrt(static_cast<double>(n + 1)) * state.at(n + 1);
    }
    return FockVector(lo, std::move(out));
}

FockVector apply_jump(const FockVector& state, const JumpOperator& jump, Detector detector) {
    if (state.is_zero() || state.top() == 0) return FockVector{};
    const Complex two_photon = sign_of(detector) * jump.xi2 * std::polar(1.0, jump.theta);
    const std::size_t lo = state.offset() >= 2 ? state.offset() - 2 : 0;
    const std::size_t hi = state.top() - 1;
    const auto amps = state.amplitudes();
    const std::size_t off = state.offset();
    std::vector<Complex> out(hi - lo + 1, Complex{0.0, 0.0});
    // b|n> -> sqrt(n)|n-1>, b^2|n> -> sqrt(n(n-1))|n-2>
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const std::size_t n = off + i;
        if (n == 0) continue;
        const double dn = static_cast<double>(n);
        const double s1 = std::sqrt(dn);
        out[n - 1 - lo] += jump.xi1 * s1 * amps[i];
        if (n >= 2) out[n - 2 - lo] += two_photon * (s1 * std::sqrt(dn - 1.0)) * amps[i];
    }
    return FockVector(lo, std::move(out));
}

Normalized normalize(const FockVector& state) {
    const double n2 = state.norm2();
    if (n2 == 0.0) throw NumericalError("cannot normalize the zero vector (impossible detection branch)");
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
    for (auto& c : out) c *= inv;
    return {FockVector(state.offset(), std::move(out)), n2};
}

Complex inner_product(const FockVector& a, const FockVector& b) {
    const std::size_t lo = std::max(a.offset(), b.offset());
    const std::size_t hi = std::min(a.top(), b.top());
    Complex s{0.0, 0.0};
    for (std::size_t n = lo; n <= hi && lo <= hi; ++n) s += std::conj(a.at(n)) * b.at(n);
    return s;
}

Complex expect_b(const FockVector& state) {
    const auto amps = state.amplitudes();
    Complex s{0.0, 0.0};
    for (std::size_t i = 1; i < amps.size(); ++i) {
        const double n = static_cast<double>(state.offset() + i);
        s += std::conj(amps[i - 1]) * amps[i] * std::sqrt(n);
    }
    return s;
}

double expect_n(const FockVector& state) {
    const auto amps = state.amplitudes();
    double s = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) s += static_cast<double>(state.offset() + i) * std::norm(amps[i]);
    return s;
}

double expect_n_n_minus_1(const FockVector& state) {
    const auto amps = state.amplitudes();
    double s = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double n = static_cast<double>(state.offset() + i);
        s += n * (n - 1.0) * std::norm(amps[i]);
    }
    return s;
}

Complex expect_bdag_b2(const FockVector& state) {
    // b^dag b^2 |n> = (n-1) sqrt(n) |n-1>
    const auto amps = state.amplitudes();
    Complex s{0.0, 0.0};
    for (std::size_t i = 1; i < amps.size(); ++i) {
        const double n = static_cast<double>(state.offset() + i);
        s += std::conj(amps[i - 1]) * amps[i] * ((n - 1.0) * std::sqrt(n));
    }
    return s;
}

double fidelity(const FockVector& a, const FockVector& b) {
    return std::min(1.0, std::norm(inner_product(a, b)));
}

FockVector linear_combination(Complex ca, const FockVector& a, Complex cb, const FockVector& b) {
    const std::size_t lo = std::min(a.offset(), b.offset());
    const std::size_t hi = std::max(a.top(), b.top());
    std::vector<Complex> out(hi - lo + 1);
    for (std::size_t n = lo; n <= hi; ++n) out[n - lo] = ca * a.at(n) + cb * b.at(n);
    return FockVector(lo, std::move(out));
}

}  // namespace f2f::fock
