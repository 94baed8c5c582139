#pragma once

// Complex-argument exponential, cosine, sine and hyperbolic-sine integrals
// on the principal branch (cut along the negative real axis, on-cut inputs
// taken as the limit from above).
//
// A single Ei engine does the numerical work: a compensated Maclaurin/log
// series inside |z| <= switch_radius and the divergent asymptotic expansion
// with the e^z/z prefactor outside. Ci/Si/Shi are exact branch-constant
// combinations of Ei at rotated arguments, so they inherit the engine's
// accuracy and its conjugation symmetry.

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "qbm/detail/compensated.hpp"
#include "qbm/errors.hpp"

namespace qbm {

using Complex = std::complex<double>;

/// Accuracy contract for the special-function evaluations.
struct AccuracySpec {
    double rel_tol = 1e-12;      ///< target relative error, in (0, 1e-3]
    int max_terms = 500;         ///< series iteration cap
    double switch_radius = 32.0; ///< series/asymptotic switchover |z|

    void validate() const {
        std::string bad;
        if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) bad += " rel_tol not in (0, 1e-3];";
        if (max_terms < 1) bad += " max_terms < 1;";
        if (!(switch_radius >= 4.0) || !std::isfinite(switch_radius))
            bad += " switch_radius < 4;";
        if (!bad.empty()) throw ValidationError("AccuracySpec invalid:" + bad);
    }
};

/// Value plus diagnostics. `condition` estimates the cancellation suffered:
/// largest intermediate magnitude divided by the result magnitude. Callers
/// may re-evaluate at tighter tolerance when it is large (the spec-level
/// guard threshold is result < 1e-8 * largest term).
struct SpecfunResult {
    Complex value;
    double condition = 1.0;
    int terms_used = 0;
};

namespace detail {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

inline void require_finite_arg(Complex z, const char* fn) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError(std::string(fn) + ": non-finite argument");
}

// Principal log with the on-cut limit taken from above.
inline Complex log_from_above(Complex z) {
    if (z.imag() == 0.0 && z.real() < 0.0)
        return {std::log(-z.real()), 3.14159265358979323846264338327950288};
    return std::log(z);
}

// Log z - Log(-z), exactly +/- i pi under the from-above convention.
inline Complex log_ratio_pi(Complex z) {
    const double pi = 3.14159265358979323846264338327950288;
    bool upper = z.imag() > 0.0 || (z.imag() == 0.0 && z.real() < 0.0);
    return {0.0, upper ? pi : -pi};
}

inline Complex mul_i(Complex z) { return {-z.imag(), z.real()}; }    // i*z
inline Complex mul_mi(Complex z) { return {z.imag(), -z.real()}; }   // -i*z

// Maclaurin series: Ei(z) = gamma + Log z + sum_{k>=1} z^k/(k*k!).
// Summed in double-double; cancellation up to ~e^{|z|} is absorbed.
inline SpecfunResult ei_series(Complex z, const AccuracySpec& acc) {
    using namespace qbm::detail;
    const Complex base = Complex(kEulerGamma, 0.0) + log_from_above(z);
    DDC zdd = ddc_from(z);
    DDC u = {{1.0, 0.0}, {0.0, 0.0}};  // z^k / k!
    DDC sum = {{0.0, 0.0}, {0.0, 0.0}};
    double max_mag = std::abs(base);
    const double floor_tol = std::min(acc.rel_tol * 1e-6, 1e-18);
    int k = 0;
    while (true) {
        ++k;
        if (k > acc.max_terms)
            throw ConvergenceError("expint_ei: series exceeded max_terms at |z|=" +
                                   std::to_string(std::abs(z)));
        u = ddc_div_d(ddc_mul(u, zdd), static_cast<double>(k));
        DDC term = ddc_div_d(u, static_cast<double>(k));
        sum = ddc_add(sum, term);
        double tm = ddc_abs_est(term);
        if (tm > max_mag) max_mag = tm;
        double total_est = std::abs(base + ddc_to(sum));
        if (k > 3 && tm <= floor_tol * std::max(total_est, 1e-300)) break;
    }
    Complex value = base + ddc_to(sum);
    double cond = max_mag / std::max(std::abs(value), 1e-300);
    return {value, cond, k};
}

// Asymptotic expansion: Ei(z) ~ s*i*pi + (e^z/z) sum_{k>=0} k!/z^k, truncated
// at the smallest term. s follows the from-above branch convention.
inline SpecfunResult ei_asymptotic(Complex z, const AccuracySpec& acc) {
    const double pi = 3.14159265358979323846264338327950288;
    if (z.real() > 700.0)
        throw DomainError("expint_ei: e^z overflows for Re z > 700");
    double s;
    if (z.imag() > 0.0) s = 1.0;
    else if (z.imag() < 0.0) s = -1.0;
    else s = (z.real() > 0.0) ? 0.0 : 1.0;  // on-cut from above
    const Complex base = Complex(0.0, s * pi);

    Complex term(1.0, 0.0);
    Complex series(1.0, 0.0);
    double prev_mag = 1.0;
    int k = 0;
    double trunc = 1.0;
    while (true) {
        ++k;
        if (k > acc.max_terms) break;
        term *= static_cast<double>(k) / z;
        double tm = std::abs(term);
        if (tm >= prev_mag) { trunc = prev_mag; break; }  // divergence onset
        series += term;
        prev_mag = tm;
        trunc = tm;
        if (tm <= acc.rel_tol * 1e-3) break;
    }
    const Complex front = std::exp(z) / z;
    const Complex value = base + front * series;
    double vmag = std::max(std::abs(value), 1e-300);
    double rel_floor = std::abs(front) * trunc / vmag;
    if (rel_floor > acc.rel_tol)
        throw ConvergenceError(
            "expint_ei: asymptotic truncation floor " + std::to_string(rel_floor) +
            " above rel_tol at |z|=" + std::to_string(std::abs(z)));
    double cond = (std::abs(front) + pi) / vmag;
    return {value, cond, k};
}

inline SpecfunResult ei_engine(Complex z, const AccuracySpec& acc) {
    acc.validate();
    require_finite_arg(z, "expint_ei");
    if (z.real() == 0.0 && z.imag() == 0.0)
        throw DomainError("expint_ei: logarithmic singularity at z = 0");
    if (std::abs(z) <= acc.switch_radius) return ei_series(z, acc);
    return ei_asymptotic(z, acc);
}

}  // namespace detail

/// Exponential integral Ei(z). Principal branch, on-cut from above.
inline SpecfunResult expint_ei_ex(Complex z, const AccuracySpec& acc = {}) {
    return detail::ei_engine(z, acc);
}

inline Complex expint_ei(Complex z, const AccuracySpec& acc = {}) {
    return detail::ei_engine(z, acc).value;
}

/// Hyperbolic sine integral Shi(z) = int_0^z sinh(u)/u du. Entire, odd.
inline SpecfunResult sinhint_shi_ex(Complex z, const AccuracySpec& acc = {}) {
    detail::require_finite_arg(z, "sinhint_shi");
    if (z.real() == 0.0 && z.imag() == 0.0) return {Complex(0.0, 0.0), 1.0, 0};
    SpecfunResult a = detail::ei_engine(z, acc);
    SpecfunResult b = detail::ei_engine(-z, acc);
    Complex lam = detail::log_ratio_pi(z);
    Complex v = (a.value - b.value - lam) * 0.5;
    double cond = std::max(a.condition, b.condition) *
                  std::max(std::abs(a.value), std::abs(b.value)) /
                  std::max(std::abs(v), 1e-300);
    return {v, cond, a.terms_used + b.terms_used};
}

inline Complex sinhint_shi(Complex z, const AccuracySpec& acc = {}) {
    return sinhint_shi_ex(z, acc).value;
}

/// Sine integral Si(z) = int_0^z sin(u)/u du. Entire, odd.
inline SpecfunResult sinint_si_ex(Complex z, const AccuracySpec& acc = {}) {
    detail::require_finite_arg(z, "sinint_si");
    if (z.real() == 0.0 && z.imag() == 0.0) return {Complex(0.0, 0.0), 1.0, 0};
    // odd reflection onto Re z >= 0 (Im z >= 0 on the axis)
    bool flip = z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0);
    Complex w = flip ? -z : z;
    SpecfunResult a = detail::ei_engine(detail::mul_i(w), acc);
    SpecfunResult b = detail::ei_engine(detail::mul_mi(w), acc);
    const double pi = 3.14159265358979323846264338327950288;
    // Si(w) = (Ei(iw) - Ei(-iw) - i pi) * (-i/2), valid for Re w >= 0
    Complex v = (a.value - b.value - Complex(0.0, pi)) * Complex(0.0, -0.5);
    if (flip) v = -v;
    double cond = std::max(a.condition, b.condition) *
                  std::max(std::abs(a.value), std::abs(b.value)) /
                  std::max(std::abs(v), 1e-300);
    return {v, cond, a.terms_used + b.terms_used};
}

inline Complex sinint_si(Complex z, const AccuracySpec& acc = {}) {
    return sinint_si_ex(z, acc).value;
}

/// Cosine integral Ci(z) = gamma + Log z + int_0^z (cos u - 1)/u du.
/// Principal branch, on-cut from above.
inline SpecfunResult cosint_ci_ex(Complex z, const AccuracySpec& acc = {}) {
    detail::require_finite_arg(z, "cosint_ci");
    if (z.real() == 0.0 && z.imag() == 0.0)
        throw DomainError("cosint_ci: logarithmic singularity at z = 0");
    // reflection Ci(z) = Ci(-z) + (Log z - Log(-z)) onto Re z >= 0
    bool flip = z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0);
    Complex w = flip ? -z : z;
    SpecfunResult a = detail::ei_engine(detail::mul_i(w), acc);
    SpecfunResult b = detail::ei_engine(detail::mul_mi(w), acc);
    Complex v = (a.value + b.value) * 0.5;  // exact for Re w >= 0
    if (flip) v += detail::log_ratio_pi(z);
    double cond = std::max(a.condition, b.condition) *
                  std::max(std::abs(a.value), std::abs(b.value)) /
                  std::max(std::abs(v), 1e-300);
    return {v, cond, a.terms_used + b.terms_used};
}

inline Complex cosint_ci(Complex z, const AccuracySpec& acc = {}) {
    return cosint_ci_ex(z, acc).value;
}

/// Real principal-value Ei(x) for real x (the classical real function).
/// Equals Re of the from-above value; used by the coefficient closed forms
/// for their real-argument constants.
inline double expint_ei_pv(double x, const AccuracySpec& acc = {}) {
    if (x == 0.0) throw DomainError("expint_ei_pv: singularity at 0");
    return detail::ei_engine(Complex(x, 0.0), acc).value.real();
}

}  // namespace qbm
