#pragma once

// Double-double ("compensated") arithmetic used internally by the series
// evaluations in specfun.hpp. A value is represented as an unevaluated sum
// hi + lo with |lo| <= ulp(hi)/2, giving ~31 significant decimal digits.
// This absorbs the e^{|z|} cancellation of the Maclaurin sums without
// resorting to arbitrary precision.
//
// Requires strict FP semantics: the build must not enable value-changing
// FP contractions across these statements (-ffp-contract=off).

#include <cmath>
#include <complex>

namespace qbm::detail {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {  // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD x, DD y) {
    DD s = two_sum(x.hi, y.hi);
    double e = s.lo + x.lo + y.lo;
    return quick_two_sum(s.hi, e);
}

inline DD dd_sub(DD x, DD y) { return dd_add(x, {-y.hi, -y.lo}); }

inline DD dd_mul(DD x, DD y) {
    DD p = two_prod(x.hi, y.hi);
    double e = p.lo + x.hi * y.lo + x.lo * y.hi;
    return quick_two_sum(p.hi, e);
}

inline DD dd_mul_d(DD x, double d) {
    DD p = two_prod(x.hi, d);
    double e = p.lo + x.lo * d;
    return quick_two_sum(p.hi, e);
}

inline DD dd_div_d(DD x, double d) {
    double q1 = x.hi / d;
    DD p = two_prod(q1, d);
    double e = ((x.hi - p.hi) - p.lo + x.lo) / d;
    return quick_two_sum(q1, e);
}

// Complex value with double-double components.
struct DDC {
    DD re, im;
};

inline DDC ddc_from(std::complex<double> z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }

inline std::complex<double> ddc_to(DDC z) { return {z.re.hi + z.re.lo, z.im.hi + z.im.lo}; }

inline DDC ddc_add(DDC a, DDC b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline DDC ddc_mul(DDC a, DDC b) {
    DD re = dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im));
    DD im = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
    return {re, im};
}

inline DDC ddc_div_d(DDC a, double d) { return {dd_div_d(a.re, d), dd_div_d(a.im, d)}; }

inline double ddc_abs_est(DDC a) { return std::hypot(a.re.hi, a.im.hi); }

}  // namespace qbm::detail
