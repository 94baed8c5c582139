#pragma once

// High-precision series oracle for the four special functions, built on
// MPFR at 256 bits (~77 decimal digits). Test-only: deliberately shares no
// code with qbm/specfun.hpp. Every function is evaluated from its Maclaurin
// definition plus a principal log (on-cut from above), so the branch
// convention matches the library contract while the numerics are
// independent.

#include <complex>
#include <stdexcept>
#include <utility>

#include <mpfr.h>

namespace qboracle {

constexpr mpfr_prec_t kPrec = 256;

class Hp {
public:
    Hp() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    explicit Hp(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
    explicit Hp(long i) { mpfr_init2(v_, kPrec); mpfr_set_si(v_, i, MPFR_RNDN); }
    Hp(const Hp& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Hp(Hp&& o) noexcept { mpfr_init2(v_, kPrec); mpfr_swap(v_, o.v_); }
    Hp& operator=(Hp o) { mpfr_swap(v_, o.v_); return *this; }
    ~Hp() { mpfr_clear(v_); }

    static Hp euler_gamma() { Hp r; mpfr_const_euler(r.v_, MPFR_RNDN); return r; }
    static Hp pi() { Hp r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Hp operator+(const Hp& a, const Hp& b) { Hp r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Hp operator-(const Hp& a, const Hp& b) { Hp r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Hp operator*(const Hp& a, const Hp& b) { Hp r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Hp operator/(const Hp& a, const Hp& b) { Hp r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    Hp operator-() const { Hp r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    Hp div_long(long k) const { Hp r; mpfr_div_si(r.v_, v_, k, MPFR_RNDN); return r; }
    Hp abs() const { Hp r; mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool less_than(const Hp& o) const { return mpfr_less_p(v_, o.v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    static Hp hypot(const Hp& a, const Hp& b) { Hp r; mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    static Hp atan2(const Hp& y, const Hp& x) { Hp r; mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN); return r; }
    static Hp log(const Hp& a) { Hp r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
    static Hp pow2(long e) { Hp r; mpfr_set_si(r.v_, 1, MPFR_RNDN); mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN); return r; }

private:
    mpfr_t v_;
};

struct HpC {
    Hp re, im;

    HpC() = default;
    HpC(Hp r, Hp i) : re(std::move(r)), im(std::move(i)) {}
    explicit HpC(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

    friend HpC operator+(const HpC& a, const HpC& b) { return {a.re + b.re, a.im + b.im}; }
    friend HpC operator-(const HpC& a, const HpC& b) { return {a.re - b.re, a.im - b.im}; }
    friend HpC operator*(const HpC& a, const HpC& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    HpC div_long(long k) const { return {re.div_long(k), im.div_long(k)}; }
    Hp abs() const { return Hp::hypot(re, im); }
};

/// Principal log, on-cut limit from above (atan2(+0, x<0) = +pi).
inline HpC hp_log(const HpC& z) {
    Hp mag = z.abs();
    if (mag.is_zero()) throw std::domain_error("hp_log: z = 0");
    Hp im = z.im;
    if (z.im.is_zero() && z.re.sign() < 0) im = Hp(0.0);  // +0 side of the cut
    return {Hp::log(mag), Hp::atan2(im, z.re)};
}

namespace detail {

// generic sum with term recurrence; stops when |term| < 2^-300 * (|sum|+1)
template <typename Step>
HpC hp_sum(Step&& step, int max_terms = 4000) {
    HpC sum;
    const Hp tiny = Hp::pow2(-300);
    for (int k = 1; k <= max_terms; ++k) {
        HpC term = step(k);
        sum = sum + term;
        Hp bound = tiny * (sum.abs() + Hp(1.0));
        if (k > 4 && term.abs().less_than(bound)) return sum;
    }
    throw std::runtime_error("hp_sum: no convergence");
}

}  // namespace detail

/// Ei(z) = gamma + Log z + sum z^k / (k k!)
inline HpC hp_ei(std::complex<double> zd) {
    HpC z(zd);
    HpC u(Hp(1.0), Hp(0.0));  // z^k / k!
    HpC series = detail::hp_sum([&](int k) {
        u = (u * z).div_long(k);
        return u.div_long(k);
    });
    HpC base = hp_log(z);
    base.re = base.re + Hp::euler_gamma();
    return base + series;
}

/// Ci(z) = gamma + Log z + sum_{m>=1} (-1)^m z^{2m} / ((2m) (2m)!)
inline HpC hp_ci(std::complex<double> zd) {
    HpC z(zd);
    HpC z2 = z * z;
    HpC u(Hp(1.0), Hp(0.0));  // z^{2m} / (2m)!
    int sgn = 1;
    HpC series = detail::hp_sum([&](int m) {
        u = (u * z2).div_long(2L * m - 1).div_long(2L * m);
        sgn = -sgn;
        HpC t = u.div_long(2L * m);
        return sgn < 0 ? HpC(-t.re, -t.im) : t;
    });
    HpC base = hp_log(z);
    base.re = base.re + Hp::euler_gamma();
    return base + series;
}

/// Si(z) = sum_{m>=0} (-1)^m z^{2m+1} / ((2m+1) (2m+1)!)
inline HpC hp_si(std::complex<double> zd) {
    HpC z(zd);
    if (zd == std::complex<double>(0.0, 0.0)) return z;
    HpC z2 = z * z;
    HpC u = z;  // z^{2m+1} / (2m+1)!
    int sgn = 1;
    HpC first = u;  // m = 0 term
    HpC rest = detail::hp_sum([&](int m) {
        u = (u * z2).div_long(2L * m).div_long(2L * m + 1);
        sgn = -sgn;
        HpC t = u.div_long(2L * m + 1);
        return sgn < 0 ? HpC(-t.re, -t.im) : t;
    });
    return first + rest;
}

/// Shi(z) = sum_{m>=0} z^{2m+1} / ((2m+1) (2m+1)!)
inline HpC hp_shi(std::complex<double> zd) {
    HpC z(zd);
    if (zd == std::complex<double>(0.0, 0.0)) return z;
    HpC z2 = z * z;
    HpC u = z;
    HpC first = u;
    HpC rest = detail::hp_sum([&](int m) {
        u = (u * z2).div_long(2L * m).div_long(2L * m + 1);
        return u.div_long(2L * m + 1);
    });
    return first + rest;
}

}  // namespace qboracle
