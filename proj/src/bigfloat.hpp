#ifndef MODTOWER_SRC_BIGFLOAT_HPP
#define MODTOWER_SRC_BIGFLOAT_HPP

// Copyable MPFR value with per-object precision.  Used only for
// non-rigorous approximation (root finding seeds, Newton steps); every
// result it produces is certified afterwards in interval arithmetic.

#include <algorithm>
#include <utility>

#include <mpfr.h>

#include "modtower/rational.hpp"

namespace modtower::detail {

class BigFloat {
public:
    explicit BigFloat(long bits = 64)
    {
        mpfr_init2(v_, static_cast<mpfr_prec_t>(std::max(bits, 32L)));
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const Rational& q, long bits) : BigFloat(bits) { mpfr_set_q(v_, q.raw().get_mpq_t(), MPFR_RNDN); }
    BigFloat(double d, long bits) : BigFloat(bits) { mpfr_set_d(v_, d, MPFR_RNDN); }
    BigFloat(const BigFloat& o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool finite() const { return mpfr_number_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// floor(log2 |x|) + 1, or a very negative number for 0
    long exponent() const { return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_)); }

    Rational to_rational() const
    {
        if (is_zero() || !finite())
            return Rational(0);
        Integer m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
        if (e >= 0) {
            mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
            return Rational(m);
        }
        Integer scale = 1;
        mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        return Rational(m, scale);
    }

#define MODTOWER_BF_BINOP(op, fn)                                                   \
    friend BigFloat operator op(const BigFloat& a, const BigFloat& b)               \
    {                                                                               \
        BigFloat r(std::max(a.bits(), b.bits()));                                   \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                            \
        return r;                                                                   \
    }
    MODTOWER_BF_BINOP(+, mpfr_add)
    MODTOWER_BF_BINOP(-, mpfr_sub)
    MODTOWER_BF_BINOP(*, mpfr_mul)
    MODTOWER_BF_BINOP(/, mpfr_div)
#undef MODTOWER_BF_BINOP

    friend BigFloat operator-(const BigFloat& a)
    {
        BigFloat r(a.bits());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

    friend BigFloat abs(const BigFloat& a)
    {
        BigFloat r(a.bits());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat sqrt(const BigFloat& a)
    {
        BigFloat r(a.bits());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

private:
    mpfr_t v_;
};

struct Complex {
    BigFloat re, im;

    explicit Complex(long bits = 64) : re(bits), im(bits) {}
    Complex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        BigFloat d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    BigFloat abs() const { return sqrt(re * re + im * im); }
};

} // namespace modtower::detail

#endif
