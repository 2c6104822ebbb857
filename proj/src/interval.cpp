#include "modtower/interval.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <mpfr.h>

namespace modtower {

namespace {

thread_local long g_precision = 256;

class Mpfr {
public:
    explicit Mpfr(long bits) { mpfr_init2(v_, static_cast<mpfr_prec_t>(std::max(bits, 32L))); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

    void set(const Rational& q, mpfr_rnd_t rnd) { mpfr_set_q(v_, q.raw().get_mpq_t(), rnd); }

    Rational to_rational()
    {
        if (mpfr_zero_p(v_))
            return Rational(0);
        if (!mpfr_number_p(v_))
            throw std::overflow_error("non-finite MPFR value");
        Integer m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
        Integer scale = 1;
        if (e >= 0) {
            mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
            return Rational(m);
        }
        mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        return Rational(m, scale);
    }

private:
    mpfr_t v_;
};

long mpfr_bits()
{
    return working_precision() + 32;
}

template <class Fn>
Interval monotone_increasing(const Interval& x, Fn fn)
{
    const long bits = mpfr_bits();
    Mpfr lo(bits), hi(bits), out_lo(bits), out_hi(bits);
    lo.set(x.lo(), MPFR_RNDD);
    hi.set(x.hi(), MPFR_RNDU);
    fn(out_lo.get(), lo.get(), MPFR_RNDD);
    fn(out_hi.get(), hi.get(), MPFR_RNDU);
    return Interval(round_down(out_lo.to_rational(), working_precision()),
                    round_up(out_hi.to_rational(), working_precision()));
}

/// f(x) for f with |f'| <= 1 and |f| <= 1 (cos, sin), midpoint plus radius.
template <class Fn>
Interval lipschitz_trig(const Interval& x, Fn fn)
{
    const long bits = mpfr_bits();
    Mpfr m(bits), dn(bits), up(bits);
    m.set(x.mid(), MPFR_RNDN);
    Rational mq = m.to_rational();
    Rational r = std::max(x.hi() - mq, mq - x.lo());
    if (r >= Rational(2))
        return Interval(Rational(-1), Rational(1));
    fn(dn.get(), m.get(), MPFR_RNDD);
    fn(up.get(), m.get(), MPFR_RNDU);
    Rational lo = std::max(dn.to_rational() - r, Rational(-1));
    Rational hi = std::min(up.to_rational() + r, Rational(1));
    return Interval(round_down(lo, working_precision()), round_up(hi, working_precision()));
}

Rational round_impl(const Rational& q, long bits, bool up)
{
    if (q.is_zero())
        return q;
    const Integer& n = q.raw().get_num();
    const Integer& d = q.raw().get_den();
    const bool dyadic = mpz_popcount(d.get_mpz_t()) == 1;
    const long nb = static_cast<long>(bit_length(n));
    if (dyadic && nb <= bits + 1)
        return q;
    const long e = nb - static_cast<long>(bit_length(d));
    const long k = bits - e;
    Integer out;
    if (k >= 0) {
        Integer scaled;
        mpz_mul_2exp(scaled.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        if (up)
            mpz_cdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), d.get_mpz_t());
        else
            mpz_fdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), d.get_mpz_t());
        Integer den = 1;
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        return Rational(out, den);
    }
    Integer dd;
    mpz_mul_2exp(dd.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    if (up)
        mpz_cdiv_q(out.get_mpz_t(), n.get_mpz_t(), dd.get_mpz_t());
    else
        mpz_fdiv_q(out.get_mpz_t(), n.get_mpz_t(), dd.get_mpz_t());
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    return Rational(out);
}

Interval rounded(const Rational& lo, const Rational& hi)
{
    const long p = working_precision();
    return Interval(round_down(lo, p), round_up(hi, p));
}

} // namespace

long working_precision()
{
    return g_precision;
}

PrecisionScope::PrecisionScope(long bits) : saved_(g_precision)
{
    if (bits < 16)
        throw std::invalid_argument("working precision below 16 bits");
    g_precision = bits;
}

PrecisionScope::~PrecisionScope()
{
    g_precision = saved_;
}

Rational round_down(const Rational& q, long bits)
{
    return round_impl(q, bits, false);
}

Rational round_up(const Rational& q, long bits)
{
    return round_impl(q, bits, true);
}

Interval::Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi)
{
    if (hi < lo)
        throw std::invalid_argument("interval with lo > hi");
}

Rational Interval::mag() const
{
    return std::max(abs(lo_), abs(hi_));
}

Rational Interval::mig() const
{
    if (contains_zero())
        return Rational(0);
    return std::min(abs(lo_), abs(hi_));
}

Interval operator+(const Interval& a, const Interval& b)
{
    return rounded(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Interval operator-(const Interval& a, const Interval& b)
{
    return rounded(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Interval operator-(const Interval& a)
{
    return Interval(-a.hi_, -a.lo_);
}

Interval operator*(const Interval& a, const Interval& b)
{
    if (a.is_point() && b.is_point())
        return rounded(a.lo_ * b.lo_, a.lo_ * b.lo_);
    Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return rounded(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.contains_zero())
        throw std::domain_error("interval division by an interval containing zero");
    const long p = working_precision();
    Interval inv(round_down(inverse(b.hi_), p), round_up(inverse(b.lo_), p));
    return a * inv;
}

Interval sqr(const Interval& x)
{
    Rational a = x.lo() * x.lo(), b = x.hi() * x.hi();
    if (x.contains_zero())
        return rounded(Rational(0), std::max(a, b));
    return rounded(std::min(a, b), std::max(a, b));
}

Interval hull(const Interval& a, const Interval& b)
{
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

bool overlaps(const Interval& a, const Interval& b)
{
    return !(a.hi() < b.lo() || b.hi() < a.lo());
}

Interval intersect(const Interval& a, const Interval& b)
{
    if (!overlaps(a, b))
        throw std::domain_error("intersection of disjoint intervals");
    return Interval(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Rational Box::width() const
{
    return std::max(re_.width(), im_.width());
}

Box operator*(const Box& a, const Box& b)
{
    if (a.im_.is_point() && a.im_.lo().is_zero())
        return Box(a.re_ * b.re_, a.re_ * b.im_);
    if (b.im_.is_point() && b.im_.lo().is_zero())
        return Box(a.re_ * b.re_, a.im_ * b.re_);
    return Box(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

Box operator/(const Box& a, const Box& b)
{
    if (b.im_.is_point() && b.im_.lo().is_zero())
        return Box(a.re_ / b.re_, a.im_ / b.re_);
    Interval n = sqr(b.re_) + sqr(b.im_);
    if (n.contains_zero())
        throw std::domain_error("complex division by a box containing zero");
    Box num = a * conj(b);
    return Box(num.re_ / n, num.im_ / n);
}

Box conj(const Box& z)
{
    return Box(z.re(), -z.im());
}

Box hull(const Box& a, const Box& b)
{
    return Box(hull(a.re(), b.re()), hull(a.im(), b.im()));
}

bool overlaps(const Box& a, const Box& b)
{
    return overlaps(a.re(), b.re()) && overlaps(a.im(), b.im());
}

Box intersect(const Box& a, const Box& b)
{
    return Box(intersect(a.re(), b.re()), intersect(a.im(), b.im()));
}

Box inflate(const Box& z, const Rational& r)
{
    return Box(Interval(z.re().lo() - r, z.re().hi() + r), Interval(z.im().lo() - r, z.im().hi() + r));
}

Box times_i(const Box& z)
{
    return Box(-z.im(), z.re());
}

Rational mag_sq_upper(const Box& z)
{
    Rational a = z.re().mag(), b = z.im().mag();
    return round_up(a * a + b * b, working_precision());
}

Rational mag_upper(const Box& z)
{
    const long bits = mpfr_bits();
    Mpfr s(bits);
    s.set(mag_sq_upper(z), MPFR_RNDU);
    mpfr_sqrt(s.get(), s.get(), MPFR_RNDU);
    return round_up(s.to_rational(), working_precision());
}

Rational mag_lower(const Box& z)
{
    Rational a = z.re().mig(), b = z.im().mig();
    Rational sq = a * a + b * b;
    if (sq.is_zero())
        return sq;
    const long bits = mpfr_bits();
    Mpfr s(bits);
    s.set(sq, MPFR_RNDD);
    mpfr_sqrt(s.get(), s.get(), MPFR_RNDD);
    return round_down(s.to_rational(), working_precision());
}

Box pow(const Box& z, int e)
{
    if (e < 0)
        return Box(1) / pow(z, -e);
    Box r(1), b = z;
    while (e > 0) {
        if (e & 1)
            r = r * b;
        e >>= 1;
        if (e)
            b = b * b;
    }
    return r;
}

Interval pi_interval()
{
    const long bits = mpfr_bits();
    Mpfr lo(bits), hi(bits);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
    return Interval(round_down(lo.to_rational(), working_precision()),
                    round_up(hi.to_rational(), working_precision()));
}

Interval exp(const Interval& x)
{
    return monotone_increasing(x, [](mpfr_ptr r, mpfr_ptr a, mpfr_rnd_t rnd) { mpfr_exp(r, a, rnd); });
}

Interval log(const Interval& x)
{
    if (!x.positive())
        throw std::domain_error("log of an interval not strictly positive");
    return monotone_increasing(x, [](mpfr_ptr r, mpfr_ptr a, mpfr_rnd_t rnd) { mpfr_log(r, a, rnd); });
}

Interval sqrt(const Interval& x)
{
    if (x.lo().sign() < 0)
        throw std::domain_error("sqrt of an interval with negative part");
    return monotone_increasing(x, [](mpfr_ptr r, mpfr_ptr a, mpfr_rnd_t rnd) { mpfr_sqrt(r, a, rnd); });
}

Interval cos(const Interval& x)
{
    return lipschitz_trig(x, [](mpfr_ptr r, mpfr_ptr a, mpfr_rnd_t rnd) { mpfr_cos(r, a, rnd); });
}

Interval sin(const Interval& x)
{
    return lipschitz_trig(x, [](mpfr_ptr r, mpfr_ptr a, mpfr_rnd_t rnd) { mpfr_sin(r, a, rnd); });
}

Box exp(const Box& z)
{
    Interval m = exp(z.re());
    return Box(m * cos(z.im()), m * sin(z.im()));
}

Box qparam(const Box& tau)
{
    Interval two_pi = Interval(2) * pi_interval();
    Interval m = exp(-(two_pi * tau.im()));
    Interval arg = two_pi * tau.re();
    return Box(m * cos(arg), m * sin(arg));
}

std::string to_string(const Interval& x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string to_string(const Box& z)
{
    std::ostringstream os;
    os << z;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Interval& x)
{
    return os << "[" << x.lo().to_double() << ", " << x.hi().to_double() << "]";
}

std::ostream& operator<<(std::ostream& os, const Box& z)
{
    return os << z.re() << " + i" << z.im();
}

double approx(const Rational& q)
{
    return q.to_double();
}

} // namespace modtower
