#ifndef MODTOWER_INTERVAL_HPP
#define MODTOWER_INTERVAL_HPP

#include <iosfwd>
#include <string>

#include "modtower/rational.hpp"

namespace modtower {

/// Bits kept by outward rounding in interval arithmetic on the current thread.
long working_precision();

/// RAII override of the thread's working precision.
class PrecisionScope {
public:
    explicit PrecisionScope(long bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    long saved_;
};

/// Round toward -inf / +inf to a dyadic rational with about `bits`
/// significant bits.  Values that already fit are returned unchanged.
Rational round_down(const Rational& q, long bits);
Rational round_up(const Rational& q, long bits);

/// Closed real interval [lo, hi] with rational endpoints.
class Interval {
public:
    Interval() = default;
    Interval(const Rational& point) : lo_(point), hi_(point) {}
    Interval(int point) : lo_(point), hi_(point) {}
    Interval(const Rational& lo, const Rational& hi);

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational mid() const { return (lo_ + hi_) / Rational(2); }
    /// max(|lo|, |hi|)
    Rational mag() const;
    /// min |x| over the interval (0 if it contains 0)
    Rational mig() const;

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_in_interior(const Interval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool is_point() const { return lo_ == hi_; }
    bool positive() const { return lo_.sign() > 0; }
    bool negative() const { return hi_.sign() < 0; }

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }

    friend bool operator==(const Interval& a, const Interval& b) = default;

private:
    Rational lo_, hi_;
};

Interval sqr(const Interval& x);
Interval hull(const Interval& a, const Interval& b);
bool overlaps(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);

/// Rectangle in the complex plane: re x im.
class Box {
public:
    Box() = default;
    Box(const Interval& re, const Interval& im) : re_(re), im_(im) {}
    Box(const Interval& re) : re_(re), im_(0) {}
    Box(const Rational& re) : re_(re), im_(0) {}
    Box(int re) : re_(re), im_(0) {}
    static Box point(const Rational& re, const Rational& im) { return Box(Interval(re), Interval(im)); }

    const Interval& re() const { return re_; }
    const Interval& im() const { return im_; }
    Rational width() const;
    Box mid() const { return point(re_.mid(), im_.mid()); }
    Rational mid_re() const { return re_.mid(); }
    Rational mid_im() const { return im_.mid(); }

    bool contains(const Box& o) const { return re_.contains(o.re_) && im_.contains(o.im_); }
    bool contains_in_interior(const Box& o) const
    {
        return re_.contains_in_interior(o.re_) && im_.contains_in_interior(o.im_);
    }
    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
    bool contains_point(const Rational& re, const Rational& im) const
    {
        return re_.contains(re) && im_.contains(im);
    }

    friend Box operator+(const Box& a, const Box& b) { return Box(a.re_ + b.re_, a.im_ + b.im_); }
    friend Box operator-(const Box& a, const Box& b) { return Box(a.re_ - b.re_, a.im_ - b.im_); }
    friend Box operator-(const Box& a) { return Box(-a.re_, -a.im_); }
    friend Box operator*(const Box& a, const Box& b);
    friend Box operator/(const Box& a, const Box& b);
    Box& operator+=(const Box& o) { return *this = *this + o; }
    Box& operator-=(const Box& o) { return *this = *this - o; }
    Box& operator*=(const Box& o) { return *this = *this * o; }

    friend bool operator==(const Box& a, const Box& b) = default;

private:
    Interval re_, im_;
};

Box conj(const Box& z);
Box hull(const Box& a, const Box& b);
bool overlaps(const Box& a, const Box& b);
Box intersect(const Box& a, const Box& b);
/// Box enclosing the closed disc of radius r around z.
Box inflate(const Box& z, const Rational& r);
Box times_i(const Box& z);
/// Upper bound on |z|^2 and |z| over the box.
Rational mag_sq_upper(const Box& z);
Rational mag_upper(const Box& z);
/// Lower bound on |z| over the box (0 if it contains 0).
Rational mag_lower(const Box& z);
Box pow(const Box& z, int e);

// Rigorous transcendental enclosures (MPFR directed rounding, exported as
// rational endpoints).
Interval pi_interval();
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sqrt(const Interval& x);
Interval cos(const Interval& x);
Interval sin(const Interval& x);
Box exp(const Box& z);
/// exp(2 pi i tau)
Box qparam(const Box& tau);

std::string to_string(const Interval& x);
std::string to_string(const Box& z);
std::ostream& operator<<(std::ostream& os, const Interval& x);
std::ostream& operator<<(std::ostream& os, const Box& z);

/// Convert an MPFR-style approximation back to a decimal string (diagnostics).
double approx(const Rational& q);

} // namespace modtower

#endif
