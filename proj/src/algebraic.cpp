#include "modtower/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>

#include "bigfloat.hpp"

namespace modtower {

using detail::BigFloat;
using detail::Complex;

namespace {

constexpr long kMaxBits = 1L << 16;

Rational pow2(long k)
{
    Integer one = 1;
    if (k >= 0) {
        mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        return Rational(one);
    }
    mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    return Rational(Integer(1), one);
}

/// Rough log2 |q| (q != 0).
long log2_estimate(const Rational& q)
{
    if (q.is_zero())
        return -(1L << 30);
    return static_cast<long>(bit_length(q.num())) - static_cast<long>(bit_length(q.den()));
}

long coeff_bits(const QPoly& p)
{
    long b = 1;
    for (const auto& c : p.coeffs())
        if (!c.is_zero())
            b = std::max(b, static_cast<long>(bit_length(c.num())) + static_cast<long>(bit_length(c.den())));
    return b;
}

QPoly normalize(const QPoly& p) { return to_qpoly(primitive_integer(p)); }

// ---- approximation (not rigorous) -------------------------------------------

struct Horner {
    Complex p, dp;
};

Horner eval_with_derivative(const std::vector<BigFloat>& c, const Complex& z)
{
    const long bits = z.re.bits();
    Complex p(bits), dp(bits);
    p.re = c.back();
    for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z;
        p.re = p.re + c[static_cast<std::size_t>(i)];
    }
    return {p, dp};
}

std::vector<BigFloat> float_coeffs(const QPoly& p, long bits)
{
    std::vector<BigFloat> c;
    for (const auto& q : p.coeffs())
        c.emplace_back(q, bits);
    return c;
}

/// Aberth-Ehrlich simultaneous iteration for all roots of a squarefree p.
std::vector<Complex> aberth(const QPoly& p, long bits)
{
    const int n = p.degree();
    auto c = float_coeffs(p, bits);
    // Fujiwara-type radius
    double lg = -1e300;
    for (int i = 0; i < n; ++i) {
        if (p[i].is_zero())
            continue;
        double l = static_cast<double>(log2_estimate(p[i] / p.lead()) + 1) / (n - i);
        lg = std::max(lg, l);
    }
    double radius = std::ldexp(1.0, static_cast<int>(std::clamp(lg, -60.0, 900.0)) + 1);
    std::vector<Complex> z;
    for (int k = 0; k < n; ++k) {
        double ang = 2.0 * M_PI * k / n + 0.7;
        z.emplace_back(BigFloat(radius * std::cos(ang), bits), BigFloat(radius * std::sin(ang), bits));
    }
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    const long tol = bits - 12;
    const int max_iter = 400 + 40 * n;
    for (int it = 0; it < max_iter; ++it) {
        bool all = true;
        for (int k = 0; k < n; ++k) {
            auto ks = static_cast<std::size_t>(k);
            auto [pv, dv] = eval_with_derivative(c, z[ks]);
            if (pv.re.is_zero() && pv.im.is_zero()) {
                done[ks] = true;
                continue;
            }
            Complex ratio = pv / dv;
            Complex s(bits);
            for (int j = 0; j < n; ++j)
                if (j != k) {
                    Complex one(BigFloat(1.0, bits), BigFloat(bits));
                    s = s + one / (z[ks] - z[static_cast<std::size_t>(j)]);
                }
            Complex one(BigFloat(1.0, bits), BigFloat(bits));
            Complex w = ratio / (one - ratio * s);
            if (!w.re.finite() || !w.im.finite())
                w = ratio;
            if (!w.re.finite() || !w.im.finite())
                continue;
            z[ks] = z[ks] - w;
            long ew = w.abs().exponent();
            long ez = std::max(0L, z[ks].abs().exponent());
            done[ks] = ew < ez - tol;
            all = all && done[ks];
        }
        if (all)
            break;
    }
    return z;
}

/// Newton iteration on a single root from a rational starting point.
Complex newton(const QPoly& p, const Rational& re, const Rational& im, bool real, long bits)
{
    auto c = float_coeffs(p, bits);
    Complex z(BigFloat(re, bits), BigFloat(real ? Rational(0) : im, bits));
    for (int it = 0; it < 200; ++it) {
        auto [pv, dv] = eval_with_derivative(c, z);
        if (dv.re.is_zero() && dv.im.is_zero())
            break;
        Complex w = pv / dv;
        if (real)
            w.im = BigFloat(bits);
        z = z - w;
        if (w.abs().exponent() < std::max(0L, z.abs().exponent()) - bits + 8)
            break;
    }
    return z;
}

// ---- certification ---------------------------------------------------------

struct Certified {
    Box x; // root strictly inside
    Box k; // Krawczyk image, also contains the root
};

long eval_precision(const QPoly& p, const Rational& re, const Rational& im, const Rational& r)
{
    long mag = std::max(0L, std::max(log2_estimate(abs(re)), log2_estimate(abs(im))) + 1);
    return 64 + std::max(0L, -log2_estimate(r)) + coeff_bits(p) + p.degree() * mag;
}

/// Krawczyk test on the square of half-width r around (re, im).
std::optional<Certified> krawczyk(const QPoly& p, const QPoly& dp, const Rational& re, const Rational& im,
                                  const Rational& r)
{
    PrecisionScope scope(eval_precision(p, re, im, r));
    Box c = Box::point(re, im);
    Box x(Interval(re - r, re + r), Interval(im - r, im + r));
    Box pc = eval_box(p, c);
    Box dc = eval_box(dp, c);
    Rational dre = dc.mid_re(), dim = dc.mid_im();
    Rational norm = dre * dre + dim * dim;
    if (norm.is_zero())
        return std::nullopt;
    const long bits = working_precision();
    Box y = Box::point(round_down(dre / norm, bits), round_down(-dim / norm, bits));
    Box m = Box(1) - y * eval_box(dp, x);
    Box k = c - y * pc + m * (x - c);
    if (!x.contains_in_interior(k) || mag_sq_upper(m) >= Rational(1))
        return std::nullopt;
    return Certified{x, k};
}

Rational to_dyadic(const BigFloat& f, long bits) { return round_down(f.to_rational(), bits); }

} // namespace

Box eval_box(const QPoly& p, const Box& z)
{
    return horner(p, z, [](const Rational& c) { return Box(c); });
}

// ---- state -----------------------------------------------------------------

struct AlgebraicNumber::State {
    QPoly poly;  // minimal polynomial, primitive integer coefficients
    QPoly dpoly; // derivative
    std::optional<Rational> rational;
    bool real = false;
    mutable std::mutex mu;
    Box box;
    int depth = 0;

    Box current() const
    {
        std::lock_guard lock(mu);
        return box;
    }

    void refine_to(const Rational& width)
    {
        std::lock_guard lock(mu);
        if (rational)
            return;
        while (box.width() > width) {
            Rational target = std::min(width, box.width() / Rational(4));
            Rational r = target / Rational(4);
            long mag = std::max(0L, log2_estimate(abs(box.mid_re()) + abs(box.mid_im())));
            long bits = std::max(64L, -log2_estimate(r) + mag + 32);
            Complex z = newton(poly, box.mid_re(), box.mid_im(), real, bits);
            Rational zr = to_dyadic(z.re, bits), zi = real ? Rational(0) : to_dyadic(z.im, bits);
            auto cert = krawczyk(poly, dpoly, zr, zi, r);
            if (cert && box.contains(cert->k)) {
                box = intersect(cert->x, box);
                ++depth;
                continue;
            }
            if (!fallback(target))
                throw std::runtime_error("algebraic refinement failed");
        }
    }

    // Re-isolate all roots and keep the unique one meeting the current box.
    bool fallback(const Rational& target)
    {
        Rational w = target;
        for (int attempt = 0; attempt < 8; ++attempt, w = w / Rational(16)) {
            auto roots = isolate_roots(poly, w);
            const AlgebraicNumber* hit = nullptr;
            int count = 0;
            for (const auto& cand : roots)
                if (overlaps(cand.box(), box)) {
                    ++count;
                    hit = &cand;
                }
            if (count == 1) {
                box = intersect(hit->box(), box);
                ++depth;
                return true;
            }
        }
        return false;
    }
};

AlgebraicNumber make_certified(const QPoly& minpoly, const Box& box, bool real)
{
    auto s = std::make_shared<AlgebraicNumber::State>();
    s->poly = minpoly;
    s->dpoly = derivative(minpoly);
    s->real = real;
    s->box = box;
    return AlgebraicNumber(std::move(s));
}

AlgebraicNumber::AlgebraicNumber(const Rational& q) : s_(std::make_shared<State>())
{
    s_->poly = QPoly{-q, Rational(1)};
    s_->poly = normalize(s_->poly);
    s_->dpoly = derivative(s_->poly);
    s_->rational = q;
    s_->real = true;
    s_->box = Box(q);
}

const QPoly& AlgebraicNumber::poly() const { return s_->poly; }
Box AlgebraicNumber::box() const { return s_->current(); }
Box AlgebraicNumber::refine(const Rational& width) const
{
    s_->refine_to(width);
    return s_->current();
}
int AlgebraicNumber::precision_state() const
{
    std::lock_guard lock(s_->mu);
    return s_->depth;
}
std::optional<Rational> AlgebraicNumber::rational_value() const { return s_->rational; }
bool AlgebraicNumber::is_zero() const { return s_->rational && s_->rational->is_zero(); }
bool AlgebraicNumber::is_real() const { return s_->real; }
double AlgebraicNumber::approx_re() const { return box().mid_re().to_double(); }
double AlgebraicNumber::approx_im() const { return box().mid_im().to_double(); }

// ---- isolation ---------------------------------------------------------------

namespace {

/// Certified boxes for all roots of an irreducible primitive integer polynomial
/// of degree >= 2.
std::vector<AlgebraicNumber> isolate_irreducible(const QPoly& f)
{
    const int n = f.degree();
    const QPoly df = derivative(f);
    for (long bits = 96 + coeff_bits(f); bits <= kMaxBits; bits *= 2) {
        auto z = aberth(f, bits);
        std::vector<Rational> zr, zi;
        for (const auto& w : z) {
            zr.push_back(to_dyadic(w.re, bits));
            zi.push_back(to_dyadic(w.im, bits));
        }
        auto cf = float_coeffs(f, bits);
        std::vector<AlgebraicNumber> out;
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
            auto ks = static_cast<std::size_t>(k);
            Rational sep = Rational(-1);
            for (int j = 0; j < n; ++j) {
                if (j == k)
                    continue;
                auto js = static_cast<std::size_t>(j);
                Rational d = std::max(abs(zr[ks] - zr[js]), abs(zi[ks] - zi[js]));
                if (sep.sign() < 0 || d < sep)
                    sep = d;
            }
            auto [pv, dv] = eval_with_derivative(cf, z[ks]);
            Rational step = (pv / dv).abs().to_rational();
            Rational zabs = std::max(Rational(1), abs(zr[ks]) + abs(zi[ks]));
            Rational r = std::max(Rational(8 * n) * step, zabs * pow2(-(bits - 24)));
            r = round_up(r, 8);
            std::optional<Certified> cert;
            for (int attempt = 0; attempt < 3 && !cert; ++attempt, r = r * Rational(16)) {
                if (sep.sign() > 0 && r * Rational(3) >= sep)
                    break;
                bool real = abs(zi[ks]) <= r;
                cert = krawczyk(f, df, zr[ks], real ? Rational(0) : zi[ks], r);
                if (cert)
                    out.push_back(make_certified(f, cert->x, real));
            }
            ok = cert.has_value();
        }
        if (!ok)
            continue;
        for (std::size_t a = 0; a < out.size() && ok; ++a)
            for (std::size_t b = a + 1; b < out.size() && ok; ++b)
                ok = !overlaps(out[a].box(), out[b].box());
        if (ok)
            return out;
    }
    throw std::runtime_error("root isolation did not converge");
}

bool root_less(const AlgebraicNumber& a, const AlgebraicNumber& b)
{
    Box x = a.box(), y = b.box();
    if (x.mid_re() != y.mid_re())
        return x.mid_re() < y.mid_re();
    return x.mid_im() < y.mid_im();
}

} // namespace

std::vector<AlgebraicNumber> isolate_roots(const QPoly& p, const Rational& target_width)
{
    if (p.degree() < 1)
        throw std::invalid_argument("isolate_roots: polynomial of degree < 1");
    if (target_width.sign() <= 0)
        throw std::invalid_argument("isolate_roots: target width must be positive");
    std::vector<AlgebraicNumber> roots;
    for (const auto& [f, mult] : factor_rational_poly(p).factors) {
        (void)mult;
        if (f.degree() == 1) {
            roots.emplace_back(-f[0] / f[1]);
            continue;
        }
        for (auto& r : isolate_irreducible(normalize(f)))
            roots.push_back(std::move(r));
    }
    for (auto& r : roots)
        r.refine(target_width);
    // roots of different factors may still have overlapping boxes
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t a = 0; a < roots.size(); ++a)
            for (std::size_t b = a + 1; b < roots.size(); ++b)
                if (overlaps(roots[a].box(), roots[b].box())) {
                    roots[a].refine(roots[a].box().width() / Rational(4));
                    roots[b].refine(roots[b].box().width() / Rational(4));
                    changed = true;
                }
    }
    std::sort(roots.begin(), roots.end(), root_less);
    return roots;
}

AlgebraicNumber AlgebraicNumber::from_poly_box(const QPoly& p, const Box& hint)
{
    if (p.degree() < 1)
        throw std::invalid_argument("defining polynomial must have positive degree");
    Rational w = std::max(hint.width(), pow2(-20));
    for (int round = 0; round < 40; ++round, w = w / Rational(8)) {
        auto roots = isolate_roots(p, w);
        int inside = 0, unsure = 0;
        const AlgebraicNumber* hit = nullptr;
        for (const auto& r : roots) {
            Box b = r.box();
            if (r.is_real())
                b = Box(b.re(), Interval(0));
            if (hint.contains(b)) {
                ++inside;
                hit = &r;
            } else if (overlaps(hint, b)) {
                ++unsure;
            }
        }
        if (inside > 1 || (inside == 0 && unsure == 0))
            break;
        if (inside == 1 && unsure == 0)
            return *hit;
    }
    throw std::invalid_argument("box does not isolate exactly one root of the polynomial");
}

// ---- arithmetic --------------------------------------------------------------

namespace {

QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys)
{
    // Newton divided differences
    const std::size_t n = xs.size();
    std::vector<Rational> d = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            d[i] = (d[i] - d[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j)
                break;
        }
    QPoly r = QPoly::constant(d[n - 1]);
    for (std::size_t k = n - 1; k-- > 0;)
        r = r * QPoly{-xs[k], Rational(1)} + QPoly::constant(d[k]);
    return r;
}

QPoly strip_zero_root(QPoly p)
{
    while (p.degree() > 0 && p[0].is_zero())
        p = divrem(p, QPoly::x()).first;
    return p;
}

/// Polynomial vanishing at every op(alpha, beta) over roots of pa, pb.
QPoly composed_poly(const QPoly& pa, const QPoly& pb, AlgOp op)
{
    const int n = pa.degree() * pb.degree();
    std::vector<Rational> xs, ys;
    for (int k = 0; k <= n; ++k) {
        Rational x(k + 1);
        QPoly q;
        switch (op) {
        case AlgOp::add: // pb(x - Y)
            q = compose(pb, QPoly{x, Rational(-1)});
            break;
        case AlgOp::sub: // pb(Y - x)
            q = compose(pb, QPoly{-x, Rational(1)});
            break;
        case AlgOp::mul: { // Y^db pb(x / Y)
            const int db = pb.degree();
            std::vector<Rational> v(static_cast<std::size_t>(db) + 1, Rational(0));
            Rational xp(1);
            for (int i = 0; i <= db; ++i) {
                v[static_cast<std::size_t>(db - i)] = pb[i] * xp;
                xp = xp * x;
            }
            q = QPoly(std::move(v));
            break;
        }
        case AlgOp::div:
            throw std::logic_error("composed_poly: division is reduced to multiplication");
        }
        xs.push_back(x);
        ys.push_back(resultant(pa, q));
    }
    return interpolate(xs, ys);
}

Box box_op(const Box& a, const Box& b, AlgOp op)
{
    switch (op) {
    case AlgOp::add:
        return a + b;
    case AlgOp::sub:
        return a - b;
    case AlgOp::mul:
        return a * b;
    case AlgOp::div:
        return a / b;
    }
    return a;
}

} // namespace

AlgebraicNumber select_root(const QPoly& f, const std::function<Box(const Rational&)>& enclosure)
{
    Rational w(1, 1 << 10);
    auto roots = isolate_roots(f, w);
    if (roots.size() == 1)
        return roots.front();
    for (int round = 0; round < 200; ++round) {
        Box e = enclosure(w);
        int count = 0;
        const AlgebraicNumber* hit = nullptr;
        for (const auto& c : roots) {
            Box cb = c.box();
            if (overlaps(cb, e)) {
                ++count;
                hit = &c;
            }
        }
        if (count == 1)
            return *hit;
        if (count == 0)
            throw std::logic_error("select_root: no root meets the enclosure");
        w = w / Rational(4);
        for (const auto& c : roots)
            if (overlaps(c.box(), e))
                c.refine(w);
    }
    throw std::runtime_error("select_root: could not separate candidate roots");
}

namespace {

AlgebraicNumber identify(const QPoly& r, const AlgebraicNumber& a, const AlgebraicNumber& b, AlgOp op)
{
    return select_root(r, [&](const Rational& w) {
        a.refine(w);
        b.refine(w);
        return box_op(a.box(), b.box(), op);
    });
}

AlgebraicNumber affine(const AlgebraicNumber& a, const Rational& scale, const Rational& shift)
{
    // value scale * a + shift, scale != 0
    if (auto q = a.rational_value())
        return AlgebraicNumber(scale * *q + shift);
    // p((X - shift) / scale)
    QPoly p = compose(a.poly(), QPoly{-shift / scale, Rational(1) / scale});
    Box b = Box(scale) * a.box() + Box(shift);
    return make_certified(normalize(p), b, a.is_real());
}

} // namespace

AlgebraicNumber alg_arith(const AlgebraicNumber& a, const AlgebraicNumber& b, AlgOp op)
{
    auto qa = a.rational_value(), qb = b.rational_value();
    if (op == AlgOp::div && b.is_zero())
        throw DivisionByZero();
    if (qa && qb) {
        switch (op) {
        case AlgOp::add:
            return AlgebraicNumber(*qa + *qb);
        case AlgOp::sub:
            return AlgebraicNumber(*qa - *qb);
        case AlgOp::mul:
            return AlgebraicNumber(*qa * *qb);
        case AlgOp::div:
            return AlgebraicNumber(*qa / *qb);
        }
    }
    if (qb) {
        switch (op) {
        case AlgOp::add:
            return affine(a, Rational(1), *qb);
        case AlgOp::sub:
            return affine(a, Rational(1), -*qb);
        case AlgOp::mul:
            return qb->is_zero() ? AlgebraicNumber(0) : affine(a, *qb, Rational(0));
        case AlgOp::div:
            return affine(a, inverse(*qb), Rational(0));
        }
    }
    if (qa) {
        switch (op) {
        case AlgOp::add:
            return affine(b, Rational(1), *qa);
        case AlgOp::sub:
            return affine(b, Rational(-1), *qa);
        case AlgOp::mul:
            return qa->is_zero() ? AlgebraicNumber(0) : affine(b, *qa, Rational(0));
        case AlgOp::div:
            break;
        }
    }
    if (op == AlgOp::div && a.is_zero())
        return AlgebraicNumber(0);
    QPoly pa = strip_zero_root(a.poly());
    QPoly pb = strip_zero_root(b.poly());
    QPoly r;
    if (op == AlgOp::div) {
        // roots of the reversed polynomial are the reciprocals
        std::vector<Rational> rev(pb.coeffs().rbegin(), pb.coeffs().rend());
        r = composed_poly(pa, QPoly(std::move(rev)), AlgOp::mul);
    } else {
        r = composed_poly(pa, pb, op);
    }
    if (r.is_zero())
        throw std::logic_error("alg_arith: vanishing composed polynomial");
    return identify(r, a, b, op);
}

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_arith(a, b, AlgOp::add); }
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_arith(a, b, AlgOp::sub); }
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_arith(a, b, AlgOp::mul); }
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_arith(a, b, AlgOp::div); }
AlgebraicNumber operator-(const AlgebraicNumber& a) { return affine(a, Rational(-1), Rational(0)); }

AlgebraicNumber conj(const AlgebraicNumber& a)
{
    if (a.is_real())
        return a;
    return make_certified(a.poly(), conj(a.box()), false);
}

AlgebraicNumber pow(const AlgebraicNumber& a, int e)
{
    if (e < 0)
        return AlgebraicNumber(1) / pow(a, -e);
    AlgebraicNumber r(1), b = a;
    while (e > 0) {
        if (e & 1)
            r = r * b;
        e >>= 1;
        if (e > 0)
            b = b * b;
    }
    return r;
}

bool alg_equals(const AlgebraicNumber& a, const AlgebraicNumber& b)
{
    if (!(a.poly() == b.poly()))
        return false;
    if (a.is_rational())
        return *a.rational_value() == *b.rational_value();
    for (int round = 0; round < 400; ++round) {
        Box x = a.box(), y = b.box();
        if (!overlaps(x, y))
            return false;
        // each box holds exactly one root of the common minimal polynomial
        if (x.contains(y) || y.contains(x))
            return true;
        if (x.width() >= y.width())
            a.refine(y.width() / Rational(8));
        else
            b.refine(x.width() / Rational(8));
    }
    throw std::runtime_error("alg_equals: refinement budget exhausted");
}

bool is_root_of(const AlgebraicNumber& a, const QPoly& f)
{
    if (f.is_zero())
        return true;
    return rem(f, a.poly()).is_zero();
}

QPoly minimal_polynomial(const AlgebraicNumber& a) { return monic(a.poly()); }
int degree(const AlgebraicNumber& a) { return a.poly().degree(); }

AlgebraicNumber imag_unit()
{
    return AlgebraicNumber::from_poly_box(qpoly({1, 0, 1}), Box(Interval(Rational(-1, 2), Rational(1, 2)),
                                                               Interval(Rational(1, 2), Rational(3, 2))));
}

AlgebraicNumber sqrt_rational(const Rational& q)
{
    if (q.is_zero())
        return AlgebraicNumber(0);
    Rational a = abs(q);
    Integer n = isqrt(a.num()), d = isqrt(a.den());
    if (n * n == a.num() && d * d == a.den()) {
        Rational s(n, d);
        if (q.sign() > 0)
            return AlgebraicNumber(s);
        return AlgebraicNumber(s) * imag_unit();
    }
    if (q.sign() > 0)
        return real_root(q, 2);
    for (const auto& r : isolate_roots(QPoly{a, Rational(0), Rational(1)}, Rational(1, 1 << 12)))
        if (r.box().im().positive())
            return r;
    throw std::logic_error("sqrt_rational: no root in the upper half plane");
}

AlgebraicNumber real_root(const Rational& q, int n)
{
    if (q.sign() <= 0 || n < 1)
        throw std::invalid_argument("real_root: needs q > 0 and n >= 1");
    std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
    c[0] = -q;
    c.back() = Rational(1);
    QPoly p(std::move(c));
    for (const auto& r : isolate_roots(p, Rational(1, 1 << 12)))
        if (r.is_real() && r.box().re().lo().sign() > 0)
            return r;
    throw std::logic_error("real_root: no positive real root found");
}

Tri in_upper_half_plane(const AlgebraicNumber& a, int budget_bits)
{
    if (a.is_real())
        return Tri::no;
    Box b = a.box();
    for (int bits = 0; bits <= budget_bits; bits += 16) {
        if (b.im().positive())
            return Tri::yes;
        if (b.im().negative())
            return Tri::no;
        b = a.refine(b.width() / Rational(65536));
    }
    return Tri::undecided;
}

} // namespace modtower
