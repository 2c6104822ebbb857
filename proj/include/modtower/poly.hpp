#ifndef MODTOWER_POLY_HPP
#define MODTOWER_POLY_HPP

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "modtower/rational.hpp"

namespace modtower {

namespace detail {
template <class S>
bool scalar_is_zero(const S& s)
{
    return is_zero(s);
}
} // namespace detail

/// Dense univariate polynomial over a scalar type S, ascending coefficients.
///
/// S must provide S(int), +, -, *, unary -, == and a free `is_zero(S)`.
/// Division-based algorithms (divrem, gcd, monic) additionally need S / S and
/// are only meaningful when S is a field.  Scalars that carry a context (a
/// modulus, a number field) are expected to treat a context-free S(int) as a
/// constant that adopts the context of the other operand.
///
/// Invariant: the leading coefficient is nonzero; the zero polynomial has no
/// coefficients.
template <class S>
class Poly {
public:
    using Scalar = S;

    Poly() = default;
    Poly(std::initializer_list<S> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const S& s) { return Poly(std::vector<S>{s}); }
    /// s * X^k
    static Poly monomial(const S& s, int k)
    {
        std::vector<S> v(static_cast<std::size_t>(k) + 1, S(0));
        v.back() = s;
        return Poly(std::move(v));
    }
    static Poly x() { return monomial(S(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<S>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }

    S operator[](int i) const
    {
        if (i < 0 || i >= static_cast<int>(c_.size()))
            return S(0);
        return c_[static_cast<std::size_t>(i)];
    }
    const S& lead() const
    {
        if (c_.empty())
            throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    Poly& operator+=(const Poly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), S(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] = c_[i] + o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), S(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] = c_[i] - o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a)
    {
        std::vector<S> v;
        v.reserve(a.c_.size());
        for (const auto& s : a.c_)
            v.push_back(-s);
        return Poly(std::move(v));
    }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<S> v(a.c_.size() + b.c_.size() - 1, S(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (detail::scalar_is_zero(a.c_[i]))
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(v));
    }
    friend Poly operator*(const S& s, const Poly& p)
    {
        std::vector<S> v;
        v.reserve(p.c_.size());
        for (const auto& c : p.c_)
            v.push_back(s * c);
        return Poly(std::move(v));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b)
    {
        if (a.c_.size() != b.c_.size())
            return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i]))
                return false;
        return true;
    }

private:
    void trim()
    {
        while (!c_.empty() && detail::scalar_is_zero(c_.back()))
            c_.pop_back();
    }

    std::vector<S> c_;
};

template <class S>
bool is_zero(const Poly<S>& p)
{
    return p.is_zero();
}

/// Horner evaluation; `lift` converts a coefficient into the value domain.
template <class S, class T, class Lift>
T horner(const Poly<S>& p, const T& x, Lift lift)
{
    if (p.is_zero())
        return lift(S(0));
    const auto& c = p.coeffs();
    T acc = lift(c.back());
    for (int i = p.degree() - 1; i >= 0; --i)
        acc = acc * x + lift(c[static_cast<std::size_t>(i)]);
    return acc;
}

template <class S>
S eval(const Poly<S>& p, const S& x)
{
    return horner(p, x, [](const S& s) { return s; });
}

template <class S>
Poly<S> derivative(const Poly<S>& p)
{
    if (p.degree() < 1)
        return {};
    std::vector<S> v;
    for (int i = 1; i <= p.degree(); ++i)
        v.push_back(S(i) * p[i]);
    return Poly<S>(std::move(v));
}

/// p(q(X))
template <class S>
Poly<S> compose(const Poly<S>& p, const Poly<S>& q)
{
    return horner(p, q, [](const S& s) { return Poly<S>::constant(s); });
}

template <class S>
Poly<S> pow(const Poly<S>& p, int e)
{
    Poly<S> r = Poly<S>::constant(S(1)), b = p;
    while (e > 0) {
        if (e & 1)
            r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

/// Euclidean division over a field: a = q*b + r with deg r < deg b.
template <class S>
std::pair<Poly<S>, Poly<S>> divrem(const Poly<S>& a, const Poly<S>& b)
{
    if (b.is_zero())
        throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree())
        return {Poly<S>{}, a};
    std::vector<S> r = a.coeffs();
    std::vector<S> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), S(0));
    const S inv_lead = S(1) / b.lead();
    const int db = b.degree();
    for (int i = a.degree(); i >= db; --i) {
        S coef = r[static_cast<std::size_t>(i)] * inv_lead;
        if (detail::scalar_is_zero(coef))
            continue;
        q[static_cast<std::size_t>(i - db)] = coef;
        for (int j = 0; j <= db; ++j)
            r[static_cast<std::size_t>(i - db + j)] = r[static_cast<std::size_t>(i - db + j)] - coef * b[j];
    }
    r.resize(static_cast<std::size_t>(db));
    return {Poly<S>(std::move(q)), Poly<S>(std::move(r))};
}

template <class S>
Poly<S> rem(const Poly<S>& a, const Poly<S>& b)
{
    return divrem(a, b).second;
}

template <class S>
Poly<S> monic(const Poly<S>& p)
{
    if (p.is_zero())
        return p;
    return (S(1) / p.lead()) * p;
}

/// Monic gcd over a field; gcd(0, 0) = 0.
template <class S>
Poly<S> gcd(Poly<S> a, Poly<S> b)
{
    while (!b.is_zero()) {
        Poly<S> r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
template <class S>
std::tuple<Poly<S>, Poly<S>, Poly<S>> xgcd(Poly<S> a, Poly<S> b)
{
    Poly<S> s0 = Poly<S>::constant(S(1)), s1, t0, t1 = Poly<S>::constant(S(1));
    while (!b.is_zero()) {
        auto [q, r] = divrem(a, b);
        a = std::move(b);
        b = std::move(r);
        Poly<S> s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.is_zero())
        return {a, s0, t0};
    S inv = S(1) / a.lead();
    return {inv * a, inv * s0, inv * t0};
}

} // namespace modtower

#endif
