#include "modtower/moebius.hpp"

#include <algorithm>

namespace modtower {

// ---- Moebius ------------------------------------------------------------------

Moebius::Moebius(AlgebraicNumber a, AlgebraicNumber b, AlgebraicNumber c, AlgebraicNumber d)
    : m_{std::move(a), std::move(b), std::move(c), std::move(d)}
{
    if (det().is_zero())
        throw std::invalid_argument("singular Moebius matrix");
}

AlgebraicNumber Moebius::det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

bool Moebius::is_rational() const
{
    return std::all_of(m_.begin(), m_.end(), [](const AlgebraicNumber& x) { return x.is_rational(); });
}

std::array<Rational, 4> Moebius::rational_entries() const
{
    if (!is_rational())
        throw std::invalid_argument("Moebius matrix has irrational entries");
    return {*m_[0].rational_value(), *m_[1].rational_value(), *m_[2].rational_value(), *m_[3].rational_value()};
}

bool Moebius::is_scalar() const { return m_[1].is_zero() && m_[2].is_zero() && alg_equals(m_[0], m_[3]); }

Moebius Moebius::inverse() const { return Moebius(m_[3], -m_[1], -m_[2], m_[0]); }

Moebius operator*(const Moebius& g, const Moebius& h)
{
    return Moebius(g.a() * h.a() + g.b() * h.c(), g.a() * h.b() + g.b() * h.d(), g.c() * h.a() + g.d() * h.c(),
                   g.c() * h.b() + g.d() * h.d());
}

// ---- action ---------------------------------------------------------------------

namespace {

/// (a x + b) / (c x + d) for rational a..d by substitution in the defining
/// polynomial: x = (d y - b) / (a - c y).
AlgebraicNumber act_rational(const std::array<Rational, 4>& m, const AlgebraicNumber& x)
{
    const auto& [a, b, c, d] = m;
    if (c.is_zero())
        return (AlgebraicNumber(a) * x + AlgebraicNumber(b)) / AlgebraicNumber(d);
    if (auto q = x.rational_value())
        return AlgebraicNumber((a * *q + b) / (c * *q + d));
    const QPoly& p = x.poly();
    const int n = p.degree();
    const QPoly num{-b, d}, den{a, -c};
    QPoly out;
    for (int k = 0; k <= n; ++k)
        out += p[k] * (pow(num, k) * pow(den, n - k));
    return select_root(out, [&](const Rational& w) {
        x.refine(w);
        Box z = x.box();
        return (Box(a) * z + Box(b)) / (Box(c) * z + Box(d));
    });
}

} // namespace

ProjPoint act(const Moebius& g, const ProjPoint& x)
{
    if (!x) {
        if (g.c().is_zero())
            return std::nullopt;
        return g.a() / g.c();
    }
    if (g.is_rational()) {
        auto m = g.rational_entries();
        if ((AlgebraicNumber(m[2]) * *x + AlgebraicNumber(m[3])).is_zero())
            return std::nullopt;
        return act_rational(m, *x);
    }
    // work in one number field holding the entries and x
    PresentedField k = primitive_element({g.a(), g.b(), g.c(), g.d(), *x});
    const auto& e = k.generator_coords;
    NFElem den = e[2] * e[4] + e[3];
    if (is_zero(den))
        return std::nullopt;
    return k.field.to_algebraic((e[0] * e[4] + e[1]) / den);
}

bool same_point(const ProjPoint& x, const ProjPoint& y)
{
    if (!x || !y)
        return !x && !y;
    return alg_equals(*x, *y);
}

bool same_transformation(const Moebius& g, const Moebius& h)
{
    const auto& u = g.entries();
    const auto& v = h.entries();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (!alg_equals(u[i] * v[j], u[j] * v[i]))
                return false;
    return true;
}

// ---- primitive forms ----------------------------------------------------------------

namespace {

std::array<Integer, 4> primitive_integer_vector(const std::array<Rational, 4>& r)
{
    Integer l = 1;
    for (const auto& q : r)
        l = lcm(l, q.den());
    std::array<Integer, 4> v;
    Integer g = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v[i] = r[i].num() * (l / r[i].den());
        g = gcd(g, v[i]);
    }
    if (g != 0)
        for (auto& x : v)
            x /= g;
    return v;
}

} // namespace

PrimitiveIntegerForm primitive_form(const Moebius& g)
{
    auto v = primitive_integer_vector(g.rational_entries());
    return {v, v[0] * v[3] - v[1] * v[2]};
}

// ---- orbit equivalence ------------------------------------------------------------

namespace {

using IVec = std::array<Integer, 4>;

Integer idet(const IVec& v) { return v[0] * v[3] - v[1] * v[2]; }
/// 2 B(u, v) for the polarization of det.
Integer ipolar2(const IVec& u, const IVec& v) { return u[0] * v[3] + v[0] * u[3] - u[1] * v[2] - v[1] * u[2]; }

IVec combine(const IVec& u, const Integer& s, const IVec& v, const Integer& t)
{
    IVec r;
    for (std::size_t i = 0; i < 4; ++i)
        r[i] = s * u[i] + t * v[i];
    return r;
}

Integer smallest_prime_factor(const Integer& n)
{
    if (n % 2 == 0)
        return 2;
    for (Integer p = 3; p * p <= n; p += 2)
        if (n % p == 0)
            return p;
    return n;
}

Integer mod(const Integer& a, const Integer& p)
{
    Integer r = a % p;
    if (r < 0)
        r += p;
    return r;
}

/// Replace (u, v) by a basis of (Qu + Qv) cap Z^4.
void saturate(IVec& u, IVec& v)
{
    for (;;) {
        Integer d = 0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                d = gcd(d, u[i] * v[j] - u[j] * v[i]);
        d = abs(Rational(d)).num();
        if (d <= 1)
            return;
        const Integer p = smallest_prime_factor(d);
        if (std::all_of(v.begin(), v.end(), [&](const Integer& x) { return mod(x, p) == 0; })) {
            for (auto& x : v)
                x /= p;
            continue;
        }
        // u + t v = 0 mod p for some t
        std::size_t k = 0;
        while (mod(v[k], p) == 0)
            ++k;
        Integer inv;
        Integer vk = mod(v[k], p);
        mpz_invert(inv.get_mpz_t(), vk.get_mpz_t(), p.get_mpz_t());
        Integer t = mod(-u[k] * inv, p);
        IVec w = combine(u, 1, v, t);
        if (!std::all_of(w.begin(), w.end(), [&](const Integer& x) { return mod(x, p) == 0; }))
            throw std::logic_error("saturate: inconsistent minors");
        for (auto& x : w)
            x /= p;
        u = w;
    }
}

Integer round_div(const Integer& a, const Integer& b)
{
    // nearest integer to a / b, b > 0
    return floor(Rational(2 * a + b, 2 * b));
}

/// Lagrange-Gauss reduction for a definite det form; returns the shortest vector.
IVec reduce_definite(IVec u, IVec v, int sign)
{
    auto q = [&](const IVec& x) -> Integer { return sign * idet(x); };
    for (int guard = 0; guard < 10000; ++guard) {
        if (q(u) > q(v))
            std::swap(u, v);
        Integer two_b = sign * ipolar2(u, v);
        Integer r = round_div(two_b, 2 * q(u));
        if (r == 0)
            break;
        v = combine(v, 1, u, -r);
        if (q(v) >= q(u))
            break;
    }
    return q(u) <= q(v) ? u : v;
}

IVec normalize_sign(IVec v)
{
    for (const auto& x : v) {
        if (x == 0)
            continue;
        if (x < 0)
            for (auto& y : v)
                y = -y;
        break;
    }
    return v;
}

Moebius from_integers(const IVec& v)
{
    return Moebius(AlgebraicNumber(Rational(v[0])), AlgebraicNumber(Rational(v[1])), AlgebraicNumber(Rational(v[2])),
                   AlgebraicNumber(Rational(v[3])));
}

std::optional<Moebius> orbit_over_q(const std::vector<std::array<Rational, 4>>& basis)
{
    std::vector<IVec> iv;
    for (const auto& b : basis)
        iv.push_back(primitive_integer_vector(b));

    if (iv.size() == 2) {
        IVec u = iv[0], v = iv[1];
        saturate(u, v);
        Integer qu = idet(u), qv = idet(v), b2 = ipolar2(u, v);
        // definite iff 4 Q(u) Q(v) - (2B)^2 > 0
        if (4 * qu * qv - b2 * b2 > 0) {
            int sign = qu > 0 ? 1 : -1;
            return from_integers(normalize_sign(reduce_definite(u, v, sign)));
        }
        iv = {u, v};
    }
    for (std::size_t i = 0; i < iv.size(); ++i)
        if (idet(iv[i]) != 0)
            return from_integers(normalize_sign(iv[i]));
    for (std::size_t i = 0; i < iv.size(); ++i)
        for (std::size_t j = i + 1; j < iv.size(); ++j) {
            IVec s = combine(iv[i], 1, iv[j], 1);
            if (idet(s) != 0)
                return from_integers(normalize_sign(primitive_integer_vector(
                    {Rational(s[0]), Rational(s[1]), Rational(s[2]), Rational(s[3])})));
        }
    return std::nullopt;
}

} // namespace

std::optional<Moebius> orbit_equiv(const AlgebraicNumber& x, const AlgebraicNumber& y, const PresentedField& f)
{
    if (alg_equals(x, y))
        return Moebius::identity();
    Workspace w(f, std::vector<AlgebraicNumber>{x, y});
    const NumberField& k = w.field();
    const int n = k.degree();
    const auto& fb = w.base_basis();
    const std::size_t m = fb.size();
    const NFElem& xe = w.element(0);
    const NFElem& ye = w.element(1);
    const NFElem xy = xe * ye;
    // c xy - a x + d y - b = 0, unknown coordinates ordered a_j, b_j, c_j, d_j
    const std::array<NFElem, 4> coef{-xe, k.lift(Rational(-1)), xy, ye};
    Mat<Rational> mat(n, static_cast<Eigen::Index>(4 * m));
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t j = 0; j < m; ++j) {
            auto c = (coef[u] * fb[j]).coords();
            for (int r = 0; r < n; ++r)
                mat(r, static_cast<Eigen::Index>(u * m + j)) = c[static_cast<std::size_t>(r)];
        }
    auto ns = nullspace(mat);
    if (ns.empty())
        return std::nullopt;

    if (m == 1) {
        std::vector<std::array<Rational, 4>> basis;
        for (const auto& v : ns)
            basis.push_back({v(0), v(1), v(2), v(3)});
        return orbit_over_q(basis);
    }

    auto quad = [&](const Vec<Rational>& v) {
        std::array<NFElem, 4> e;
        for (std::size_t u = 0; u < 4; ++u) {
            e[u] = k.zero();
            for (std::size_t j = 0; j < m; ++j)
                e[u] = e[u] + NFElem(v(static_cast<Eigen::Index>(u * m + j))) * fb[j];
        }
        return e;
    };
    auto build = [&](const std::array<NFElem, 4>& e) -> std::optional<Moebius> {
        if ((e[0] * e[3] - e[1] * e[2]).is_zero())
            return std::nullopt;
        return Moebius(w.value(e[0]), w.value(e[1]), w.value(e[2]), w.value(e[3]));
    };
    std::vector<std::array<NFElem, 4>> es;
    for (const auto& v : ns)
        es.push_back(quad(v));
    for (const auto& e : es)
        if (auto g = build(e))
            return g;
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            std::array<NFElem, 4> s;
            for (std::size_t u = 0; u < 4; ++u)
                s[u] = es[i][u] + es[j][u];
            if (auto g = build(s))
                return g;
        }
    return std::nullopt;
}

// ---- special points and orbit counting ----------------------------------------------

SpecialResult is_special(const AlgebraicNumber& x)
{
    if (in_upper_half_plane(x) != Tri::yes)
        throw NotInUpperHalfPlane();
    if (degree(x) != 2)
        return {false, std::nullopt};
    ZPoly p = primitive_integer(x.poly());
    Rational a(p[2]), b(p[1]), c(p[0]);
    return {true, Moebius(AlgebraicNumber(-b), AlgebraicNumber(-c), AlgebraicNumber(a), AlgebraicNumber(0))};
}

namespace {

std::vector<AlgebraicNumber> orbit_representatives(const std::vector<AlgebraicNumber>& a, const PresentedField& f)
{
    std::vector<AlgebraicNumber> reps;
    for (const auto& x : a) {
        bool found = false;
        for (const auto& r : reps)
            if (orbit_equiv(r, x, f)) {
                found = true;
                break;
            }
        if (!found)
            reps.push_back(x);
    }
    return reps;
}

} // namespace

int dim_G(const std::vector<AlgebraicNumber>& a, const std::vector<AlgebraicNumber>& b, const PresentedField& f)
{
    int count = 0;
    for (const auto& r : orbit_representatives(a, f)) {
        bool excluded = false;
        for (const auto& y : b)
            if (orbit_equiv(r, y, f)) {
                excluded = true;
                break;
            }
        count += !excluded;
    }
    return count;
}

int dim_G_sigma(const std::vector<AlgebraicNumber>& a)
{
    int count = 0;
    for (const auto& r : orbit_representatives(a, rationals()))
        count += !is_special(r).special;
    return count;
}

// ---- descent --------------------------------------------------------------------

Descent descend(const Moebius& g, const AlgebraicNumber& l1, const AlgebraicNumber& l2, const PresentedField& e,
                const PresentedField& l)
{
    if (!same_point(act(g, l1), l2))
        throw PreconditionError("descend: g does not map l1 to l2");
    if (!express_in_basis(l.field, l1) || !express_in_basis(l.field, l2))
        throw PreconditionError("descend: l1, l2 must lie in L");
    std::vector<AlgebraicNumber> f_gens;
    for (const auto& x : g.entries())
        if (!x.is_rational())
            f_gens.push_back(x);
    if (std::holds_alternative<Witness>(linearly_disjoint(e, f_gens, l.generators)))
        throw PreconditionError("descend: F and L are not linearly disjoint over E");

    // (1, l1, l2, l1 l2) carry the coefficients (-beta, -alpha, delta, gamma)
    PresentedField kl = primitive_element({l1, l2});
    AlgebraicNumber l12 = kl.field.to_algebraic(kl.generator_coords[0] * kl.generator_coords[1]);
    auto dep = find_E_dependence(e, {AlgebraicNumber(1), l1, l2, l12});
    if (!dep)
        throw std::logic_error("descend: no E-dependence although g l1 = l2 over a disjoint F");
    const auto& c = dep->coefficients;
    AlgebraicNumber alpha = -c[1], beta = -c[0], gamma = c[3], delta = c[2];

    DescentCase which = DescentCase::d;
    if ((alpha * l1 + beta).is_zero())
        which = DescentCase::a;
    else if ((gamma * l1 + delta).is_zero())
        which = DescentCase::b;
    else if ((alpha * delta - beta * gamma).is_zero())
        which = DescentCase::c;

    std::optional<Moebius> h;
    if (which == DescentCase::d) {
        h = Moebius(alpha, beta, gamma, delta);
    } else {
        // in cases (a)-(c) both points lie in E
        if (!express_in_basis(e.field, l1) || !express_in_basis(e.field, l2))
            throw std::logic_error("descend: degenerate case with points outside E");
        if (!l1.is_zero() && !l2.is_zero())
            h = Moebius(l2 / l1, AlgebraicNumber(0), AlgebraicNumber(0), AlgebraicNumber(1));
        else
            h = Moebius(AlgebraicNumber(1), l2 - l1, AlgebraicNumber(0), AlgebraicNumber(1));
    }
    if (!same_point(act(*h, l1), l2))
        throw std::logic_error("descend: constructed h does not map l1 to l2");
    return {*h, which, *dep};
}

} // namespace modtower
