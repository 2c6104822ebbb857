#include "modtower/numberfield.hpp"

#include <stdexcept>

namespace modtower {

struct NumberField::Data {
    AlgebraicNumber theta;
    QPoly modulus;
    int n = 1;
};

namespace {

using FieldPtr = std::shared_ptr<const NumberField::Data>;

FieldPtr common(const FieldPtr& a, const FieldPtr& b)
{
    if (a && b && a != b)
        throw std::logic_error("number field elements from different fields");
    return a ? a : b;
}

std::vector<Rational> trimmed(std::vector<Rational> v)
{
    while (!v.empty() && v.back().is_zero())
        v.pop_back();
    return v;
}

} // namespace

// ---- NumberField --------------------------------------------------------------

NumberField::NumberField() : NumberField(AlgebraicNumber(0)) {}

NumberField::NumberField(const AlgebraicNumber& theta)
{
    auto d = std::make_shared<Data>();
    d->theta = theta;
    d->modulus = minimal_polynomial(theta);
    d->n = d->modulus.degree();
    d_ = std::move(d);
}

int NumberField::degree() const { return d_->n; }
const AlgebraicNumber& NumberField::theta() const { return d_->theta; }
const QPoly& NumberField::modulus() const { return d_->modulus; }

NFElem NumberField::from_coords(std::vector<Rational> c) const
{
    if (static_cast<int>(c.size()) > d_->n)
        return from_poly(QPoly(std::move(c)));
    NFElem e;
    e.c_ = trimmed(std::move(c));
    e.f_ = d_;
    return e;
}

NFElem NumberField::from_poly(const QPoly& p) const
{
    NFElem e;
    e.c_ = rem(p, d_->modulus).coeffs();
    e.f_ = d_;
    return e;
}

NFElem NumberField::zero() const { return from_coords({}); }
NFElem NumberField::one() const { return from_coords({Rational(1)}); }
NFElem NumberField::lift(const Rational& q) const { return from_coords({q}); }
NFElem NumberField::gen() const
{
    if (d_->n == 1)
        return lift(*d_->theta.rational_value());
    return from_coords({Rational(0), Rational(1)});
}

Box NumberField::enclose(const NFElem& e, const Rational& width) const
{
    d_->theta.refine(width);
    return eval_box(e.as_poly(), d_->theta.box());
}

AlgebraicNumber NumberField::to_algebraic(const NFElem& e) const
{
    if (e.is_rational())
        return AlgebraicNumber(e.c_.empty() ? Rational(0) : e.c_[0]);
    // the characteristic polynomial of multiplication by e is a power of its
    // minimal polynomial
    QPoly m = squarefree_part(charpoly(multiplication_matrix(*this, e)));
    return select_root(m, [&](const Rational& w) { return enclose(e, w); });
}

Mat<Rational> multiplication_matrix(const NumberField& k, const NFElem& e)
{
    const int n = k.degree();
    Mat<Rational> m(n, n);
    NFElem basis = k.one();
    const NFElem g = k.gen();
    for (int j = 0; j < n; ++j) {
        auto c = (e * basis).coords();
        for (int i = 0; i < n; ++i)
            m(i, j) = i < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(i)] : Rational(0);
        basis = basis * g;
    }
    return m;
}

// ---- NFElem ------------------------------------------------------------------

std::vector<Rational> NFElem::coords() const
{
    std::vector<Rational> c = c_;
    std::size_t n = f_ ? static_cast<std::size_t>(f_->n) : std::max<std::size_t>(1, c.size());
    c.resize(n, Rational(0));
    return c;
}

bool NFElem::is_zero() const
{
    for (const auto& q : c_)
        if (!q.is_zero())
            return false;
    return true;
}

bool NFElem::is_rational() const
{
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero())
            return false;
    return true;
}

NFElem operator+(const NFElem& a, const NFElem& b)
{
    NFElem r;
    r.f_ = common(a.f_, b.f_);
    r.c_ = (QPoly(a.c_) + QPoly(b.c_)).coeffs();
    return r;
}

NFElem operator-(const NFElem& a, const NFElem& b)
{
    NFElem r;
    r.f_ = common(a.f_, b.f_);
    r.c_ = (QPoly(a.c_) - QPoly(b.c_)).coeffs();
    return r;
}

NFElem operator-(const NFElem& a)
{
    NFElem r;
    r.f_ = a.f_;
    r.c_ = (-QPoly(a.c_)).coeffs();
    return r;
}

NFElem operator*(const NFElem& a, const NFElem& b)
{
    NFElem r;
    r.f_ = common(a.f_, b.f_);
    QPoly p = QPoly(a.c_) * QPoly(b.c_);
    if (r.f_ && p.degree() >= r.f_->n)
        p = rem(p, r.f_->modulus);
    r.c_ = p.coeffs();
    return r;
}

NFElem inverse(const NFElem& e)
{
    if (e.is_zero())
        throw std::domain_error("number field division by zero");
    NFElem r;
    r.f_ = e.f_;
    if (e.is_rational()) {
        r.c_ = {inverse(e.c_[0])};
        return r;
    }
    auto [g, s, t] = xgcd(QPoly(e.c_), e.f_->modulus);
    (void)t;
    if (g.degree() != 0)
        throw std::logic_error("number field modulus is not irreducible");
    r.c_ = rem((inverse(g[0])) * s, e.f_->modulus).coeffs();
    return r;
}

NFElem operator/(const NFElem& a, const NFElem& b) { return a * inverse(b); }

bool operator==(const NFElem& a, const NFElem& b)
{
    common(a.f_, b.f_);
    return trimmed(a.c_) == trimmed(b.c_);
}

// ---- adjunction and primitive elements ---------------------------------------

NFElem transport(const NFElem& e, const NFElem& theta_image)
{
    NFElem r = horner(e.as_poly(), theta_image, [](const Rational& q) { return NFElem(q); });
    return r + (theta_image - theta_image);
}

Adjoined adjoin(const NumberField& k, const AlgebraicNumber& g)
{
    if (auto q = g.rational_value())
        return {k, 0, k.gen(), k.lift(*q)};
    const QPoly fg = minimal_polynomial(g);
    for (long t = 1; t <= 256; ++t) {
        AlgebraicNumber delta = k.theta() + AlgebraicNumber(Rational(t)) * g;
        NumberField l(delta);
        const NFElem d = l.gen();
        using NPoly = Poly<NFElem>;
        auto lift = [&](const Rational& q) { return NPoly::constant(l.lift(q)); };
        NPoly p1 = horner(fg, NPoly::x(), lift);
        // theta = delta - t g, so g is a common root of fg(Y) and m(delta - t Y)
        NPoly lin{d, l.lift(Rational(-t))};
        NPoly p2 = horner(k.modulus(), lin, lift);
        NPoly gcd_poly = gcd(p1, p2);
        if (gcd_poly.degree() != 1)
            continue;
        NFElem g_in = -gcd_poly[0];
        NFElem theta_in = d - l.lift(Rational(t)) * g_in;
        return {l, t, theta_in, g_in};
    }
    throw std::runtime_error("adjoin: no primitive element found among small multipliers");
}

namespace {

std::vector<Rational> coords_in_old_basis(const NumberField& k, const Adjoined& adj)
{
    // columns: powers of the old generator inside the new field
    const int n = k.degree();
    Mat<Rational> b(n, n);
    NFElem pw = adj.field.one();
    for (int j = 0; j < n; ++j) {
        auto c = pw.coords();
        for (int i = 0; i < n; ++i)
            b(i, j) = c[static_cast<std::size_t>(i)];
        pw = pw * adj.old_theta;
    }
    Vec<Rational> rhs(n);
    auto c = adj.adjoined.coords();
    for (int i = 0; i < n; ++i)
        rhs(i) = c[static_cast<std::size_t>(i)];
    auto x = solve(b, rhs);
    if (!x)
        throw std::logic_error("coordinate change is singular");
    std::vector<Rational> out;
    for (int i = 0; i < n; ++i)
        out.push_back((*x)(i));
    return out;
}

} // namespace

std::optional<NFElem> to_element(const NumberField& k, const AlgebraicNumber& a)
{
    if (auto q = a.rational_value())
        return k.lift(*q);
    if (k.degree() % degree(a) != 0)
        return std::nullopt;
    Adjoined adj = adjoin(k, a);
    if (adj.field.degree() != k.degree())
        return std::nullopt;
    return k.from_coords(coords_in_old_basis(k, adj));
}

std::optional<std::vector<Rational>> express_in_basis(const NumberField& k, const AlgebraicNumber& a)
{
    auto e = to_element(k, a);
    if (!e)
        return std::nullopt;
    return e->coords();
}

PresentedField primitive_element(const std::vector<AlgebraicNumber>& gens)
{
    if (gens.empty())
        throw std::invalid_argument("primitive_element: no generators");
    PresentedField pf;
    pf.generators = gens;
    pf.field = NumberField(gens[0]);
    pf.combination.assign(gens.size(), 0);
    pf.combination[0] = 1;
    pf.generator_coords.push_back(pf.field.gen());
    for (std::size_t i = 1; i < gens.size(); ++i) {
        const auto& g = gens[i];
        if (auto q = g.rational_value()) {
            pf.generator_coords.push_back(pf.field.lift(*q));
            continue;
        }
        Adjoined adj = adjoin(pf.field, g);
        if (adj.field.degree() == pf.field.degree()) {
            pf.generator_coords.push_back(pf.field.from_coords(coords_in_old_basis(pf.field, adj)));
            continue;
        }
        for (auto& c : pf.generator_coords)
            c = transport(c, adj.old_theta);
        pf.generator_coords.push_back(adj.adjoined);
        pf.combination[i] = adj.t;
        pf.field = adj.field;
    }
    return pf;
}

} // namespace modtower
