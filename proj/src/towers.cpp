#include "modtower/towers.hpp"

#include <algorithm>
#include <stdexcept>

namespace modtower {

std::string to_string(Side s)
{
    switch (s) {
    case Side::J: return "J";
    case Side::K: return "K";
    case Side::E_numeric: return "E";
    case Side::L_numeric: return "L";
    }
    return "?";
}

std::string to_string(Direction d) { return d == Direction::a_from_b ? "A-from-B" : "B-from-A"; }

std::vector<AlgebraicNumber> TowerSample::values() const
{
    std::vector<AlgebraicNumber> v;
    for (const auto& e : elements)
        if (e.value)
            v.push_back(*e.value);
    return v;
}

namespace {

Integer height(const BQF& f)
{
    Integer h = abs(f.a);
    h = std::max<Integer>(h, abs(f.b));
    return std::max<Integer>(h, abs(f.c));
}

bool is_discriminant(long d) { return d < 0 && (((d % 4) + 4) % 4 == 0 || ((d % 4) + 4) % 4 == 1); }

bool in_field(const PresentedField& f, const AlgebraicNumber& a) { return to_element(f.field, a).has_value(); }

bool contains(const std::vector<AlgebraicNumber>& v, const AlgebraicNumber& a)
{
    return std::any_of(v.begin(), v.end(), [&](const AlgebraicNumber& b) { return alg_equals(a, b); });
}

/// The CM point of f translated so that its real part lies in [0, 1).
std::pair<AlgebraicNumber, Integer> k_representative(const BQF& f)
{
    AlgebraicNumber tau = cm_point(f);
    // real part is -b / (2a)
    Rational re(-f.b, 2 * f.a);
    Integer shift = -floor(re);
    if (shift == 0)
        return {tau, shift};
    return {tau + AlgebraicNumber(Rational(shift)), shift};
}

PresentedField extend(const PresentedField& f, const std::vector<AlgebraicNumber>& extra)
{
    std::vector<AlgebraicNumber> gens = f.generators;
    bool grew = false;
    for (const auto& x : extra)
        if (!x.is_rational() && !in_field(f, x)) {
            gens.push_back(x);
            grew = true;
        }
    return grew ? primitive_element(gens) : f;
}

} // namespace

AlgebraicNumber replay(const TowerElement& e, Side side, const ClassPolicy& policy)
{
    switch (side) {
    case Side::J:
        return singular_modulus(e.provenance.form, policy);
    case Side::K: {
        AlgebraicNumber tau = cm_point(e.provenance.form);
        if (e.provenance.shift == 0)
            return tau;
        return tau + AlgebraicNumber(Rational(e.provenance.shift));
    }
    default:
        throw std::invalid_argument("numeric tower elements have no exact replay");
    }
}

TowerSample build_special_tower(const PresentedField& base, Side side, const TowerBounds& bounds,
                                const ClassPolicy& policy)
{
    if (side != Side::J && side != Side::K)
        throw std::invalid_argument("build_special_tower: side must be J or K");
    if (bounds.depth < 0 || bounds.depth > 2)
        throw std::invalid_argument("build_special_tower: depth must be at most 2");
    if (bounds.dmax < 1 || bounds.form_height < 1)
        throw std::invalid_argument("build_special_tower: bounds must be positive");

    TowerSample s;
    s.base = base;
    s.side = side;
    s.depth = bounds.depth;
    PresentedField f = base;
    std::vector<AlgebraicNumber> seen;
    for (int stage = 1; stage <= bounds.depth; ++stage) {
        std::vector<AlgebraicNumber> fresh;
        for (long d = -3; d >= -bounds.dmax; --d) {
            if (!is_discriminant(d))
                continue;
            if (side == Side::J && !in_field(f, sqrt_rational(Rational(d))))
                continue;
            for (const BQF& form : reduced_forms(d)) {
                if (height(form) > bounds.form_height)
                    continue;
                TowerElement el;
                el.provenance.stage = stage;
                el.provenance.form = form;
                el.provenance.discriminant = d;
                if (side == Side::J) {
                    el.value = singular_modulus(form, policy);
                } else {
                    if (!in_field(f, singular_modulus(form, policy)))
                        continue;
                    auto [tau, shift] = k_representative(form);
                    el.value = tau;
                    el.provenance.shift = shift;
                }
                if (contains(seen, *el.value))
                    continue;
                seen.push_back(*el.value);
                fresh.push_back(*el.value);
                const AlgebraicNumber v = *el.value;
                el.enclose = [v](long bits) {
                    Integer den = 1;
                    den <<= static_cast<unsigned long>(bits);
                    return v.refine(Rational(Integer(1), den));
                };
                s.elements.push_back(std::move(el));
            }
        }
        if (stage < bounds.depth || bounds.with_field)
            f = extend(f, fresh);
    }
    if (bounds.with_field)
        s.field = f;
    return s;
}

TowerSample build_exp_tower(Side side, int depth, int seeds)
{
    if (side != Side::E_numeric && side != Side::L_numeric)
        throw std::invalid_argument("build_exp_tower: side must be E or L");
    if (depth < 1 || depth > 2 || seeds < 1)
        throw std::invalid_argument("build_exp_tower: need 1 <= depth <= 2 and seeds >= 1");
    TowerSample s;
    s.base = primitive_element({AlgebraicNumber(0)});
    s.field = s.base;
    s.side = side;
    s.depth = depth;
    auto add = [&](int stage, std::string expr, std::function<Box(long)> f) {
        TowerElement el;
        el.provenance.stage = stage;
        el.provenance.expression = std::move(expr);
        el.enclose = std::move(f);
        s.elements.push_back(std::move(el));
    };
    for (int k = 1; k <= seeds; ++k) {
        if (side == Side::E_numeric) {
            add(1, "exp(" + std::to_string(k) + ")", [k](long bits) {
                PrecisionScope p(bits + 16);
                return Box(exp(Interval(k)));
            });
            if (depth >= 2)
                add(2, "exp(exp(" + std::to_string(k) + "))", [k](long bits) {
                    PrecisionScope p(bits + 32);
                    return Box(exp(exp(Interval(k))));
                });
        } else {
            add(1, "log(" + std::to_string(k + 1) + ")", [k](long bits) {
                PrecisionScope p(bits + 16);
                return Box(log(Interval(k + 1)));
            });
            // log(log(m)) is real once log(m) > 1
            if (depth >= 2 && k + 1 >= 3)
                add(2, "log(log(" + std::to_string(k + 1) + "))", [k](long bits) {
                    PrecisionScope p(bits + 32);
                    return Box(log(log(Interval(k + 1))));
                });
        }
    }
    if (side == Side::L_numeric)
        add(1, "log(-1) = i*pi", [](long bits) {
            PrecisionScope p(bits + 16);
            return Box(Interval(0), pi_interval());
        });
    return s;
}

GDisjointnessReport check_g_disjointness_sample(const std::vector<AlgebraicNumber>& a,
                                                const std::vector<AlgebraicNumber>& b, const PresentedField& e,
                                                Direction direction)
{
    const auto& acting = direction == Direction::a_from_b ? a : b;
    const auto& sampled = direction == Direction::a_from_b ? b : a;

    auto generated = [&](const std::vector<AlgebraicNumber>& xs) {
        std::vector<AlgebraicNumber> gens = e.generators;
        gens.insert(gens.end(), xs.begin(), xs.end());
        return primitive_element(gens);
    };
    const PresentedField f = generated(acting);
    const PresentedField l = generated(sampled);

    GDisjointnessReport rep;
    rep.direction = direction;
    rep.degree_e = e.degree();
    rep.degree_f = f.degree();
    rep.degree_l = l.degree();
    rep.linearly_disjoint = std::holds_alternative<Disjoint>(linearly_disjoint(e, f.generators, l.generators));

    for (std::size_t i = 0; i < sampled.size(); ++i)
        for (std::size_t j = i + 1; j < sampled.size(); ++j) {
            if (alg_equals(sampled[i], sampled[j]))
                continue;
            PairCheck pc;
            pc.first = i;
            pc.second = j;
            ++rep.pairs_checked;
            pc.g = orbit_equiv(sampled[i], sampled[j], f);
            if (!pc.g) {
                pc.method = "not-equivalent";
                rep.pairs.push_back(std::move(pc));
                continue;
            }
            ++rep.equivalent_pairs;
            if (rep.linearly_disjoint) {
                try {
                    Descent dsc = descend(*pc.g, sampled[i], sampled[j], e, l);
                    pc.h = dsc.h;
                    pc.method = "descend";
                    pc.violation = !same_point(act(*pc.h, sampled[i]), sampled[j]);
                } catch (const PreconditionError&) {
                    pc.method = "descend";
                    pc.violation = true;
                }
            } else {
                pc.method = "orbit-over-E";
                pc.h = orbit_equiv(sampled[i], sampled[j], e);
                pc.violation = !pc.h;
            }
            rep.violations += pc.violation;
            rep.pairs.push_back(std::move(pc));
        }

    // F cap L through Q-linear algebra in the compositum.
    const PresentedField k = primitive_element({f.primitive_element(), l.primitive_element()});
    const NFElem tf = k.generator_coords[0], tl = k.generator_coords[1];
    const int df = f.degree(), dl = l.degree(), dk = k.degree();
    Mat<Rational> m(dk, df + dl);
    std::vector<NFElem> fpow;
    NFElem p = k.field.one();
    for (int c = 0; c < df; ++c, p *= tf) {
        fpow.push_back(p);
        auto co = p.coords();
        for (int r = 0; r < dk; ++r)
            m(r, c) = co[static_cast<std::size_t>(r)];
    }
    p = k.field.one();
    for (int c = 0; c < dl; ++c, p *= tl) {
        auto co = p.coords();
        for (int r = 0; r < dk; ++r)
            m(r, df + c) = co[static_cast<std::size_t>(r)];
    }
    auto null = nullspace(m);
    rep.intersection_degree = static_cast<int>(null.size());
    rep.intersection_equals_e = rep.intersection_degree == e.degree();
    if (!rep.intersection_equals_e) {
        for (const auto& v : null) {
            NFElem t = k.field.zero();
            for (int c = 0; c < df; ++c)
                t += NFElem(v(c)) * fpow[static_cast<std::size_t>(c)];
            AlgebraicNumber ta = k.field.to_algebraic(t);
            if (!in_field(e, ta)) {
                // 1 and t lie in L, diag(t, 1) in GL2(F) sends 1 to t, and GL2(E) maps 1 into E or infinity
                rep.intersection_witness = ta;
                ++rep.violations;
                break;
            }
        }
    }
    return rep;
}

GDisjointnessReport check_g_disjointness_sample(const TowerSample& a, const TowerSample& b, const PresentedField& e,
                                                Direction direction)
{
    // the sample fields include their base fields
    auto with_base = [](const TowerSample& s) {
        std::vector<AlgebraicNumber> v = s.base.generators;
        auto vals = s.values();
        v.insert(v.end(), vals.begin(), vals.end());
        return v;
    };
    return check_g_disjointness_sample(with_base(a), with_base(b), e, direction);
}

} // namespace modtower
