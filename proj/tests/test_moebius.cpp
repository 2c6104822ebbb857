#include <gtest/gtest.h>

#include <random>

#include "modtower/moebius.hpp"

using namespace modtower;

namespace {

AlgebraicNumber sq(long q) { return sqrt_rational(Rational(q)); }
AlgebraicNumber num(long q) { return AlgebraicNumber(Rational(q)); }
AlgebraicNumber i_() { return imag_unit(); }

Moebius mq(long a, long b, long c, long d) { return Moebius(num(a), num(b), num(c), num(d)); }

bool maps(const Moebius& g, const AlgebraicNumber& x, const AlgebraicNumber& y)
{
    return same_point(act(g, x), y);
}

} // namespace

TEST(Act, Examples)
{
    EXPECT_TRUE(maps(Moebius::identity(), sq(2), sq(2)));
    EXPECT_TRUE(maps(mq(2, 0, 0, 1), i_(), num(2) * i_()));
    EXPECT_TRUE(maps(mq(0, -1, 1, 0), i_(), i_()));
}

TEST(Act, ProjectiveConventions)
{
    EXPECT_FALSE(act(mq(1, 0, 1, -1), ProjPoint(num(1))).has_value()); // cx + d = 0
    auto at_inf = act(mq(3, 1, 2, 5), std::nullopt);
    ASSERT_TRUE(at_inf);
    EXPECT_EQ(at_inf->rational_value(), Rational(3, 2));
    EXPECT_FALSE(act(mq(1, 4, 0, 1), std::nullopt).has_value());
}

TEST(Act, InverseRoundTrip)
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-4, 4);
    std::vector<AlgebraicNumber> xs{i_(), sq(2) + i_(), real_root(Rational(2), 4) * i_(), sq(3)};
    for (int t = 0; t < 12; ++t) {
        int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a * e - b * c == 0)
            continue;
        Moebius g = mq(a, b, c, e);
        for (const auto& x : xs)
            EXPECT_TRUE(same_point(act(g, act(g.inverse(), x)), x));
    }
    // algebraic entries
    Moebius g(sq(2), num(1), num(0), num(1));
    EXPECT_TRUE(same_point(act(g, act(g.inverse(), i_())), i_()));
}

TEST(PrimitiveForm, Examples)
{
    auto f1 = primitive_form(Moebius(AlgebraicNumber(Rational(1, 2)), num(0), num(0), num(1)));
    EXPECT_EQ(f1.matrix, (std::array<Integer, 4>{1, 0, 0, 2}));
    EXPECT_EQ(f1.det, 2);
    auto f2 = primitive_form(mq(2, 0, 0, 2));
    EXPECT_EQ(f2.matrix, (std::array<Integer, 4>{1, 0, 0, 1}));
    EXPECT_EQ(f2.det, 1);
    auto f3 = primitive_form(mq(3, 1, 0, 2));
    EXPECT_EQ(f3.matrix, (std::array<Integer, 4>{3, 1, 0, 2}));
    EXPECT_EQ(f3.det, 6);
    auto f4 = primitive_form(mq(-2, 0, 0, 4));
    EXPECT_EQ(f4.matrix, (std::array<Integer, 4>{-1, 0, 0, 2}));
    EXPECT_EQ(f4.det, -2);
}

TEST(OrbitEquiv, Examples)
{
    auto q = rationals();
    auto g1 = orbit_equiv(i_(), i_(), q);
    ASSERT_TRUE(g1);
    EXPECT_TRUE(same_transformation(*g1, Moebius::identity()));
    auto g2 = orbit_equiv(i_(), num(2) * i_(), q);
    ASSERT_TRUE(g2);
    EXPECT_TRUE(maps(*g2, i_(), num(2) * i_()));
    EXPECT_EQ(primitive_form(*g2).det, 2);
    EXPECT_FALSE(orbit_equiv(i_(), i_() * real_root(Rational(2), 4), q));
}

TEST(OrbitEquiv, OverQuadraticField)
{
    auto f = field_of({sq(2)});
    AlgebraicNumber x = i_() + sq(3), y = sq(2) * (i_() + sq(3)) + num(1);
    auto g = orbit_equiv(x, y, f);
    ASSERT_TRUE(g);
    EXPECT_TRUE(maps(*g, x, y));
    EXPECT_FALSE(orbit_equiv(x, y, rationals()));
}

TEST(OrbitEquiv, EquivalenceRelationOnSamples)
{
    auto q = rationals();
    AlgebraicNumber t = real_root(Rational(3), 4) * i_();
    std::vector<Moebius> gs{mq(1, 1, 0, 1), mq(2, 1, 1, 1), mq(0, -1, 1, 3)};
    std::vector<AlgebraicNumber> pts{t};
    for (const auto& g : gs)
        pts.push_back(*act(g, pts.back()));
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = 0; b < pts.size(); ++b) {
            auto g = orbit_equiv(pts[a], pts[b], q);
            ASSERT_TRUE(g);
            EXPECT_TRUE(maps(*g, pts[a], pts[b]));
            EXPECT_TRUE(maps(g->inverse(), pts[b], pts[a])); // symmetric
        }
    // transitivity by composition
    auto g01 = *orbit_equiv(pts[0], pts[1], q), g12 = *orbit_equiv(pts[1], pts[2], q);
    EXPECT_TRUE(maps(g12 * g01, pts[0], pts[2]));
}

TEST(OrbitEquiv, MinimalDeterminantForSpecialPairs)
{
    // i and 3i + 1: minimal primitive integer g has det 3
    auto g = orbit_equiv(i_(), num(3) * i_() + num(1), rationals());
    ASSERT_TRUE(g);
    EXPECT_EQ(primitive_form(*g).det, 3);
    // [[1, 0], [1, 1]] i = i / (i + 1) = (1 + i) / 2
    auto h = orbit_equiv(i_(), (num(1) + i_()) / num(2), rationals());
    ASSERT_TRUE(h);
    EXPECT_EQ(primitive_form(*h).det, 1);
    // x = (1 + sqrt(-7)) / 2 and x / 2 are SL2(Z)-equivalent: [[0, 1], [-1, 1]] x = x / 2
    AlgebraicNumber x = (num(1) + sq(-7)) / num(2);
    auto k = orbit_equiv(x, x / num(2), rationals());
    ASSERT_TRUE(k);
    EXPECT_EQ(primitive_form(*k).det, 1);
}

TEST(IsSpecial, Examples)
{
    auto s1 = is_special(i_());
    EXPECT_TRUE(s1.special);
    ASSERT_TRUE(s1.witness);
    EXPECT_EQ(s1.witness->rational_entries(), (std::array<Rational, 4>{0, -1, 1, 0}));
    auto s2 = is_special(num(2) * i_());
    EXPECT_TRUE(s2.special);
    EXPECT_EQ(s2.witness->rational_entries(), (std::array<Rational, 4>{0, -4, 1, 0}));
    EXPECT_FALSE(is_special(i_() * real_root(Rational(2), 4)).special);
    EXPECT_THROW(is_special(sq(2)), NotInUpperHalfPlane);
    EXPECT_THROW(is_special(-i_()), NotInUpperHalfPlane);
}

TEST(IsSpecial, WitnessFixesPointAndIsNotScalar)
{
    std::vector<AlgebraicNumber> pts{i_(), (num(1) + sq(-3)) / num(2), sq(-7) + num(5), (num(3) + sq(-11)) / num(4)};
    for (const auto& x : pts) {
        auto s = is_special(x);
        ASSERT_TRUE(s.special);
        EXPECT_TRUE(maps(*s.witness, x, x));
        EXPECT_FALSE(s.witness->is_scalar());
    }
}

TEST(DimG, Examples)
{
    auto q = rationals();
    EXPECT_EQ(dim_G({i_(), num(2) * i_()}, {}, q), 1);
    EXPECT_EQ(dim_G_sigma({i_(), num(2) * i_(), i_() * real_root(Rational(2), 4)}), 1);
    EXPECT_EQ(dim_G({}, {}, q), 0);
    EXPECT_EQ(dim_G({i_(), num(2) * i_(), sq(-2)}, {num(5) * i_()}, q), 1);
}

TEST(DimG, IndependenceMatchesCount)
{
    auto q = rationals();
    std::vector<AlgebraicNumber> a{i_() * real_root(Rational(2), 4), i_() * real_root(Rational(3), 4), sq(-5)};
    EXPECT_EQ(dim_G(a, {}, q), 3); // pairwise inequivalent: G(Q)-independent
    a.push_back(*act(mq(1, 2, 0, 1), a[0]));
    EXPECT_EQ(dim_G(a, {}, q), 3);
}

TEST(Descend, Examples)
{
    auto q = rationals();
    auto f = field_of({sq(2)});
    // scalar g, l1 = l2 = 5
    auto d1 = descend(Moebius(sq(2), num(0), num(0), sq(2)), num(5), num(5), q, q);
    EXPECT_TRUE(same_transformation(d1.h, Moebius::identity()));
    // g = [[3 sqrt2, 0], [0, sqrt2]], 1 -> 3
    auto d2 = descend(Moebius(num(3) * sq(2), num(0), num(0), sq(2)), num(1), num(3), q, q);
    EXPECT_TRUE(same_transformation(d2.h, mq(3, 0, 0, 1)));
    // rational g over Q(sqrt3)
    auto l = field_of({sq(3)});
    auto d3 = descend(mq(1, 1, 0, 1), sq(3), sq(3) + num(1), q, l);
    EXPECT_TRUE(same_transformation(d3.h, mq(1, 1, 0, 1)));
    EXPECT_EQ(d3.which, DescentCase::d);
    (void)f;
}

TEST(Descend, RejectsViolatedPreconditions)
{
    auto q = rationals();
    auto l = field_of({sq(2)});
    // F = Q(sqrt2) and L = Q(sqrt2) are not linearly disjoint over Q
    Moebius g(sq(2), num(0), num(0), num(1));
    EXPECT_THROW(descend(g, num(1), sq(2), q, l), PreconditionError);
    EXPECT_THROW(descend(mq(2, 0, 0, 1), num(1), num(3), q, q), PreconditionError);
}

namespace {

/// g = h0 (r + s W) where W fixes l1 = u + v sqrt(q) and s carries the F-part.
struct DescentInstance {
    Moebius g;
    AlgebraicNumber l1, l2;
};

DescentInstance make_instance(std::mt19937& rng, const AlgebraicNumber& u, const AlgebraicNumber& v, long q,
                              const AlgebraicNumber& s)
{
    std::uniform_int_distribution<int> d(-5, 5);
    AlgebraicNumber l1 = u + v * sq(q);
    // l1 is a root of X^2 - 2u X + (u^2 - q v^2) over the base
    AlgebraicNumber tr = num(2) * u, nm = u * u - num(q) * v * v;
    for (;;) {
        int a = d(rng), b = d(rng), c = d(rng), e = d(rng), r = d(rng);
        if (a * e - b * c == 0)
            continue;
        AlgebraicNumber rr = num(r);
        std::array<AlgebraicNumber, 4> k{rr + s * tr, -(s * nm), s, rr};
        if ((k[0] * k[3] - k[1] * k[2]).is_zero())
            continue;
        Moebius g = mq(a, b, c, e) * Moebius(k[0], k[1], k[2], k[3]);
        auto l2 = act(mq(a, b, c, e), l1);
        if (!l2)
            continue;
        return {g, l1, *l2};
    }
}

bool in_field(const PresentedField& e, const AlgebraicNumber& x) { return express_in_basis(e.field, x).has_value(); }

void check_descent(const Moebius& g, const AlgebraicNumber& l1, const AlgebraicNumber& l2, const PresentedField& e,
                   const PresentedField& l)
{
    Descent r = descend(g, l1, l2, e, l);
    EXPECT_TRUE(maps(r.h, l1, l2));
    for (const auto& x : r.h.entries())
        EXPECT_TRUE(in_field(e, x));
}

} // namespace

TEST(Descend, RandomQuadraticInstancesOverQ)
{
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> d(-6, 6);
    const std::vector<std::pair<long, long>> fl{{2, 3}, {5, 7}, {-1, 2}, {3, -7}, {6, 10}};
    auto q = rationals();
    int done = 0;
    for (const auto& [pf, pl] : fl) {
        auto l = field_of({sq(pl)});
        for (int t = 0; t < 40; ++t) {
            int v = d(rng);
            auto inst = make_instance(rng, num(d(rng)), AlgebraicNumber(Rational(v == 0 ? 1 : v, 2)), pl, sq(pf));
            check_descent(inst.g, inst.l1, inst.l2, q, l);
            ++done;
        }
    }
    EXPECT_EQ(done, 200);
}

TEST(Descend, RandomQuarticInstancesOverQuadraticBase)
{
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> d(-4, 4);
    auto e = field_of({sq(5)});
    auto l = field_of({sq(5), sq(3)});
    int done = 0;
    for (int t = 0; t < 8; ++t) {
        int v = d(rng);
        AlgebraicNumber u = num(d(rng)) + num(d(rng)) * sq(5);
        AlgebraicNumber vv = num(v == 0 ? 1 : v) + num(d(rng)) * sq(5);
        auto inst = make_instance(rng, u, vv, 3, sq(2));
        check_descent(inst.g, inst.l1, inst.l2, e, l);
        ++done;
    }
    EXPECT_EQ(done, 8);
}
