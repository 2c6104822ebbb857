#include <gtest/gtest.h>

#include <random>

#include "modtower/algebraic.hpp"

using namespace modtower;

namespace {

AlgebraicNumber sqrt2() { return sqrt_rational(Rational(2)); }
AlgebraicNumber sqrt3() { return sqrt_rational(Rational(3)); }

bool box_near(const AlgebraicNumber& a, double re, double im, double tol = 1e-9)
{
    Box b = a.refine(Rational(1, 1000000000));
    return std::abs(b.mid_re().to_double() - re) < tol && std::abs(b.mid_im().to_double() - im) < tol;
}

} // namespace

TEST(IsolateRoots, ConjugatePairForXSquaredPlusOne)
{
    auto roots = isolate_roots(qpoly({1, 0, 1}), Rational(1, 100));
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_TRUE(roots[0].box().im().negative());
    EXPECT_TRUE(roots[1].box().im().positive());
    EXPECT_EQ(conj(roots[0].box()), roots[1].box());
    for (const auto& r : roots)
        EXPECT_LE(r.box().width(), Rational(1, 100));
}

TEST(IsolateRoots, RationalRoot)
{
    auto roots = isolate_roots(QPoly{Rational(-1, 2), Rational(1)}, Rational(1, 10));
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_EQ(roots[0].rational_value(), Rational(1, 2));
}

TEST(IsolateRoots, FourRealRootsOfSqrt2PlusSqrt3Poly)
{
    auto roots = isolate_roots(qpoly({1, 0, -10, 0, 1}), Rational(1, 1 << 20));
    ASSERT_EQ(roots.size(), 4u);
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    const double expect[] = {-s2 - s3, -s3 + s2, s3 - s2, s2 + s3};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_TRUE(roots[i].is_real());
        EXPECT_NEAR(roots[i].approx_re(), expect[i], 1e-5);
        // oracle: sign change of the polynomial across the real box
        const Interval re = roots[i].box().re();
        Rational fl = eval(qpoly({1, 0, -10, 0, 1}), re.lo()), fh = eval(qpoly({1, 0, -10, 0, 1}), re.hi());
        EXPECT_LT(fl.sign() * fh.sign(), 0);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            EXPECT_FALSE(overlaps(roots[i].box(), roots[j].box()));
}

TEST(IsolateRoots, RepeatedAndReducibleInput)
{
    // (X^2 - 2)^2 (X - 3) (X^2 + X + 1)
    QPoly p = pow(qpoly({-2, 0, 1}), 2) * qpoly({-3, 1}) * qpoly({1, 1, 1});
    auto roots = isolate_roots(p, Rational(1, 1000));
    ASSERT_EQ(roots.size(), 5u);
    int real = 0;
    for (const auto& r : roots)
        real += r.is_real();
    EXPECT_EQ(real, 3);
}

TEST(IsolateRoots, RefinementStaysInsidePreviousBoxes)
{
    auto roots = isolate_roots(qpoly({-2, 0, 0, 1, 0, 1}), Rational(1, 10));
    for (const auto& r : roots) {
        if (r.is_rational())
            continue;
        Box prev = r.box();
        for (int k = 1; k <= 6; ++k) {
            Box next = r.refine(prev.width() / Rational(1000));
            EXPECT_TRUE(prev.contains(next));
            EXPECT_TRUE(eval_box(r.poly(), next).contains_zero());
            prev = next;
        }
        EXPECT_GE(r.precision_state(), 6);
    }
}

TEST(AlgArith, SqrtTwoSquared)
{
    auto two = sqrt2() * sqrt2();
    ASSERT_TRUE(two.is_rational());
    EXPECT_EQ(*two.rational_value(), Rational(2));
}

TEST(AlgArith, SqrtTwoPlusSqrtThree)
{
    auto s = sqrt2() + sqrt3();
    EXPECT_EQ(minimal_polynomial(s), qpoly({1, 0, -10, 0, 1}));
    EXPECT_TRUE(box_near(s, std::sqrt(2.0) + std::sqrt(3.0), 0));
    // oracle: Res_Y(Y^2 - 2, (X - Y)^2 - 3) computed by the explicit formula
    // prod over y = +-sqrt2 of ((X - y)^2 - 3) = (X^2 - 1)^2 - 8X^2
    QPoly oracle = pow(qpoly({-1, 0, 1}), 2) - QPoly{Rational(0), Rational(0), Rational(8)};
    EXPECT_EQ(oracle, qpoly({1, 0, -10, 0, 1}));
}

TEST(AlgArith, ConjugatesCancel)
{
    auto i = imag_unit();
    auto z = i + (-i);
    EXPECT_TRUE(z.is_zero());
    auto w = i * conj(i);
    EXPECT_EQ(w.rational_value(), Rational(1));
}

TEST(AlgArith, DivisionByZeroIsDistinct)
{
    EXPECT_THROW(sqrt2() / (sqrt2() - sqrt2()), DivisionByZero);
}

TEST(AlgArith, QuotientAndPowers)
{
    auto q = (sqrt2() + sqrt3()) / (sqrt3() - sqrt2());
    // (s2 + s3)^2 = 5 + 2 sqrt6
    EXPECT_TRUE(alg_equals(q, AlgebraicNumber(5) + AlgebraicNumber(2) * sqrt_rational(Rational(6))));
    auto c = real_root(Rational(2), 3);
    EXPECT_EQ(pow(c, 3).rational_value(), Rational(2));
    EXPECT_EQ(pow(c, -3).rational_value(), Rational(1, 2));
}

TEST(AlgArith, ResultSatisfiesDefiningPolynomialAndExcludesSiblings)
{
    auto z = sqrt2() * imag_unit() + sqrt3();
    Box b = z.refine(Rational(1, 1 << 30));
    EXPECT_TRUE(eval_box(z.poly(), b).contains_zero());
    for (const auto& sib : isolate_roots(z.poly(), Rational(1, 1 << 30))) {
        if (alg_equals(sib, z))
            continue;
        EXPECT_FALSE(eval_box(z.poly(), b).contains_zero() && overlaps(sib.box(), b));
    }
}

TEST(AlgEquals, Examples)
{
    auto pos = AlgebraicNumber::from_poly_box(qpoly({-2, 0, 1}), Box(Interval(Rational(1), Rational(2)), Interval(0)));
    EXPECT_TRUE(alg_equals(sqrt2(), pos));
    EXPECT_FALSE(alg_equals(sqrt2(), -sqrt2()));
    auto prod = (sqrt2() + sqrt3()) * (sqrt3() - sqrt2());
    EXPECT_TRUE(alg_equals(prod, AlgebraicNumber(1)));
}

TEST(MinimalPolynomial, Examples)
{
    EXPECT_EQ(minimal_polynomial(AlgebraicNumber(Rational(1, 2))), (QPoly{Rational(-1, 2), Rational(1)}));
    EXPECT_EQ(minimal_polynomial(imag_unit()), qpoly({1, 0, 1}));
    EXPECT_EQ(minimal_polynomial(sqrt2() + sqrt3()), qpoly({1, 0, -10, 0, 1}));
}

TEST(MinimalPolynomial, DividesVanishingProducts)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-5, 5);
    auto a = sqrt2() + imag_unit();
    QPoly m = minimal_polynomial(a);
    for (int t = 0; t < 20; ++t) {
        QPoly r = qpoly({d(rng), d(rng), d(rng), 1});
        QPoly f = r * m;
        EXPECT_TRUE(is_root_of(a, f));
        EXPECT_EQ(poly_gcd(f, m), m);
    }
    EXPECT_FALSE(is_root_of(a, qpoly({-2, 0, 1})));
}

TEST(HalfPlane, Membership)
{
    EXPECT_EQ(in_upper_half_plane(imag_unit()), Tri::yes);
    EXPECT_EQ(in_upper_half_plane(-imag_unit()), Tri::no);
    EXPECT_EQ(in_upper_half_plane(sqrt2()), Tri::no);
}

TEST(FromPolyBox, RejectsNonIsolatingBox)
{
    Box wide(Interval(Rational(-2), Rational(2)), Interval(Rational(-1, 2), Rational(1, 2)));
    EXPECT_THROW(AlgebraicNumber::from_poly_box(qpoly({-2, 0, 1}), wide), std::invalid_argument);
}
