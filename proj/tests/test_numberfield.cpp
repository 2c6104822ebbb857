#include <gtest/gtest.h>

#include "modtower/numberfield.hpp"

using namespace modtower;

namespace {

AlgebraicNumber sq(long q) { return sqrt_rational(Rational(q)); }

/// Reconstruct sum c_k theta^k as an algebraic number.
AlgebraicNumber reconstruct(const NumberField& k, const std::vector<Rational>& c)
{
    AlgebraicNumber acc(0), pw(1);
    for (const auto& q : c) {
        acc = acc + AlgebraicNumber(q) * pw;
        pw = pw * k.theta();
    }
    return acc;
}

/// e denotes g: exact vanishing of g's minimal polynomial at e, plus a tight
/// enclosure of e meeting g's box.
bool denotes(const NumberField& k, const NFElem& e, const AlgebraicNumber& g)
{
    NFElem v = horner(minimal_polynomial(g), e, [](const Rational& q) { return NFElem(q); });
    if (!v.is_zero())
        return false;
    const Rational w(1, 1L << 40);
    return overlaps(k.enclose(e, w), g.refine(w));
}

} // namespace

TEST(NumberField, ArithmeticInQSqrt2)
{
    NumberField k(sq(2));
    NFElem s = k.gen();
    EXPECT_EQ(s * s, k.lift(Rational(2)));
    NFElem a = k.from_coords({Rational(1), Rational(1)});
    NFElem inv = inverse(a);
    EXPECT_EQ(a * inv, k.one());
    // (1 + sqrt2)^-1 = -1 + sqrt2
    EXPECT_EQ(inv, k.from_coords({Rational(-1), Rational(1)}));
    EXPECT_TRUE(alg_equals(k.to_algebraic(inv), sq(2) - AlgebraicNumber(1)));
}

TEST(NumberField, MultiplicationMatrixCharpolyIsMinpolyPower)
{
    NumberField k(sq(2) + sq(3));
    NFElem t = k.gen();
    NFElem e = t * t; // 5 + 2 sqrt6, degree 2
    QPoly cp = charpoly(multiplication_matrix(k, e));
    EXPECT_EQ(cp, pow(qpoly({1, -10, 1}), 2));
}

TEST(PrimitiveElement, Examples)
{
    auto pf = primitive_element({sq(2), sq(3)});
    EXPECT_EQ(pf.degree(), 4);
    EXPECT_TRUE(alg_equals(pf.primitive_element(), sq(2) + sq(3)));
    EXPECT_EQ(pf.combination, (std::vector<long>{1, 1}));

    auto pi = primitive_element({imag_unit()});
    EXPECT_EQ(pi.degree(), 2);
    EXPECT_TRUE(alg_equals(pi.primitive_element(), imag_unit()));

    auto ph = primitive_element({AlgebraicNumber(Rational(1, 2))});
    EXPECT_EQ(ph.degree(), 1);
    EXPECT_EQ(ph.primitive_element().rational_value(), Rational(1, 2));
}

TEST(PrimitiveElement, GeneratorsHaveExactCoordinates)
{
    std::vector<AlgebraicNumber> gens{sq(2), imag_unit(), sq(2) * imag_unit(), real_root(Rational(2), 3)};
    auto pf = primitive_element(gens);
    EXPECT_EQ(pf.degree(), 12);
    for (std::size_t i = 0; i < gens.size(); ++i)
        EXPECT_TRUE(denotes(pf.field, pf.generator_coords[i], gens[i]));
    // theta is the declared integer combination
    AlgebraicNumber comb(0);
    for (std::size_t i = 0; i < gens.size(); ++i)
        comb = comb + AlgebraicNumber(Rational(pf.combination[i])) * gens[i];
    EXPECT_TRUE(alg_equals(comb, pf.primitive_element()));
}

TEST(ExpressInBasis, Examples)
{
    NumberField k(sq(2));
    auto c = express_in_basis(k, AlgebraicNumber(1) + AlgebraicNumber(2) * sq(2));
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, (std::vector<Rational>{Rational(1), Rational(2)}));
    EXPECT_FALSE(express_in_basis(k, sq(3)));

    NumberField big(sq(2) + sq(3));
    auto d = express_in_basis(big, sq(2));
    ASSERT_TRUE(d);
    // oracle: with t = s2 + s3, t^3 = 11 s2 + 9 s3, so s2 = (t^3 - 9t) / 2
    EXPECT_EQ(*d, (std::vector<Rational>{Rational(0), Rational(-9, 2), Rational(0), Rational(1, 2)}));
    EXPECT_TRUE(alg_equals(reconstruct(big, *d), sq(2)));
}

TEST(ExpressInBasis, RoundTripOnRandomElements)
{
    NumberField k(sq(2) + imag_unit());
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; b += 2) {
            AlgebraicNumber x = AlgebraicNumber(a) * sq(2) + AlgebraicNumber(b) * imag_unit() * sq(2);
            auto c = express_in_basis(k, x);
            ASSERT_TRUE(c);
            EXPECT_TRUE(alg_equals(reconstruct(k, *c), x));
        }
    EXPECT_FALSE(express_in_basis(k, sq(5)));
}
