#include <random>

#include <gtest/gtest.h>

#include "modtower/mpoly.hpp"
#include "modtower/towers.hpp"

using namespace modtower;

namespace {

PresentedField q_field() { return primitive_element({AlgebraicNumber(0)}); }
PresentedField field(const std::string& gen) { return primitive_element({parse_algebraic(gen)}); }

bool has(const TowerSample& s, const AlgebraicNumber& a)
{
    for (const auto& v : s.values())
        if (alg_equals(v, a))
            return true;
    return false;
}

std::vector<AlgebraicNumber> parse_all(const std::vector<std::string>& xs)
{
    std::vector<AlgebraicNumber> out;
    for (const auto& x : xs)
        out.push_back(parse_algebraic(x));
    return out;
}

bool is_square(long n)
{
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    for (long c = std::max(0L, r - 1); c <= r + 1; ++c)
        if (c * c == n)
            return true;
    return false;
}

} // namespace

TEST(SpecialTower, JSideOverGaussianField)
{
    auto s = build_special_tower(field("i"), Side::J, {1, 4, 10});
    EXPECT_TRUE(has(s, AlgebraicNumber(1728)));
    EXPECT_EQ(s.field->degree(), 2);
    for (const auto& e : s.elements)
        EXPECT_EQ(e.provenance.discriminant, -4);
}

TEST(SpecialTower, KSideOverRationals)
{
    auto s = build_special_tower(q_field(), Side::K, {1, 4, 10});
    EXPECT_TRUE(has(s, imag_unit()));
    EXPECT_TRUE(has(s, parse_algebraic("(1+sqrt(-3))/2")));
    EXPECT_EQ(s.elements.size(), 2u);
    EXPECT_EQ(s.field->degree(), 4);
    for (const auto& e : s.elements)
        EXPECT_TRUE(singular_modulus(e.provenance.form).is_rational());
}

TEST(SpecialTower, JSideOverRationalsIsEmpty)
{
    auto s = build_special_tower(q_field(), Side::J, {1, 3, 10});
    EXPECT_TRUE(s.elements.empty());
    EXPECT_EQ(s.field->degree(), 1);
}

TEST(SpecialTower, Preconditions)
{
    EXPECT_THROW(build_special_tower(q_field(), Side::J, {3, 4, 10}), std::invalid_argument);
    EXPECT_THROW(build_special_tower(q_field(), Side::J, {1, 0, 10}), std::invalid_argument);
    EXPECT_THROW(build_special_tower(q_field(), Side::E_numeric, {1, 4, 10}), std::invalid_argument);
}

TEST(SpecialTower, ProvenanceReplaysAndRecursionHolds)
{
    // J side over Q(i) reaches the class-number-two discriminant -36 at depth 1
    auto j = build_special_tower(field("i"), Side::J, {2, 36, 10});
    EXPECT_TRUE(has(j, AlgebraicNumber(287496)));
    EXPECT_GE(j.field->degree(), 4);
    PresentedField stage_field = j.base;
    for (const auto& e : j.elements) {
        EXPECT_TRUE(alg_equals(replay(e, Side::J), *e.value));
        // the CM point of the form lies in the field of the preceding stage
        if (e.provenance.stage == 1)
            EXPECT_TRUE(to_element(stage_field.field, cm_point(e.provenance.form)).has_value());
        PrecisionScope p(128);
        EXPECT_TRUE(overlaps(eval_j(cm_point(e.provenance.form), 128), e.enclose(128)));
    }

    // stage 1 adjoins the j-values of D = -36, whose field contains sqrt(3); stage 2 then reaches D = -3
    bool stage_two_d3 = false;
    for (const auto& e : j.elements)
        stage_two_d3 |= e.provenance.stage == 2 && e.provenance.discriminant == -3;
    EXPECT_TRUE(stage_two_d3);
    EXPECT_TRUE(has(j, AlgebraicNumber(0)));

    auto k = build_special_tower(q_field(), Side::K, {2, 4, 10});
    for (const auto& e : k.elements) {
        EXPECT_TRUE(alg_equals(replay(e, Side::K), *e.value));
        EXPECT_EQ(in_upper_half_plane(*e.value), Tri::yes);
        double re = e.value->approx_re();
        EXPECT_GE(re, -1e-12);
        EXPECT_LT(re, 1.0);
        if (e.provenance.stage == 1)
            EXPECT_TRUE(singular_modulus(e.provenance.form).is_rational());
    }
    EXPECT_EQ(k.elements.size(), 2u);
}

TEST(ExpTower, NumericEnclosures)
{
    auto e = build_exp_tower(Side::E_numeric, 2, 2);
    ASSERT_EQ(e.elements.size(), 4u);
    EXPECT_EQ(e.elements[0].provenance.expression, "exp(1)");
    Box b = e.elements[0].enclose(100);
    EXPECT_TRUE(Interval(Rational(Integer(2718281828), Integer(1000000000)),
                         Rational(Integer(2718281829), Integer(1000000000)))
                    .contains(b.re()));
    EXPECT_LT(b.width(), Rational(Integer(1), Integer(1) << 90));
    PrecisionScope p(80);
    EXPECT_TRUE(overlaps(e.elements[1].enclose(80), Box(exp(exp(Interval(1))))));

    auto l = build_exp_tower(Side::L_numeric, 2, 2);
    bool saw_pi = false;
    for (const auto& el : l.elements)
        saw_pi |= el.provenance.expression.find("pi") != std::string::npos;
    EXPECT_TRUE(saw_pi);

    // bounded-height audit of a numeric sample: log 2, log 3, i pi
    std::vector<LinValue> vals;
    for (const auto& el : l.elements)
        if (el.provenance.stage == 1)
            vals.push_back(LinValue::numeric(el.enclose));
    EXPECT_EQ(no_small_linear_relation(vals, 6, q_field()).status, RelationStatus::verified);
}

TEST(GDisjointness, DisjointQuadraticSamples)
{
    auto a = parse_all({"sqrt(2)", "1 + sqrt(2)"});
    auto b = parse_all({"sqrt(3)", "2*sqrt(3)", "1 + sqrt(3)", "sqrt(3)/(1 + sqrt(3))", "i"});
    for (auto dir : {Direction::a_from_b, Direction::b_from_a}) {
        auto r = check_g_disjointness_sample(a, b, q_field(), dir);
        EXPECT_TRUE(r.linearly_disjoint);
        EXPECT_EQ(r.violations, 0);
        EXPECT_TRUE(r.intersection_equals_e);
        if (dir == Direction::a_from_b) {
            EXPECT_GT(r.equivalent_pairs, 0);
            for (const auto& p : r.pairs)
                if (p.g) {
                    EXPECT_EQ(p.method, "descend");
                    ASSERT_TRUE(p.h);
                    EXPECT_TRUE(p.h->is_rational());
                }
        }
    }
}

TEST(GDisjointness, IdenticalSamplesOverTheirField)
{
    auto s = parse_all({"sqrt(2)", "3*sqrt(2)", "1/sqrt(2) + 1"});
    auto e = field("sqrt(2)");
    for (auto dir : {Direction::a_from_b, Direction::b_from_a}) {
        auto r = check_g_disjointness_sample(s, s, e, dir);
        EXPECT_EQ(r.violations, 0);
        EXPECT_TRUE(r.intersection_equals_e);
        EXPECT_EQ(r.intersection_degree, 2);
    }
}

TEST(GDisjointness, EngineeredFixture)
{
    auto r = check_g_disjointness_sample(parse_all({"sqrt(3)"}), parse_all({"sqrt(3)", "2*sqrt(3)"}), q_field(),
                                         Direction::a_from_b);
    ASSERT_EQ(r.pairs.size(), 1u);
    // equivalent under G(Q(sqrt 3)) and already under G(Q)
    EXPECT_TRUE(r.pairs[0].g.has_value());
    EXPECT_TRUE(r.pairs[0].h.has_value());
    EXPECT_FALSE(r.pairs[0].violation);
    EXPECT_FALSE(r.linearly_disjoint);
    // Q(sqrt 3) cap Q(sqrt 3) is not Q: 1 and t are G(F)-equivalent but not G(Q)-equivalent
    EXPECT_FALSE(r.intersection_equals_e);
    ASSERT_TRUE(r.intersection_witness);
    EXPECT_EQ(degree(*r.intersection_witness), 2);
    EXPECT_EQ(r.violations, 1);
}

TEST(GDisjointness, TowerSamples)
{
    auto a = build_special_tower(field("i"), Side::J, {1, 16, 10});
    auto b = build_special_tower(q_field(), Side::K, {1, 8, 10});
    auto r = check_g_disjointness_sample(a, b, q_field(), Direction::a_from_b);
    // both fields contain i, so the sampled intersection exceeds Q
    EXPECT_FALSE(r.intersection_equals_e);
    auto r2 = check_g_disjointness_sample(a, b, field("i"), Direction::a_from_b);
    EXPECT_EQ(r2.violations, 0);
    EXPECT_TRUE(r2.intersection_equals_e);
}

TEST(GDisjointness, NeverViolatesWhenLinearlyDisjoint)
{
    const long primes[] = {2, 3, 5, 6, 7, 10};
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> small(-3, 3), pick(0, 5);
    int disjoint_cases = 0;
    for (int trial = 0; trial < 12; ++trial) {
        long p = primes[pick(rng)], q = primes[pick(rng)];
        AlgebraicNumber rp = sqrt_rational(p), rq = sqrt_rational(q);
        std::vector<AlgebraicNumber> a{rp}, b;
        for (int k = 0; k < 3; ++k) {
            int x = small(rng), y = small(rng);
            if (y == 0)
                y = 1;
            b.push_back(AlgebraicNumber(x) + AlgebraicNumber(y) * rq);
        }
        b.push_back(AlgebraicNumber(2) * b[0]);
        auto r = check_g_disjointness_sample(a, b, q_field(), Direction::a_from_b);
        // oracle: Q(sqrt p) and Q(sqrt q) are linearly disjoint over Q iff p q is not a square
        EXPECT_EQ(r.linearly_disjoint, !is_square(p * q)) << p << " " << q;
        EXPECT_EQ(r.intersection_equals_e, !is_square(p * q));
        if (r.linearly_disjoint) {
            ++disjoint_cases;
            EXPECT_EQ(r.violations, 0);
        }
    }
    EXPECT_GT(disjoint_cases, 0);
}
