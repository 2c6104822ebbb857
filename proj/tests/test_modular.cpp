#include <gtest/gtest.h>

#include <complex>
#include <map>

#include "modtower/modular.hpp"

using namespace modtower;

namespace {

AlgebraicNumber num(long q) { return AlgebraicNumber(Rational(q)); }
AlgebraicNumber i_() { return imag_unit(); }

// ---- independent series oracle: sparse Laurent series with integer coefficients ----

using Laurent = std::map<int, Integer>; // exponent -> coefficient, valid below `top`

Laurent mul(const Laurent& a, const Laurent& b, int top)
{
    Laurent c;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b)
            if (i + j < top)
                c[i + j] += x * y;
    return c;
}

/// j to O(q^top) from sigma_3 by trial division and Delta by repeated (1 - q^n) factors.
Laurent oracle_j(int top)
{
    const int len = top + 2;
    std::vector<Integer> e4(static_cast<std::size_t>(len), Integer(0));
    e4[0] = 1;
    for (int n = 1; n < len; ++n) {
        Integer s = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0)
                s += Integer(d) * d * d;
        e4[static_cast<std::size_t>(n)] = 240 * s;
    }
    // prod (1 - q^n)^24 by multiplying one factor at a time
    std::vector<Integer> p(static_cast<std::size_t>(len), Integer(0));
    p[0] = 1;
    for (int n = 1; n < len; ++n)
        for (int r = 0; r < 24; ++r)
            for (int k = len - 1; k >= n; --k)
                p[static_cast<std::size_t>(k)] -= p[static_cast<std::size_t>(k - n)];
    std::vector<Integer> cube(static_cast<std::size_t>(len), Integer(0));
    for (int i = 0; i < len; ++i)
        for (int j = 0; i + j < len; ++j)
            for (int k = 0; i + j + k < len; ++k)
                cube[static_cast<std::size_t>(i + j + k)] +=
                    e4[static_cast<std::size_t>(i)] * e4[static_cast<std::size_t>(j)] * e4[static_cast<std::size_t>(k)];
    // long division cube / p, then shift by q^-1
    std::vector<Integer> quo(static_cast<std::size_t>(len), Integer(0));
    for (int k = 0; k < len; ++k) {
        Integer s = cube[static_cast<std::size_t>(k)];
        for (int i = 1; i <= k; ++i)
            s -= p[static_cast<std::size_t>(i)] * quo[static_cast<std::size_t>(k - i)];
        quo[static_cast<std::size_t>(k)] = s;
    }
    Laurent j;
    for (int k = 0; k < len && k - 1 < top; ++k)
        j[k - 1] = quo[static_cast<std::size_t>(k)];
    return j;
}

/// Phi_p for prime p from exact q-expansions: power sums of the p + 1 conjugates,
/// Newton's identities, then pole elimination against powers of j.
BiPoly oracle_phi_prime(int p)
{
    const int deg = p + 1;
    // series are carried to O(q^work) so that products stay exact below `top`
    const int top = p * deg + 2;
    const int work = top + p * deg + p + 2;
    const Laurent j = oracle_j(p * work + deg + 1);
    std::vector<Laurent> jp{Laurent{{0, Integer(1)}}};
    for (int k = 1; k <= deg; ++k)
        jp.push_back(mul(jp.back(), j, p * work));
    // power sums of j(p tau), j((tau + b) / p)
    std::vector<Laurent> ps(static_cast<std::size_t>(deg) + 1);
    for (int k = 1; k <= deg; ++k) {
        Laurent s;
        for (const auto& [e, c] : jp[static_cast<std::size_t>(k)]) {
            if (p * e < work)
                s[p * e] += c;
            if (e % p == 0 && e / p < work)
                s[e / p] += p * c;
        }
        ps[static_cast<std::size_t>(k)] = s;
    }
    std::vector<Laurent> el{Laurent{{0, Integer(1)}}};
    for (int k = 1; k <= deg; ++k) {
        Laurent s;
        for (int i = 1; i <= k; ++i) {
            Laurent t = mul(el[static_cast<std::size_t>(k - i)], ps[static_cast<std::size_t>(i)], work);
            for (const auto& [e, c] : t)
                s[e] += (i % 2 == 1 ? 1 : -1) * c;
        }
        for (auto it = s.begin(); it != s.end();)
            it = it->first >= work - p * k - p - 1 ? s.erase(it) : std::next(it);
        for (auto& [e, c] : s) {
            EXPECT_TRUE(mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(k)));
            c /= k;
        }
        el.push_back(s);
    }
    BiPoly::Terms terms;
    for (int k = 0; k <= deg; ++k) {
        Laurent s = el[static_cast<std::size_t>(k)];
        const int xexp = deg - k;
        const int sign = k % 2 == 0 ? 1 : -1;
        for (int m = deg; m >= 0; --m) {
            auto it = s.find(-m);
            Integer c = it == s.end() ? Integer(0) : it->second;
            if (sgn(c) == 0)
                continue;
            terms[{xexp, m}] += sign * c;
            for (const auto& [e, v] : jp[static_cast<std::size_t>(m)])
                if (e < top)
                    s[e] -= c * v;
        }
        for (const auto& [e, c] : s)
            if (e < top)
                EXPECT_EQ(sgn(c), 0) << "pole elimination left exponent " << e;
    }
    return BiPoly(terms);
}

std::complex<double> cplx(const Box& z) { return {z.mid_re().to_double(), z.mid_im().to_double()}; }

} // namespace

TEST(QExpansion, JMatchesIndependentOracle)
{
    const QExpansion j = j_qexp(30);
    const Laurent o = oracle_j(30);
    EXPECT_EQ(j.valuation(), -1);
    EXPECT_EQ(j.order(), 30);
    for (int n = -1; n < 30; ++n)
        EXPECT_EQ(j.coefficient(n), o.at(n)) << n;
}

TEST(QExpansion, SpecExamples)
{
    const QExpansion j = j_qexp(2);
    EXPECT_EQ(j.coefficient(-1), 1);
    EXPECT_EQ(j.coefficient(0), 744);
    EXPECT_EQ(j.coefficient(1), 196884);
    EXPECT_THROW(j.coefficient(2), std::out_of_range);
    EXPECT_EQ(j_qexp(3).coefficient(2), Integer("21493760"));
    EXPECT_THROW(j_qexp(0), std::invalid_argument);
}

TEST(QExpansion, EisensteinIdentities)
{
    const int n = 40;
    QExpansion e2 = eisenstein_qexp(2, n), e4 = eisenstein_qexp(4, n), e6 = eisenstein_qexp(6, n);
    QExpansion delta = delta_qexp(n);
    EXPECT_EQ(e4 * e4 * e4 - e6 * e6, Integer(1728) * delta);
    // Ramanujan: 12 D E2 = E2^2 - E4, 3 D E4 = E2 E4 - E6, 2 D E6 = E2 E6 - E4^2
    EXPECT_EQ(Integer(12) * e2.q_derivative(), e2 * e2 - e4);
    EXPECT_EQ(Integer(3) * e4.q_derivative(), e2 * e4 - e6);
    EXPECT_EQ(Integer(2) * e6.q_derivative(), e2 * e6 - e4 * e4);
    // D j = -E4^2 E6 / Delta
    QExpansion j = j_qexp(n - 2);
    EXPECT_EQ(j.q_derivative(), (Integer(-1) * (e4 * e4 * e6)) / delta);
}

TEST(EvalJ, SpecExamples)
{
    Box a = eval_j(i_(), 64), b = eval_j(i_(), 256);
    EXPECT_TRUE(a.contains_point(Rational(1728), Rational(0)));
    EXPECT_TRUE(b.contains_point(Rational(1728), Rational(0)));
    EXPECT_LT(b.width(), a.width());
    AlgebraicNumber rho = (num(1) + sqrt_rational(Rational(-3))) / num(2);
    EXPECT_TRUE(eval_j(rho, 128).contains_zero());
    const Box tau = Box::point(Rational(1, 7), Rational(9, 10));
    EXPECT_TRUE(overlaps(eval_j(tau, 128), eval_j(tau + Box(1), 128)));
    EXPECT_THROW(eval_j(Box::point(Rational(0), Rational(-1)), 64), NotInUpperHalfPlane);
    EXPECT_THROW(eval_j(sqrt_rational(Rational(2)), 64), NotInUpperHalfPlane);
}

TEST(EvalJ, MatchesSeriesOracleWithDerivatives)
{
    // direct summation of the oracle series at a point with small |q|
    const Laurent o = oracle_j(60);
    const std::complex<double> tau(0.1, 1.2);
    const std::complex<double> two_pi_i(0, 2 * M_PI);
    const std::complex<double> q = std::exp(two_pi_i * tau);
    std::array<std::complex<double>, 4> ref{};
    for (const auto& [n, c] : o) {
        std::complex<double> t = c.get_d() * std::pow(q, n);
        for (int k = 0; k < 4; ++k) {
            ref[static_cast<std::size_t>(k)] += t;
            t *= two_pi_i * static_cast<double>(n);
        }
    }
    JDerivatives v = eval_j_derivs(Box::point(Rational(1, 10), Rational(6, 5)), 128);
    const std::array<Box, 4> got{v.j, v.d1, v.d2, v.d3};
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_LT(std::abs(cplx(got[k]) - ref[k]) / std::abs(ref[k]), 1e-10) << k;
}

TEST(EvalJ, WeightTwoTransformationOfDerivative)
{
    // j(-1/tau) = j(tau) and j'(-1/tau) = tau^2 j'(tau)
    const Box tau = Box::point(Rational(1, 5), Rational(3, 2));
    const Box s = Box(-1) / tau;
    JDerivatives a = eval_j_derivs(tau, 128), b = eval_j_derivs(s, 128);
    EXPECT_TRUE(overlaps(a.j, b.j));
    EXPECT_TRUE(overlaps(b.d1, tau * tau * a.d1));
}

TEST(Schwarzian, ResidualVanishes)
{
    EXPECT_TRUE(schwarzian_residual(num(2) * i_(), 128).contains_zero());
    Box lo = schwarzian_residual(num(3) * i_(), 128);
    Box hi = schwarzian_residual(num(3) * i_(), 256);
    EXPECT_TRUE(lo.contains_zero());
    EXPECT_TRUE(hi.contains_zero());
    EXPECT_LT(hi.width(), lo.width());
    EXPECT_THROW(schwarzian_residual(i_(), 128), SingularPoint);
    for (const Box& tau : {Box::point(Rational(1, 3), Rational(1, 2)), Box::point(Rational(-2, 5), Rational(7, 4))})
        EXPECT_TRUE(schwarzian_residual(tau, 160).contains_zero());
}

TEST(Schwarzian, UnhalvedCoefficientDoesNotVanish)
{
    JDerivatives v = eval_j_derivs(Box::point(Rational(1, 10), Rational(13, 10)), 128);
    const Box& j = v.j;
    Box s = v.d3 / v.d1 - Box(Rational(3, 2)) * pow(v.d2 / v.d1, 2);
    Box coef = (j * j - Box(1968) * j + Box(2654208)) / (j * j * pow(j - Box(1728), 2));
    EXPECT_FALSE((s + coef * v.d1 * v.d1).contains_zero());
    EXPECT_TRUE((s + coef * v.d1 * v.d1 / Box(2)).contains_zero());
}

TEST(PhiN, LevelOne)
{
    BiPoly p = phi_n(1);
    EXPECT_EQ(p.terms(), (BiPoly::Terms{{{1, 0}, Integer(1)}, {{0, 1}, Integer(-1)}}));
}

TEST(PhiN, PrimeLevelsMatchExactSeriesOracle)
{
    for (int p : {2, 3, 5}) {
        BiPoly got = phi_n(p);
        BiPoly want = oracle_phi_prime(p);
        EXPECT_EQ(got, want) << "level " << p;
    }
    // a well-known coefficient of Phi_2
    EXPECT_EQ(phi_n(2).coefficient(2, 1), Integer(1488));
    EXPECT_EQ(phi_n(2).coefficient(0, 0), Integer("-157464000000000"));
}

TEST(PhiN, ValidationProperties)
{
    for (int n = 2; n <= 5; ++n) {
        BiPoly p = phi_n(n);
        EXPECT_TRUE(p.is_symmetric());
        EXPECT_GE(p.total_degree(), 2 * n);
        EXPECT_EQ(p.degree_x(), psi(n));
        EXPECT_EQ(p.coefficient(psi(n), 0), 1);
        // independent precision schedule gives the same coefficients
        EXPECT_EQ(phi_n(n, PhiPolicy{.start_bits = 1000}), p);
    }
    EXPECT_EQ(psi(4), 6);
    EXPECT_EQ(psi(6), 12);
}

TEST(PhiN, VanishesOnIsogenousPairs)
{
    BiPoly p = phi_n(2);
    const long bits = static_cast<long>(p.max_coefficient_bits()) + 256;
    PrecisionScope scope(bits);
    EXPECT_TRUE(p.evaluate(eval_j(i_(), bits), eval_j(num(2) * i_(), bits)).contains_zero());
    EXPECT_FALSE(p.evaluate(eval_j(i_(), bits), eval_j(num(3) * i_(), bits)).contains_zero());
}

TEST(Forms, ReducedFormsAndClassNumbers)
{
    EXPECT_EQ(reduced_forms(-4), (std::vector<BQF>{{1, 0, 1}}));
    EXPECT_EQ(reduced_forms(-3), (std::vector<BQF>{{1, 1, 1}}));
    EXPECT_EQ(reduced_forms(-23).size(), 3u);
    EXPECT_THROW(reduced_forms(-5), std::invalid_argument);
    EXPECT_THROW(reduced_forms(4), std::invalid_argument);
    // brute-force oracle over a box of forms
    for (long d = -3; d >= -160; --d) {
        if (((d % 4) + 4) % 4 > 1)
            continue;
        std::size_t count = 0;
        for (long a = 1; a <= -d; ++a)
            for (long b = -a; b <= a; ++b)
                for (long c = a; 4 * a * c <= b * b - d; ++c) {
                    BQF f{a, b, c};
                    if (f.discriminant() == d && f.is_reduced() && f.is_primitive())
                        ++count;
                }
        EXPECT_EQ(reduced_forms(d).size(), count) << d;
    }
}

TEST(Forms, ReductionIsEquivalenceInvariant)
{
    for (const auto& f : reduced_forms(-56)) {
        // act by [[2, 1], [1, 1]] and [[1, 3], [0, 1]]
        Integer a = f.a, b = f.b, c = f.c;
        BQF g{a * 4 + b * 2 + c, a * 4 + b * 3 + c * 2, a + b + c};
        BQF h{a, b + 6 * a, 9 * a + 3 * b + c};
        EXPECT_EQ(reduce(g), f);
        EXPECT_EQ(reduce(h), f);
        EXPECT_TRUE(reduce(g).is_reduced());
    }
}

TEST(ClassPolynomial, Examples)
{
    EXPECT_EQ(class_polynomial(-3), qpoly({0, 1}));
    EXPECT_EQ(class_polynomial(-4), qpoly({-1728, 1}));
    EXPECT_EQ(class_polynomial(-7), qpoly({3375, 1}));
    EXPECT_EQ(class_polynomial(-8), qpoly({-8000, 1}));
    QPoly h = class_polynomial(-23);
    EXPECT_EQ(h.degree(), 3);
    EXPECT_EQ(h.lead(), Rational(1));
    for (const auto& c : h.coeffs())
        EXPECT_EQ(c.den(), 1);
    auto f = factor_rational_poly(h);
    ASSERT_EQ(f.factors.size(), 1u);
    EXPECT_EQ(f.factors[0].first.degree(), 3);
    EXPECT_THROW(class_polynomial(-403), std::invalid_argument);
}

TEST(ClassPolynomial, RootsAgreeWithEvaluation)
{
    for (long d : {-15L, -20L, -23L, -39L, -56L}) {
        QPoly h = class_polynomial(d);
        for (const auto& f : reduced_forms(d)) {
            AlgebraicNumber s = singular_modulus(f);
            EXPECT_TRUE(is_root_of(s, h));
            s.refine(Rational(1, 1L << 40));
            EXPECT_TRUE(overlaps(s.box(), eval_j(cm_point(f), 128)));
        }
    }
}

TEST(SingularModulus, ClassNumberOne)
{
    const std::map<long, long> known{{-3, 0}, {-4, 1728}, {-7, -3375}, {-8, 8000}, {-11, -32768}};
    for (const auto& [d, j] : known) {
        auto forms = reduced_forms(d);
        ASSERT_EQ(forms.size(), 1u);
        AlgebraicNumber s = singular_modulus(forms[0]);
        ASSERT_TRUE(s.is_rational());
        EXPECT_EQ(*s.rational_value(), Rational(j));
    }
}

TEST(FormOf, RoundTripsWithCmPoint)
{
    for (const auto& f : reduced_forms(-71)) {
        AlgebraicNumber t = cm_point(f);
        EXPECT_EQ(form_of(t), f);
    }
    EXPECT_THROW(form_of(i_() * real_root(Rational(2), 4)), std::invalid_argument);
}

TEST(IsogenyLevel, Examples)
{
    auto r1 = find_isogeny_level(i_(), num(2) * i_(), 5);
    EXPECT_EQ(r1.status, IsogenyLevel::Status::found);
    EXPECT_EQ(r1.level, 2);
    auto r2 = find_isogeny_level(i_(), i_(), 5);
    EXPECT_EQ(r2.status, IsogenyLevel::Status::found);
    EXPECT_EQ(r2.level, 1);
    AlgebraicNumber rho = (num(1) + sqrt_rational(Rational(-3))) / num(2);
    auto r3 = find_isogeny_level(i_(), rho, 5);
    EXPECT_EQ(r3.status, IsogenyLevel::Status::none);
    // special against non-special: no rational orbit matrix
    AlgebraicNumber w = i_() * real_root(Rational(2), 4);
    EXPECT_EQ(find_isogeny_level(i_(), w, 5).status, IsogenyLevel::Status::none);
    // two non-special points: level from the orbit matrix
    auto r4 = find_isogeny_level(w, num(3) * w, 5);
    EXPECT_EQ(r4.status, IsogenyLevel::Status::found);
    EXPECT_EQ(r4.level, 3);
    EXPECT_EQ(find_isogeny_level(w, num(7) * w, 5).status, IsogenyLevel::Status::none);
}

TEST(IsogenyLevel, AgreesWithOrbitDeterminant)
{
    const std::vector<AlgebraicNumber> base{i_(), (num(1) + sqrt_rational(Rational(-7))) / num(2),
                                            sqrt_rational(Rational(-2))};
    const std::vector<std::array<long, 4>> gs{{1, 1, 0, 1}, {3, 0, 0, 1}, {1, 0, 0, 2}, {2, 1, 0, 2}};
    for (const auto& x : base)
        for (const auto& m : gs) {
            AlgebraicNumber y = *act(Moebius::rational(m[0], m[1], m[2], m[3]), x);
            SCOPED_TRACE(m[0] * 1000 + m[1] * 100 + m[2] * 10 + m[3]);
            auto lvl = find_isogeny_level(x, y, 5);
            auto g = orbit_equiv(x, y, rationals());
            ASSERT_TRUE(g);
            Integer det = primitive_form(*g).det;
            if (det <= 5) {
                EXPECT_EQ(lvl.status, IsogenyLevel::Status::found);
                EXPECT_EQ(Integer(lvl.level), det);
            } else {
                EXPECT_EQ(lvl.status, IsogenyLevel::Status::none);
            }
        }
}
