#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "modtower/audit.hpp"

using namespace modtower;

namespace {

Box rect(double re_lo, double re_hi, double im_lo, double im_hi)
{
    auto q = [](double d) { return Rational(mpq_class(d)); };
    return Box(Interval(q(re_lo), q(re_hi)), Interval(q(im_lo), q(im_hi)));
}

KhovanskiiCertificate one_dim(const std::string& p, Box b)
{
    return {1, {KhovanskiiCertificate::parse(p, 1)}, {b}};
}

InstanceSymbol sym(const std::string& name, const std::string& value, std::vector<std::string> images = {},
                   bool parameter = false)
{
    InstanceSymbol s;
    s.name = name;
    s.value = parse_algebraic(value);
    s.images = std::move(images);
    s.parameter = parameter;
    return s;
}

FormalInstance exp_instance(std::vector<InstanceSymbol> syms, std::vector<std::string> rel, std::optional<long> trdeg)
{
    FormalInstance f;
    f.kind = InstanceKind::exp;
    f.symbols = std::move(syms);
    f.relations = std::move(rel);
    f.certificates.trdeg = trdeg;
    return f;
}

FormalInstance modular_instance(std::vector<InstanceSymbol> syms, std::optional<long> trdeg)
{
    FormalInstance f;
    f.kind = InstanceKind::modular;
    f.symbols = std::move(syms);
    f.certificates.trdeg = trdeg;
    return f;
}

// ---- independent oracle: complex Newton iteration in long double ------------

using C = std::complex<long double>;

C eval_terms(const MPoly& p, const std::vector<C>& v)
{
    C acc = 0;
    for (const auto& [e, c] : p.terms()) {
        C m = static_cast<long double>(c.to_double());
        for (std::size_t i = 0; i < e.size(); ++i)
            m *= std::pow(v[i], e[i]);
        acc += m;
    }
    return acc;
}

struct OracleZero {
    bool converged = false;
    std::vector<C> z;
    long double det = 0;
};

OracleZero newton_oracle(const KhovanskiiCertificate& cert)
{
    const std::size_t n = static_cast<std::size_t>(cert.n);
    std::vector<C> z;
    for (const Box& b : cert.box)
        z.emplace_back(b.mid_re().to_double(), b.mid_im().to_double());
    auto vars = [&](const std::vector<C>& x) {
        std::vector<C> v = x;
        for (const C& t : x)
            v.push_back(std::exp(t));
        return v;
    };
    auto jac = [&](const std::vector<C>& x) {
        auto v = vars(x);
        std::vector<std::vector<C>> j(n, std::vector<C>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                j[i][k] = eval_terms(cert.polys[i].derivative(k), v) +
                          eval_terms(cert.polys[i].derivative(n + k), v) * v[n + k];
        return j;
    };
    OracleZero out;
    for (int it = 0; it < 100; ++it) {
        auto v = vars(z);
        std::vector<C> f;
        for (const auto& p : cert.polys)
            f.push_back(eval_terms(p, v));
        auto j = jac(z);
        std::vector<C> step(n);
        if (n == 1) {
            if (std::abs(j[0][0]) == 0)
                return out;
            step[0] = f[0] / j[0][0];
        } else if (n == 2) {
            C d = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if (std::abs(d) == 0)
                return out;
            step[0] = (j[1][1] * f[0] - j[0][1] * f[1]) / d;
            step[1] = (j[0][0] * f[1] - j[1][0] * f[0]) / d;
        }
        for (std::size_t i = 0; i < n; ++i)
            z[i] -= step[i];
        long double s = 0;
        for (const auto& c : step)
            s += std::abs(c);
        if (s < 1e-15L) {
            out.converged = true;
            break;
        }
    }
    out.z = z;
    auto j = jac(z);
    out.det = n == 1 ? std::abs(j[0][0]) : std::abs(j[0][0] * j[1][1] - j[0][1] * j[1][0]);
    return out;
}

bool inside(const Box& b, C z)
{
    return b.re().lo().to_double() <= z.real() && z.real() <= b.re().hi().to_double() &&
           b.im().lo().to_double() <= z.imag() && z.imag() <= b.im().hi().to_double();
}

} // namespace

// ---- parsers -----------------------------------------------------------------

TEST(Parsers, AlgebraicLiterals)
{
    EXPECT_EQ(minimal_polynomial(parse_algebraic("i")), qpoly({1, 0, 1}));
    EXPECT_EQ(minimal_polynomial(parse_algebraic("sqrt(-3)")), qpoly({3, 0, 1}));
    EXPECT_EQ(minimal_polynomial(parse_algebraic("2^(1/4)*i")), qpoly({-2, 0, 0, 0, 1}));
    EXPECT_EQ(minimal_polynomial(parse_algebraic("(1+sqrt(-3))/2")), qpoly({1, -1, 1}));
    EXPECT_EQ(parse_algebraic("3/4").rational_value(), Rational(3, 4));
    EXPECT_EQ(parse_algebraic("-1.25").rational_value(), Rational(-5, 4));
    EXPECT_EQ(parse_algebraic("2^-2").rational_value(), Rational(1, 4));
    // leading zeros are decimal, not octal
    EXPECT_EQ(parse_algebraic("0.68").rational_value(), Rational(17, 25));
    EXPECT_EQ(parse_algebraic("010").rational_value(), Rational(10));
    EXPECT_EQ(Rational::parse("09/010"), Rational(9, 10));
    EXPECT_GT(parse_algebraic("2^(1/4)*i").approx_im(), 1.18);
    EXPECT_THROW(parse_algebraic("sqrt("), ParseError);
    EXPECT_THROW(parse_algebraic("x + 1"), ParseError);
    EXPECT_THROW(parse_algebraic("1/0"), ParseError);
    EXPECT_THROW(parse_algebraic("(-2)^(1/2)"), ParseError);
}

TEST(Parsers, Polynomials)
{
    std::vector<std::string> names{"u1", "u2"};
    MPoly p = parse_polynomial("u2 - u1^2", names);
    EXPECT_EQ(p.total_degree(), 2);
    EXPECT_EQ(parse_polynomial(to_string(p, names), names), p);
    EXPECT_EQ(parse_polynomial("(u1 + 1)^2 - u1^2 - 2*u1", names), MPoly::constant(2, 1));
    EXPECT_EQ(parse_polynomial("u1/2", names) * MPoly::constant(2, 2), MPoly::variable(2, 0));
    EXPECT_THROW(parse_polynomial("u1/u2", names), ParseError);
    EXPECT_THROW(parse_polynomial("u3", names), ParseError);
    EXPECT_EQ(KhovanskiiCertificate::parse("W^2 - 2*W + 1", 1), KhovanskiiCertificate::parse("w1^2-2*w1+1", 1));
    MPoly q = parse_polynomial("u1^3*u2 + u2", names);
    EXPECT_EQ(q.derivative(0), parse_polynomial("3*u1^2*u2", names));
}

// ---- Khovanskii ----------------------------------------------------------------

TEST(Khovanskii, WorkedExamples)
{
    auto log2 = verify_khovanskii(one_dim("W - 2", rect(0.68, 0.71, -0.02, 0.02)));
    EXPECT_EQ(log2.verdict, KhovanskiiVerdict::valid) << log2.reason;
    ASSERT_EQ(log2.zero.size(), 1u);
    EXPECT_TRUE(overlaps(log2.zero[0], Box(log(Interval(2)))));

    auto zero = verify_khovanskii(one_dim("W - 1", rect(-0.1, 0.1, -0.1, 0.1)));
    EXPECT_EQ(zero.verdict, KhovanskiiVerdict::valid) << zero.reason;
    EXPECT_TRUE(zero.zero[0].contains_zero());

    auto dbl = verify_khovanskii(one_dim("W^2 - 2*W + 1", rect(-0.1, 0.1, -0.1, 0.1)));
    EXPECT_EQ(dbl.verdict, KhovanskiiVerdict::invalid);
    EXPECT_NE(dbl.reason.find("Jacobian"), std::string::npos);
}

TEST(Khovanskii, NoZeroInBox)
{
    auto r = verify_khovanskii(one_dim("W - 2", rect(-0.1, 0.1, -0.1, 0.1)));
    EXPECT_EQ(r.verdict, KhovanskiiVerdict::invalid);
}

TEST(Khovanskii, WideBoxIsUndecided)
{
    // exp(z) - 2 has zeros log 2 + 2 pi i k; a box meeting two of them cannot certify uniqueness
    auto r = verify_khovanskii(one_dim("W - 2", rect(0.0, 1.5, -4, 10)), {64, 256});
    EXPECT_EQ(r.verdict, KhovanskiiVerdict::undecided);
}

TEST(Khovanskii, MixedSystem)
{
    // z - w + 1 = 0 has its zero at 0 (exp(0) = 1); the double zero makes it degenerate
    auto r = verify_khovanskii(one_dim("z - W + 1", rect(-0.1, 0.1, -0.1, 0.1)));
    EXPECT_EQ(r.verdict, KhovanskiiVerdict::invalid);
    // z + w - 1: derivative 1 + exp(z) = 2 at the zero z = 0
    r = verify_khovanskii(one_dim("z + W - 1", rect(-0.1, 0.1, -0.1, 0.1)));
    EXPECT_EQ(r.verdict, KhovanskiiVerdict::valid);
}

TEST(Khovanskii, TwoDimensionalAndIndependence)
{
    KhovanskiiCertificate c{2,
                            {KhovanskiiCertificate::parse("w1*w2 - 6", 2), KhovanskiiCertificate::parse("w1 - 2", 2)},
                            {rect(0.68, 0.71, -0.02, 0.02), rect(1.09, 1.11, -0.02, 0.02)}};
    auto r = verify_khovanskii(c);
    ASSERT_EQ(r.verdict, KhovanskiiVerdict::valid) << r.reason;
    EXPECT_TRUE(overlaps(r.zero[1], Box(log(Interval(3)))));

    // the witnesses log 2, log 3 have no small Q-linear relation
    std::vector<LinValue> vals;
    for (std::size_t i = 0; i < 2; ++i)
        vals.push_back(LinValue::numeric([c, i](long bits) { return (*khovanskii_zero(c, bits))[i]; }));
    EXPECT_EQ(no_small_linear_relation(vals, 10, primitive_element({AlgebraicNumber(0)})).status,
              RelationStatus::verified);
}

TEST(Khovanskii, NarrowedZero)
{
    auto c = one_dim("W - 2", rect(0.6, 0.8, -0.1, 0.1));
    auto z = khovanskii_zero(c, 200);
    ASSERT_TRUE(z);
    Rational w(Integer(1), Integer(1) << 200);
    EXPECT_LT((*z)[0].width(), w);
    PrecisionScope p(300);
    EXPECT_TRUE(overlaps((*z)[0], Box(log(Interval(2)))));
}

TEST(Khovanskii, PerturbedCertificatesNeverFalselyValid)
{
    std::vector<KhovanskiiCertificate> seeds = {
        one_dim("W - 2", rect(0.68, 0.71, -0.02, 0.02)),
        one_dim("W - 1", rect(-0.1, 0.1, -0.1, 0.1)),
        one_dim("W^2 - 2*W + 1", rect(-0.1, 0.1, -0.1, 0.1)),
        {2,
         {KhovanskiiCertificate::parse("w1*w2 - 6", 2), KhovanskiiCertificate::parse("w1 - 2 + z2/10", 2)},
         {rect(0.6, 0.8, -0.1, 0.1), rect(1.0, 1.2, -0.1, 0.1)}},
    };
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> shift(-0.08, 0.08), scale(0.3, 2.5), coef(-0.05, 0.05);
    int valid = 0, total = 0;
    for (int trial = 0; trial < 24; ++trial) {
        KhovanskiiCertificate c = seeds[static_cast<std::size_t>(trial) % seeds.size()];
        for (auto& p : c.polys)
            p = p + MPoly::constant(p.nvars(), Rational(mpq_class(coef(rng))));
        for (auto& b : c.box) {
            double cr = b.mid_re().to_double() + shift(rng), ci = b.mid_im().to_double() + shift(rng);
            double hr = b.re().width().to_double() / 2 * scale(rng), hi = b.im().width().to_double() / 2 * scale(rng);
            b = rect(cr - hr, cr + hr, ci - hi, ci + hi);
        }
        auto r = verify_khovanskii(c, {64, 512});
        ++total;
        if (r.verdict != KhovanskiiVerdict::valid)
            continue;
        ++valid;
        OracleZero o = newton_oracle(c);
        ASSERT_TRUE(o.converged) << "trial " << trial;
        for (std::size_t i = 0; i < c.box.size(); ++i)
            EXPECT_TRUE(inside(c.box[i], o.z[i])) << "trial " << trial;
        EXPECT_GT(o.det, 1e-6L) << "trial " << trial;
    }
    EXPECT_GE(total, 20);
    EXPECT_GT(valid, 0);
}

// ---- SC ----------------------------------------------------------------------------

TEST(AuditSC, Examples)
{
    auto r = audit_sc_instance(exp_instance({sym("x1", "1", {"u1"})}, {}, 1));
    EXPECT_EQ(r.verdict, Verdict::satisfied);
    EXPECT_EQ(r.checks[0].rhs, 1);

    r = audit_sc_instance(exp_instance({sym("x1", "1", {"u1"}), sym("x2", "2", {"u2"})}, {"u2 - u1^2"}, 1));
    EXPECT_EQ(r.verdict, Verdict::satisfied);
    // oracle: nonzero rationals span a one-dimensional Q-space
    EXPECT_EQ(r.checks[0].rhs, 1);
    EXPECT_TRUE(r.checks[0].rhs_exact);

    r = audit_sc_instance(exp_instance({sym("x1", "1", {"u1"})}, {}, 0));
    EXPECT_EQ(r.verdict, Verdict::violation_candidate);
    EXPECT_FALSE(r.notes.empty());
}

TEST(AuditSC, IrrationalAndRelative)
{
    auto r = audit_sc_instance(exp_instance({sym("x1", "sqrt(2)"), sym("x2", "1 + sqrt(2)")}, {}, 1));
    EXPECT_EQ(r.checks[0].rhs, 2);
    EXPECT_EQ(r.verdict, Verdict::violation_candidate);

    // l.dim(x | t) with x = 2, t = 1 is 0
    r = audit_sc_instance(exp_instance({sym("x1", "2"), sym("t1", "1", {}, true)}, {}, 0));
    EXPECT_EQ(r.checks[0].name, "SC relative");
    EXPECT_EQ(r.checks[0].rhs, 0);
    EXPECT_EQ(r.verdict, Verdict::satisfied);
}

TEST(AuditSC, Rejections)
{
    EXPECT_THROW(audit_sc_instance(exp_instance({sym("x1", "1", {"u1"}), sym("x2", "2", {"u2"})}, {"u2 - u1^3"}, 1)),
                 InconsistentInstance);
    EXPECT_THROW(audit_sc_instance(exp_instance({sym("x1", "1")}, {}, std::nullopt)), MissingCertificate);
    EXPECT_THROW(audit_sc_instance(exp_instance({sym("x1", "1")}, {}, 5)), InconsistentInstance);
    EXPECT_THROW(audit_sc_instance(exp_instance({sym("x1", "1"), sym("x1", "2")}, {}, 1)), std::invalid_argument);
    EXPECT_THROW(audit_sc_instance(exp_instance({sym("x1", "1")}, {"y"}, 1)), ParseError);
}

TEST(AuditSC, NumericWitness)
{
    InstanceSymbol pi;
    pi.name = "x1";
    {
        PrecisionScope p(200);
        pi.enclosure = Box(pi_interval());
    }
    pi.images = {"u1"};
    auto r = audit_sc_instance(exp_instance({pi}, {}, 1));
    EXPECT_EQ(r.verdict, Verdict::satisfied);
    EXPECT_FALSE(r.checks[0].rhs_exact);
    r = audit_sc_instance(exp_instance({pi}, {}, 0));
    EXPECT_EQ(r.verdict, Verdict::undecided);
}

TEST(AuditSC, MonotoneUnderPrecision)
{
    std::vector<FormalInstance> cases = {
        exp_instance({sym("x1", "1", {"u1"})}, {}, 1),
        exp_instance({sym("x1", "1", {"u1"}), sym("x2", "2", {"u2"})}, {"u2 - u1^2"}, 1),
        exp_instance({sym("x1", "1", {"u1"}), sym("x2", "3", {"u2"})}, {"u2 - u1^3", "x2 - 3*x1"}, 1),
        exp_instance({sym("x1", "1", {"u1"})}, {}, 0),
    };
    for (const auto& inst : cases) {
        AuditPolicy lo, hi;
        lo.bits = 96;
        hi.bits = 192;
        EXPECT_EQ(audit_sc_instance(inst, lo).verdict, audit_sc_instance(inst, hi).verdict);
    }
}

// ---- MSCD / MSC ---------------------------------------------------------------------

TEST(AuditMSCD, SpecialPoints)
{
    auto r = audit_mscd_instance(modular_instance({sym("z1", "i"), sym("z2", "2*i")}, 0));
    EXPECT_EQ(r.verdict, Verdict::satisfied);
    ASSERT_EQ(r.schneider.size(), 2u);
    EXPECT_EQ(r.schneider[0].discriminant, -4);
    EXPECT_EQ(r.schneider[0].class_polynomial, qpoly({-1728, 1}));
    EXPECT_EQ(r.schneider[1].discriminant, -16);
    EXPECT_EQ(r.schneider[1].class_polynomial, qpoly({-287496, 1}));
    EXPECT_EQ(r.schneider[1].j_value.rational_value(), Rational(287496));
    for (const auto& c : r.checks)
        EXPECT_EQ(c.rhs, 0);
}

TEST(AuditMSCD, NonSpecialPoint)
{
    auto inst = modular_instance({sym("z1", "2^(1/4)*i")}, 1);
    auto r = audit_mscd_instance(inst);
    const AuditCheck* msc = nullptr;
    const AuditCheck* mscd = nullptr;
    for (const auto& c : r.checks)
        (c.name == "MSC" ? msc : mscd) = &c;
    ASSERT_TRUE(msc && mscd);
    EXPECT_EQ(msc->verdict, Verdict::satisfied);
    EXPECT_EQ(msc->rhs, 1);
    EXPECT_EQ(mscd->rhs, 3);
    EXPECT_EQ(mscd->verdict, Verdict::undecided);
    EXPECT_EQ(r.verdict, Verdict::undecided);

    inst.certificates.trdeg_mscd = 3;
    EXPECT_EQ(audit_mscd_instance(inst).verdict, Verdict::satisfied);
    inst.certificates.trdeg_mscd = 2;
    EXPECT_EQ(audit_mscd_instance(inst).verdict, Verdict::violation_candidate);
}

TEST(AuditMSCD, EmptyAndRejections)
{
    EXPECT_EQ(audit_mscd_instance(modular_instance({}, 0)).verdict, Verdict::satisfied);
    EXPECT_THROW(audit_mscd_instance(modular_instance({sym("z1", "i")}, 1)), InconsistentInstance);
    EXPECT_THROW(audit_mscd_instance(modular_instance({sym("z1", "-i")}, 0)), NotInUpperHalfPlane);

    auto ok = modular_instance({sym("z1", "i", {"J1"})}, 0);
    ok.relations = {"J1 - 1728"};
    EXPECT_EQ(audit_mscd_instance(ok).verdict, Verdict::satisfied);
    ok.relations = {"J1 - 1727"};
    EXPECT_THROW(audit_mscd_instance(ok), InconsistentInstance);
}

TEST(AuditMSCD, SameOrbitPoints)
{
    // i*2^(1/4) and 2*i*2^(1/4) share a G(Q)-orbit
    auto r = audit_mscd_instance(modular_instance({sym("z1", "2^(1/4)*i"), sym("z2", "2*2^(1/4)*i")}, 1));
    EXPECT_EQ(r.checks[1].rhs, 1);
    EXPECT_EQ(r.checks[1].verdict, Verdict::satisfied);
}

// ---- convenient ------------------------------------------------------------------

TEST(Convenient, Examples)
{
    auto inst = exp_instance({sym("t1", "1", {"u1"})}, {}, 1);
    inst.certificates.dim_e = 0;
    auto r = check_convenient(inst, Flavor::exp);
    EXPECT_EQ(r.verdict, Verdict::convenient);
    EXPECT_TRUE(r.conditional);

    auto j = modular_instance({sym("t1", "i")}, 0);
    j.certificates.dim_j = 0;
    EXPECT_EQ(check_convenient(j, Flavor::j).verdict, Verdict::convenient);

    auto two = exp_instance({sym("t1", "1", {"u1"}), sym("t2", "2", {"u2"})}, {"u2 - u1^2"}, 1);
    two.certificates.dim_e = 0;
    r = check_convenient(two, Flavor::exp);
    EXPECT_EQ(r.verdict, Verdict::convenient);
    EXPECT_EQ(r.checks[0].rhs, 1);

    two.certificates.dim_e = 1;
    EXPECT_EQ(check_convenient(two, Flavor::exp).verdict, Verdict::not_convenient);

    auto missing = exp_instance({sym("t1", "1")}, {}, 1);
    EXPECT_THROW(check_convenient(missing, Flavor::exp), MissingCertificate);
    EXPECT_THROW(check_convenient(j, Flavor::exp), std::invalid_argument);
}
