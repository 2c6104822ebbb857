#include "modtower/audit.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <set>

#include <Eigen/Dense>

namespace modtower {

namespace {

Rational pow2_neg(long bits)
{
    Integer d = 1;
    d <<= static_cast<unsigned long>(bits);
    return Rational(Integer(1), d);
}

Box enclose(const AlgebraicNumber& a, long bits)
{
    a.refine(pow2_neg(bits));
    return a.box();
}

std::complex<double> approx(const Box& b) { return {b.mid_re().to_double(), b.mid_im().to_double()}; }

Box from_complex(std::complex<double> z)
{
    return Box::point(Rational(mpq_class(z.real())), Rational(mpq_class(z.imag())));
}

/// Value and derivative along one complex direction.
struct Dual {
    Box v, d;
    Dual(const Rational& c) : v(c), d(0) {}
    Dual(Box value, Box deriv) : v(std::move(value)), d(std::move(deriv)) {}
    friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
    friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
};

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Laplace expansion; the systems here are small.
template <class T>
T determinant(const Matrix<T>& m)
{
    const std::size_t n = m.size();
    if (n == 1)
        return m[0][0];
    T acc(Rational(0));
    for (std::size_t col = 0; col < n; ++col) {
        Matrix<T> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<T> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != col)
                    row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        T term = m[0][col] * determinant(minor);
        acc = (col % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

class System {
public:
    explicit System(const KhovanskiiCertificate& c) : n_(static_cast<std::size_t>(c.n)), p_(c.polys)
    {
        if (c.n < 1 || c.polys.size() != n_ || c.box.size() != n_)
            throw std::invalid_argument("Khovanskii certificate: need n >= 1 polynomials and box components");
        for (const MPoly& p : p_)
            if (p.nvars() != 2 * n_)
                throw std::invalid_argument("Khovanskii certificate: polynomials must have 2n variables");
        for (std::size_t i = 0; i < n_; ++i) {
            dz_.emplace_back();
            dw_.emplace_back();
            for (std::size_t k = 0; k < n_; ++k) {
                dz_[i].push_back(p_[i].derivative(k));
                dw_[i].push_back(p_[i].derivative(n_ + k));
            }
        }
    }

    std::size_t n() const { return n_; }

    std::vector<Box> args(const std::vector<Box>& z) const
    {
        std::vector<Box> v = z;
        for (const Box& x : z)
            v.push_back(exp(x));
        return v;
    }

    std::vector<Box> value(const std::vector<Box>& z) const
    {
        auto v = args(z);
        std::vector<Box> f;
        for (const MPoly& p : p_)
            f.push_back(p.evaluate(v));
        return f;
    }

    Matrix<Box> jacobian(const std::vector<Box>& z) const
    {
        auto v = args(z);
        Matrix<Box> j(n_, std::vector<Box>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k)
                j[i][k] = dz_[i][k].evaluate(v) + dw_[i][k].evaluate(v) * v[n_ + k];
        return j;
    }

    /// det J along z = point + t e_k, differentiated in t.
    Dual det_along(const std::vector<Box>& point, std::size_t k, const Box& t) const
    {
        std::vector<Dual> v;
        for (std::size_t j = 0; j < n_; ++j)
            v.push_back(j == k ? Dual(t, Box(1)) : Dual(point[j], Box(0)));
        for (std::size_t j = 0; j < n_; ++j) {
            Box e = exp(v[j].v);
            v.push_back(Dual(e, e * v[j].d));
        }
        Matrix<Dual> m(n_, std::vector<Dual>(n_, Dual(Rational(0))));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t c = 0; c < n_; ++c)
                m[i][c] = dz_[i][c].evaluate(v) + dw_[i][c].evaluate(v) * v[n_ + c];
        return determinant(m);
    }

private:
    std::size_t n_;
    std::vector<MPoly> p_;
    Matrix<MPoly> dz_, dw_;
};

std::vector<Box> midpoints(const std::vector<Box>& x)
{
    std::vector<Box> c;
    for (const Box& b : x)
        c.push_back(Box::point(round_down(b.mid_re(), working_precision()), round_down(b.mid_im(), working_precision())));
    return c;
}

/// Krawczyk image of the box, or nullopt when no preconditioner is available.
std::optional<std::vector<Box>> krawczyk(const System& s, const std::vector<Box>& x)
{
    const std::size_t n = s.n();
    auto c = midpoints(x);
    auto jx = s.jacobian(x);
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = approx(jx[i][k]);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    if (!lu.isInvertible())
        return std::nullopt;
    Eigen::MatrixXcd yd = lu.inverse();
    if (!yd.allFinite())
        return std::nullopt;
    Matrix<Box> y(n, std::vector<Box>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            y[i][k] = from_complex(yd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    auto fc = s.value(c);
    std::vector<Box> k(n);
    for (std::size_t i = 0; i < n; ++i) {
        Box acc = c[i];
        for (std::size_t l = 0; l < n; ++l)
            acc -= y[i][l] * fc[l];
        for (std::size_t l = 0; l < n; ++l) {
            Box r = Box(i == l ? 1 : 0);
            for (std::size_t q = 0; q < n; ++q)
                r -= y[i][q] * jx[q][l];
            acc += r * (x[l] - c[l]);
        }
        k[i] = acc;
    }
    return k;
}

bool strictly_inside(const std::vector<Box>& inner, const std::vector<Box>& outer)
{
    for (std::size_t i = 0; i < inner.size(); ++i)
        if (!outer[i].contains_in_interior(inner[i]))
            return false;
    return true;
}

/// A zero of det J on a coordinate line through the box centre, certified by
/// a one-dimensional Krawczyk test.
bool jacobian_vanishes_in_box(const System& s, const std::vector<Box>& x)
{
    auto c = midpoints(x);
    for (std::size_t k = 0; k < s.n(); ++k) {
        Dual whole = s.det_along(c, k, x[k]);
        std::complex<double> slope = approx(whole.d);
        if (slope == std::complex<double>(0) || !std::isfinite(std::abs(slope)))
            continue;
        Box y = from_complex(1.0 / slope);
        Box g_c = s.det_along(c, k, c[k]).v;
        Box kk = c[k] - y * g_c + (Box(1) - y * whole.d) * (x[k] - c[k]);
        if (x[k].contains_in_interior(kk))
            return true;
    }
    return false;
}

} // namespace

std::vector<std::string> KhovanskiiCertificate::variable_names(int n)
{
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i)
        v.push_back("z" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        v.push_back("w" + std::to_string(i));
    return v;
}

MPoly KhovanskiiCertificate::parse(const std::string& text, int n)
{
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (n == 1) {
        try {
            return parse_polynomial(lower, {"z", "w"});
        } catch (const ParseError&) {
        }
    }
    return parse_polynomial(lower, variable_names(n));
}

std::string to_string(KhovanskiiVerdict v)
{
    switch (v) {
    case KhovanskiiVerdict::valid: return "valid";
    case KhovanskiiVerdict::invalid: return "invalid";
    case KhovanskiiVerdict::undecided: return "undecided";
    }
    return "?";
}

KhovanskiiReport verify_khovanskii(const KhovanskiiCertificate& cert, const KhovanskiiPolicy& policy)
{
    System s(cert);
    KhovanskiiReport rep;
    for (long bits = policy.start_bits; bits <= policy.max_bits; bits *= 2) {
        PrecisionScope scope(bits);
        rep.bits = bits;
        const auto& x = cert.box;
        auto fx = s.value(x);
        for (std::size_t i = 0; i < fx.size(); ++i)
            if (!fx[i].contains_zero()) {
                rep.verdict = KhovanskiiVerdict::invalid;
                rep.reason = "f" + std::to_string(i + 1) + " has no zero in the box";
                rep.jacobian_det = determinant(s.jacobian(x));
                return rep;
            }
        rep.jacobian_det = determinant(s.jacobian(x));
        auto k = krawczyk(s, x);
        bool zero = k && strictly_inside(*k, x);
        if (zero && !rep.jacobian_det.contains_zero()) {
            rep.verdict = KhovanskiiVerdict::valid;
            rep.reason = "unique zero certified; Jacobian determinant nonzero on the box";
            for (std::size_t i = 0; i < x.size(); ++i)
                rep.zero.push_back(intersect((*k)[i], x[i]));
            return rep;
        }
        if (jacobian_vanishes_in_box(s, x)) {
            rep.verdict = KhovanskiiVerdict::invalid;
            rep.reason = "Jacobian determinant vanishes at a point of the box";
            return rep;
        }
    }
    rep.verdict = KhovanskiiVerdict::undecided;
    rep.reason = "precision budget exhausted";
    return rep;
}

std::optional<std::vector<Box>> khovanskii_zero(const KhovanskiiCertificate& cert, long bits)
{
    System s(cert);
    PrecisionScope scope(bits + 64);
    std::vector<Box> x = cert.box;
    auto k = krawczyk(s, x);
    if (!k || !strictly_inside(*k, x))
        return std::nullopt;
    const Rational target = pow2_neg(bits);
    for (int iter = 0; iter < 400; ++iter) {
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = intersect((*k)[i], x[i]);
        if (std::all_of(x.begin(), x.end(), [&](const Box& b) { return b.width() < target; }))
            return x;
        k = krawczyk(s, x);
        if (!k)
            return std::nullopt;
    }
    return std::nullopt;
}

// ---- formal instances -------------------------------------------------------

std::vector<std::string> FormalInstance::variable_names() const
{
    std::vector<std::string> names;
    for (const auto& s : symbols)
        names.push_back(s.name);
    for (const auto& s : symbols)
        for (const auto& im : s.images)
            if (!im.empty())
                names.push_back(im);
    return names;
}

void FormalInstance::validate() const
{
    std::set<std::string> seen;
    for (const auto& name : variable_names())
        if (!seen.insert(name).second)
            throw std::invalid_argument("duplicate symbol name '" + name + "'");
    const std::size_t max_images = kind == InstanceKind::exp ? 1 : 3;
    for (const auto& s : symbols) {
        if (s.images.size() > max_images)
            throw std::invalid_argument("symbol '" + s.name + "' declares too many images");
        if (!s.value && !s.enclosure)
            throw std::invalid_argument("symbol '" + s.name + "' has neither a value nor a witness enclosure");
    }
    for (const auto* c : {&certificates.trdeg, &certificates.trdeg_mscd, &certificates.dim_e, &certificates.dim_j})
        if (*c && **c < 0)
            throw std::invalid_argument("certificates must be nonnegative");
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::satisfied: return "SATISFIED";
    case Verdict::violation_candidate: return "VIOLATION-CANDIDATE";
    case Verdict::undecided: return "UNDECIDED";
    case Verdict::convenient: return "CONVENIENT";
    case Verdict::not_convenient: return "NOT-CONVENIENT";
    }
    return "?";
}

std::vector<Box> witness_values(const FormalInstance& inst, long bits)
{
    PrecisionScope scope(bits);
    std::vector<Box> sym;
    for (const auto& s : inst.symbols)
        sym.push_back(s.value ? enclose(*s.value, bits) : *s.enclosure);
    std::vector<Box> out = sym;
    for (std::size_t i = 0; i < inst.symbols.size(); ++i) {
        const auto& s = inst.symbols[i];
        if (s.images.empty())
            continue;
        if (inst.kind == InstanceKind::exp) {
            if (!s.images[0].empty())
                out.push_back(exp(sym[i]));
            continue;
        }
        JDerivatives d = s.value ? eval_j_derivs(*s.value, bits) : eval_j_derivs(sym[i], bits);
        const Box vals[3] = {d.j, d.d1, d.d2};
        for (std::size_t k = 0; k < s.images.size(); ++k)
            if (!s.images[k].empty())
                out.push_back(vals[k]);
    }
    return out;
}

void check_relations(const FormalInstance& inst, long bits)
{
    if (inst.relations.empty())
        return;
    auto names = inst.variable_names();
    auto vals = witness_values(inst, bits);
    PrecisionScope scope(bits);
    for (const auto& text : inst.relations) {
        MPoly p = parse_polynomial(text, names);
        Box v = p.evaluate(vals);
        if (!v.contains_zero())
            throw InconsistentInstance("relation \"" + text + "\" is nonzero at the witness: " + to_string(v));
    }
}

namespace {

long required(const std::optional<long>& c, const char* name)
{
    if (!c)
        throw MissingCertificate(std::string("missing certificate '") + name + "'");
    return *c;
}

Verdict inequality(long lhs, long rhs) { return lhs >= rhs ? Verdict::satisfied : Verdict::violation_candidate; }

Verdict combine(const std::vector<AuditCheck>& checks)
{
    bool undecided = false;
    for (const auto& c : checks) {
        if (c.verdict == Verdict::violation_candidate || c.verdict == Verdict::not_convenient)
            return c.verdict;
        undecided |= c.verdict == Verdict::undecided;
    }
    if (undecided)
        return Verdict::undecided;
    return checks.empty() ? Verdict::satisfied : checks.front().verdict;
}

bool all_exact(const FormalInstance& inst)
{
    return std::all_of(inst.symbols.begin(), inst.symbols.end(), [](const auto& s) { return s.value.has_value(); });
}

/// l.dim_Q(x | t) with x the non-parameter symbols (or all symbols).
struct LinearDimension {
    long value = 0;
    bool exact = true;
    std::string statement;
};

LinearDimension linear_dimension(const FormalInstance& inst, bool split_parameters, const AuditPolicy& policy)
{
    std::vector<AlgebraicNumber> xs, ts;
    std::vector<LinValue> xv, tv;
    for (const auto& s : inst.symbols) {
        bool is_t = split_parameters && s.parameter;
        LinValue lv = s.value ? LinValue::of(*s.value)
                              : LinValue::numeric([b = *s.enclosure](long) { return b; });
        (is_t ? tv : xv).push_back(lv);
        if (s.value)
            (is_t ? ts : xs).push_back(*s.value);
    }
    LinearDimension out;
    if (all_exact(inst)) {
        out.value = ldim(rationals(), xs, ts);
        out.statement = "exact linear dimension over Q";
        return out;
    }
    // greedy rank at bounded height: parameters first, then x
    std::vector<LinValue> chosen;
    long t_rank = 0;
    auto try_add = [&](const LinValue& v) {
        auto cand = chosen;
        cand.push_back(v);
        if (no_small_linear_relation(cand, policy.height, rationals(), policy.bits * 8).status ==
            RelationStatus::verified) {
            chosen = std::move(cand);
            return true;
        }
        return false;
    };
    for (const auto& v : tv)
        t_rank += try_add(v);
    long total = t_rank;
    for (const auto& v : xv)
        total += try_add(v);
    out.value = total - t_rank;
    out.exact = false;
    out.statement = "no Q-linear relation of height <= " + std::to_string(policy.height) +
                    " among a maximal subset; bounded-height estimate only";
    return out;
}

} // namespace

AuditReport audit_sc_instance(const FormalInstance& inst, const AuditPolicy& policy)
{
    if (inst.kind != InstanceKind::exp)
        throw std::invalid_argument("SC audit needs an exp instance");
    inst.validate();
    const long trdeg = required(inst.certificates.trdeg, "trdeg");
    if (trdeg > 2 * static_cast<long>(inst.symbols.size()))
        throw InconsistentInstance("trdeg certificate exceeds the number of symbols and images");
    check_relations(inst, policy.bits);

    const bool relative = std::any_of(inst.symbols.begin(), inst.symbols.end(), [](const auto& s) { return s.parameter; });
    LinearDimension ld = linear_dimension(inst, true, policy);
    long n_x = std::count_if(inst.symbols.begin(), inst.symbols.end(), [](const auto& s) { return !s.parameter; });

    AuditCheck c;
    c.name = relative ? "SC relative" : "SC";
    c.lhs = trdeg;
    c.rhs = ld.value;
    c.rhs_exact = ld.exact;
    if (ld.exact)
        c.verdict = inequality(trdeg, ld.value);
    else
        c.verdict = trdeg >= n_x ? Verdict::satisfied : Verdict::undecided;
    c.statement = "trdeg_cert = " + std::to_string(trdeg) + (trdeg >= c.rhs ? " >= " : " < ") +
                  std::string(relative ? "l.dim_Q(x|t) = " : "l.dim_Q(x) = ") + std::to_string(c.rhs) + " (" +
                  ld.statement + ")";

    AuditReport rep;
    rep.kind = "sc";
    rep.checks.push_back(c);
    rep.verdict = combine(rep.checks);
    if (rep.verdict == Verdict::violation_candidate)
        rep.notes.push_back("counterexample candidate for review; not a disproof");
    return rep;
}

AuditReport audit_mscd_instance(const FormalInstance& inst, const AuditPolicy& policy)
{
    if (inst.kind != InstanceKind::modular)
        throw std::invalid_argument("MSCD audit needs a modular instance");
    inst.validate();
    const long trdeg = required(inst.certificates.trdeg, "trdeg");
    std::vector<AlgebraicNumber> zs;
    for (const auto& s : inst.symbols) {
        if (!s.value)
            throw std::invalid_argument("symbol '" + s.name + "' needs an exact algebraic value");
        if (in_upper_half_plane(*s.value) != Tri::yes)
            throw NotInUpperHalfPlane();
        zs.push_back(*s.value);
    }
    check_relations(inst, policy.bits);

    AuditReport rep;
    rep.kind = "mscd";
    const long d = dim_G_sigma(zs);

    if (d == 0) {
        for (std::size_t i = 0; i < zs.size(); ++i) {
            BQF f = form_of(zs[i]);
            long disc = f.discriminant().get_si();
            SchneiderCertificate sc{inst.symbols[i].name, disc, class_polynomial(disc, policy.class_policy),
                                    singular_modulus(reduce(f), policy.class_policy)};
            if (!is_root_of(sc.j_value, sc.class_polynomial) ||
                !overlaps(eval_j(zs[i], policy.bits), enclose(sc.j_value, policy.bits)))
                throw std::logic_error("singular modulus certificate failed to verify");
            rep.schneider.push_back(std::move(sc));
        }
        if (trdeg != 0)
            throw InconsistentInstance("trdeg certificate is positive but every z and j(z) is algebraic");
        rep.notes.push_back("all points special: trdeg_Q Q(z, j(z)) = 0 certified by class polynomials");
    }

    AuditCheck msc;
    msc.name = "MSC";
    msc.lhs = trdeg;
    msc.rhs = d;
    msc.verdict = inequality(trdeg, d);
    msc.statement = "trdeg Q(z, j(z)) = " + std::to_string(trdeg) + (trdeg >= d ? " >= " : " < ") +
                    "dim_G(z|Sigma) = " + std::to_string(d);

    AuditCheck mscd;
    mscd.name = "MSCD";
    mscd.rhs = 3 * d;
    if (inst.certificates.trdeg_mscd) {
        mscd.lhs = *inst.certificates.trdeg_mscd;
        if (mscd.lhs > 4 * static_cast<long>(zs.size()))
            throw InconsistentInstance("trdeg_mscd certificate exceeds the number of symbols and images");
        if (mscd.lhs < trdeg)
            throw InconsistentInstance("trdeg_mscd certificate is smaller than trdeg");
        mscd.verdict = inequality(mscd.lhs, mscd.rhs);
        mscd.statement = "trdeg Q(z, j, j', j'') = " + std::to_string(mscd.lhs) +
                         (mscd.lhs >= mscd.rhs ? " >= " : " < ") + "3 dim_G(z|Sigma) = " + std::to_string(mscd.rhs);
    } else {
        mscd.lhs = trdeg;
        mscd.verdict = trdeg >= mscd.rhs ? Verdict::satisfied : Verdict::undecided;
        mscd.statement = "no trdeg_mscd certificate; trdeg Q(z, j(z)) = " + std::to_string(trdeg) +
                         " is a lower bound for the left side, 3 dim_G(z|Sigma) = " + std::to_string(mscd.rhs);
    }
    rep.checks = {mscd, msc};
    rep.verdict = combine(rep.checks);
    if (rep.verdict == Verdict::violation_candidate)
        rep.notes.push_back("counterexample candidate for review; not a disproof");
    return rep;
}

AuditReport check_convenient(const FormalInstance& inst, Flavor flavor, const AuditPolicy& policy)
{
    inst.validate();
    const long trdeg = required(inst.certificates.trdeg, "trdeg");
    AuditReport rep;
    rep.kind = flavor == Flavor::exp ? "convenient-exp" : "convenient-j";
    check_relations(inst, policy.bits);
    AuditCheck c;
    c.name = "convenient";
    c.lhs = trdeg;
    if (flavor == Flavor::exp) {
        if (inst.kind != InstanceKind::exp)
            throw std::invalid_argument("exp flavor needs an exp instance");
        const long dim_e = required(inst.certificates.dim_e, "dim_e");
        LinearDimension ld = linear_dimension(inst, false, policy);
        c.rhs = ld.value + dim_e;
        c.rhs_exact = ld.exact;
        c.statement = "trdeg_cert = " + std::to_string(trdeg) + (trdeg == c.rhs ? " = " : " != ") +
                      "l.dim_Q(t) + dim_e_cert = " + std::to_string(ld.value) + " + " + std::to_string(dim_e) +
                      " (" + ld.statement + ")";
    } else {
        if (inst.kind != InstanceKind::modular)
            throw std::invalid_argument("j flavor needs a modular instance");
        const long dim_j = required(inst.certificates.dim_j, "dim_j");
        std::vector<AlgebraicNumber> ts;
        for (const auto& s : inst.symbols) {
            if (!s.value)
                throw std::invalid_argument("symbol '" + s.name + "' needs an exact algebraic value");
            if (in_upper_half_plane(*s.value) != Tri::yes)
                throw NotInUpperHalfPlane();
            ts.push_back(*s.value);
        }
        const long d = dim_G_sigma(ts);
        c.rhs = 3 * d + dim_j;
        c.statement = "trdeg_cert = " + std::to_string(trdeg) + (trdeg == c.rhs ? " = " : " != ") +
                      "3 dim_G(t|Sigma) + dim_j_cert = 3*" + std::to_string(d) + " + " + std::to_string(dim_j);
    }
    if (!c.rhs_exact)
        c.verdict = Verdict::undecided;
    else
        c.verdict = trdeg == c.rhs ? Verdict::convenient : Verdict::not_convenient;
    rep.checks.push_back(c);
    rep.verdict = c.verdict;
    rep.notes.push_back("conditional on the declared certificates");
    return rep;
}

} // namespace modtower
