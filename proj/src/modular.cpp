#include "modtower/modular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numeric>

namespace modtower {

// ---- q-expansions ---------------------------------------------------------------------

QExpansion::QExpansion(int valuation, std::vector<Integer> coeffs, int order) : val_(valuation), order_(order)
{
    if (order < valuation)
        throw std::invalid_argument("QExpansion: order below valuation");
    coeffs.resize(static_cast<std::size_t>(order - valuation), Integer(0));
    std::size_t lead = 0;
    while (lead < coeffs.size() && sgn(coeffs[lead]) == 0)
        ++lead;
    val_ += static_cast<int>(lead);
    c_.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(lead), coeffs.end());
}

Integer QExpansion::coefficient(int n) const
{
    if (n >= order_)
        throw std::out_of_range("QExpansion: coefficient beyond truncation order");
    if (n < val_)
        return 0;
    return c_[static_cast<std::size_t>(n - val_)];
}

QExpansion QExpansion::truncated(int order) const
{
    if (order > order_)
        throw std::out_of_range("QExpansion: cannot extend truncation order");
    std::vector<Integer> c;
    for (int n = val_; n < order; ++n)
        c.push_back(coefficient(n));
    return QExpansion(std::min(val_, order), c, order);
}

QExpansion QExpansion::q_derivative() const
{
    std::vector<Integer> c = c_;
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] *= val_ + static_cast<int>(k);
    return QExpansion(val_, c, order_);
}

QExpansion operator+(const QExpansion& a, const QExpansion& b)
{
    const int order = std::min(a.order_, b.order_);
    const int val = std::min({a.val_, b.val_, order});
    std::vector<Integer> c;
    for (int n = val; n < order; ++n)
        c.push_back((n < a.val_ ? Integer(0) : a.coefficient(n)) + (n < b.val_ ? Integer(0) : b.coefficient(n)));
    return QExpansion(val, c, order);
}

QExpansion operator*(const Integer& s, const QExpansion& a)
{
    std::vector<Integer> c = a.c_;
    for (auto& x : c)
        x *= s;
    return QExpansion(a.val_, c, a.order_);
}

QExpansion operator-(const QExpansion& a, const QExpansion& b) { return a + Integer(-1) * b; }

QExpansion operator*(const QExpansion& a, const QExpansion& b)
{
    const int val = a.val_ + b.val_;
    const int order = std::min(a.order_ + b.val_, b.order_ + a.val_);
    const int len = order - val;
    if (len <= 0)
        return QExpansion(order, {}, order);
    std::vector<Integer> c(static_cast<std::size_t>(len), Integer(0));
    for (std::size_t i = 0; i < a.c_.size() && static_cast<int>(i) < len; ++i) {
        if (sgn(a.c_[i]) == 0)
            continue;
        for (std::size_t j = 0; j < b.c_.size() && static_cast<int>(i + j) < len; ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    }
    return QExpansion(val, c, order);
}

QExpansion operator/(const QExpansion& a, const QExpansion& b)
{
    if (b.c_.empty() || abs(b.c_[0]) != 1)
        throw std::domain_error("QExpansion: divisor must have leading coefficient +-1");
    const int val = a.val_ - b.val_;
    const int rel = std::min(a.order_ - a.val_, b.order_ - b.val_);
    const int order = val + rel;
    std::vector<Integer> c(static_cast<std::size_t>(std::max(rel, 0)), Integer(0));
    for (int k = 0; k < rel; ++k) {
        Integer s = a.coefficient(a.val_ + k);
        for (int i = 1; i <= k && static_cast<std::size_t>(i) < b.c_.size(); ++i)
            s -= b.c_[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(k - i)];
        c[static_cast<std::size_t>(k)] = s * b.c_[0];
    }
    return QExpansion(val, c, order);
}

namespace {

/// sigma_k(n) for 0 <= n < limit (sigma_k(0) = 0).
std::vector<Integer> divisor_sums(int k, int limit)
{
    std::vector<Integer> s(static_cast<std::size_t>(std::max(limit, 1)), Integer(0));
    for (int d = 1; d < limit; ++d) {
        Integer dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        for (int m = d; m < limit; m += d)
            s[static_cast<std::size_t>(m)] += dk;
    }
    return s;
}

long eisenstein_factor(int k)
{
    switch (k) {
    case 2:
        return -24;
    case 4:
        return 240;
    case 6:
        return -504;
    default:
        throw std::invalid_argument("eisenstein: weight must be 2, 4 or 6");
    }
}

/// prod_{n >= 1} (1 - q^n) to O(q^order) from the pentagonal number theorem.
QExpansion euler_product(int order)
{
    std::vector<Integer> c(static_cast<std::size_t>(std::max(order, 0)), Integer(0));
    for (long k = 0;; ++k) {
        long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
        if (e1 >= order)
            break;
        int sign = k % 2 == 0 ? 1 : -1;
        c[static_cast<std::size_t>(e1)] += sign;
        if (k > 0 && e2 < order)
            c[static_cast<std::size_t>(e2)] += sign;
    }
    return QExpansion(0, c, order);
}

} // namespace

QExpansion eisenstein_qexp(int k, int order)
{
    const long f = eisenstein_factor(k);
    auto s = divisor_sums(k - 1, order);
    std::vector<Integer> c(static_cast<std::size_t>(std::max(order, 0)), Integer(0));
    for (int n = 0; n < order; ++n)
        c[static_cast<std::size_t>(n)] = n == 0 ? Integer(1) : f * s[static_cast<std::size_t>(n)];
    return QExpansion(0, c, order);
}

QExpansion delta_qexp(int order)
{
    if (order <= 1)
        return QExpansion(order, {}, order);
    QExpansion p = euler_product(order - 1);
    QExpansion p2 = p * p, p3 = p2 * p, p6 = p3 * p3, p12 = p6 * p6, p24 = p12 * p12;
    return QExpansion(1, p24.coefficients(), order);
}

QExpansion j_qexp(int order)
{
    if (order < 1)
        throw std::invalid_argument("j_qexp: order must be at least 1");
    QExpansion e4 = eisenstein_qexp(4, order + 1);
    return (e4 * e4 * e4) / delta_qexp(order + 2);
}

// ---- numerical evaluation -----------------------------------------------------------

namespace {

/// Monomial E2^e[0] E4^e[1] E6^e[2] Delta^-e[3].
using Mono = std::array<int, 4>;
using Sym = std::map<Mono, Rational>;

void add_term(Sym& s, const Mono& m, const Rational& c)
{
    Rational& t = s[m];
    t = t + c;
    if (t.is_zero())
        s.erase(m);
}

/// q d/dq on polynomials in E2, E4, E6, 1/Delta (Ramanujan's identities).
Sym derive(const Sym& p)
{
    // D(var) as symbolic polynomials
    static const std::array<Sym, 4> dvar = {
        Sym{{{2, 0, 0, 0}, Rational(1, 12)}, {{0, 1, 0, 0}, Rational(-1, 12)}},
        Sym{{{1, 1, 0, 0}, Rational(1, 3)}, {{0, 0, 1, 0}, Rational(-1, 3)}},
        Sym{{{1, 0, 1, 0}, Rational(1, 2)}, {{0, 2, 0, 0}, Rational(-1, 2)}},
        Sym{{{1, 0, 0, 1}, Rational(-1)}},
    };
    Sym out;
    for (const auto& [m, c] : p)
        for (std::size_t v = 0; v < 4; ++v) {
            if (m[v] == 0)
                continue;
            Mono base = m;
            --base[v];
            for (const auto& [dm, dc] : dvar[v]) {
                Mono t;
                for (std::size_t k = 0; k < 4; ++k)
                    t[k] = base[k] + dm[k];
                add_term(out, t, c * dc * Rational(m[v]));
            }
        }
    return out;
}

struct JSymbols {
    Sym j, d1, d2, d3;
};

const JSymbols& j_symbols()
{
    static const JSymbols s = [] {
        JSymbols r;
        r.j = Sym{{{0, 3, 0, 1}, Rational(1)}};
        r.d1 = derive(r.j);
        r.d2 = derive(r.d1);
        r.d3 = derive(r.d2);
        return r;
    }();
    return s;
}

Box eval_sym(const Sym& p, const std::array<Box, 4>& v)
{
    Box acc(0);
    for (const auto& [m, c] : p) {
        Box t(c);
        for (std::size_t k = 0; k < 4; ++k)
            if (m[k] > 0)
                t *= pow(v[k], m[k]);
        acc += t;
    }
    return acc;
}

/// Rational bound C (M+1)^k r^(M+1) / (1 - rho) on sum_{n > M} C n^k r^n.
std::optional<Rational> tail_bound(long c, int k, const Rational& r, int m)
{
    Rational growth = Rational(m + 2) / Rational(m + 1);
    Rational rho = r;
    for (int i = 0; i < k; ++i)
        rho = rho * growth;
    if (!(rho < Rational(1)))
        return std::nullopt;
    Rational t = Rational(c);
    for (int i = 0; i < k; ++i)
        t = t * Rational(m + 1);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), r.num().get_mpz_t(), static_cast<unsigned long>(m + 1));
    mpz_pow_ui(den.get_mpz_t(), r.den().get_mpz_t(), static_cast<unsigned long>(m + 1));
    t = t * Rational(num, den) / (Rational(1) - rho);
    return round_up(t, 64);
}

struct SeriesBound {
    long c;
    int k;
};

/// 1 + f sum_{n=1}^M sigma_{k-1}(n) q^n with a tail disc.
Box eisenstein_value(int k, const Box& q, const Rational& r, int m)
{
    const long f = eisenstein_factor(k);
    auto s = divisor_sums(k - 1, m + 1);
    Box acc(0);
    for (int n = m; n >= 1; --n)
        acc = (acc + Box(Rational(Integer(f * s[static_cast<std::size_t>(n)])))) * q;
    // |sigma_1(n)| <= n^2, sigma_{k-1}(n) <= 2 n^(k-1) for k >= 4
    const SeriesBound b = k == 2 ? SeriesBound{24, 2} : SeriesBound{2 * std::abs(f), k - 1};
    auto tail = tail_bound(b.c, b.k, r, m);
    if (!tail)
        throw std::logic_error("eisenstein_value: q too large for the tail bound");
    return inflate(Box(1) + acc, *tail);
}

int terms_for(const Rational& r, long bits)
{
    // r^M M^5 * 2^11 < 2^-(bits + 8)
    const double lr = -std::log2(r.to_double());
    int m = 8;
    while (m * lr - 5.0 * std::log2(m + 1.0) < static_cast<double>(bits) + 24.0)
        m += 4;
    return m;
}

struct Reduction {
    Integer a = 1, b = 0, c = 0, d = 1; // gamma with gamma tau in the fundamental domain
};

Reduction reduce_point(const Box& tau)
{
    Rational x = tau.mid_re(), y = tau.mid_im();
    Reduction g;
    for (int it = 0; it < 4096; ++it) {
        Integer n = floor(x + Rational(1, 2));
        if (sgn(n) != 0) {
            x = x - Rational(n);
            // T^-n gamma
            g.a -= n * g.c;
            g.b -= n * g.d;
        }
        Rational norm = x * x + y * y;
        if (!(norm < Rational(1)))
            break;
        x = round_down(-x / norm, 160);
        y = round_down(y / norm, 160);
        // S gamma with S = [[0, -1], [1, 0]]
        Integer a = g.a, b = g.b;
        g.a = -g.c;
        g.b = -g.d;
        g.c = a;
        g.d = b;
    }
    return g;
}

JDerivatives evaluate(const Box& tau, long bits, bool derivatives)
{
    if (!tau.im().positive())
        throw NotInUpperHalfPlane();
    PrecisionScope scope(bits + 32);
    Reduction g = reduce_point(tau);
    const Box ctd = Box(Rational(g.c)) * tau + Box(Rational(g.d));
    const Box w = (Box(Rational(g.a)) * tau + Box(Rational(g.b))) / ctd;
    if (!w.im().positive())
        throw NotInUpperHalfPlane();
    const Box q = qparam(w);
    const Rational r = mag_upper(q);
    if (!(r < Rational(1, 2)))
        throw std::domain_error("eval_j: reduction did not reach the fundamental domain");
    const int m = terms_for(r, bits);

    const Box e4 = eisenstein_value(4, q, r, m), e6 = eisenstein_value(6, q, r, m);
    const Box delta = (pow(e4, 3) - pow(e6, 2)) / Box(1728);
    const Box dinv = Box(1) / delta;
    const auto& sym = j_symbols();
    JDerivatives out;
    out.j = pow(e4, 3) * dinv;
    if (!derivatives)
        return out;
    const Box e2 = eisenstein_value(2, q, r, m);
    const std::array<Box, 4> v{e2, e4, e6, dinv};
    const Box tpi = times_i(Box(Interval(2) * pi_interval()));
    const Box j1 = tpi * eval_sym(sym.d1, v);
    const Box j2 = pow(tpi, 2) * eval_sym(sym.d2, v);
    const Box j3 = pow(tpi, 3) * eval_sym(sym.d3, v);
    // chain rule for w = gamma tau, det gamma = 1
    const Box inv = Box(1) / ctd;
    const Box w1 = pow(inv, 2);
    const Box w2 = Box(Rational(Integer(-2 * g.c))) * pow(inv, 3);
    const Box w3 = Box(Rational(Integer(6 * g.c * g.c))) * pow(inv, 4);
    out.d1 = j1 * w1;
    out.d2 = j2 * pow(w1, 2) + j1 * w2;
    out.d3 = j3 * pow(w1, 3) + Box(3) * j2 * w1 * w2 + j1 * w3;
    return out;
}

Box point_box(const AlgebraicNumber& tau, long bits)
{
    if (in_upper_half_plane(tau) != Tri::yes)
        throw NotInUpperHalfPlane();
    Integer scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(bits + 16));
    tau.refine(Rational(Integer(1), scale));
    return tau.box();
}

} // namespace

Box eval_j(const Box& tau, long bits) { return evaluate(tau, bits, false).j; }

Box eval_j(const AlgebraicNumber& tau, long bits) { return eval_j(point_box(tau, bits), bits); }

JDerivatives eval_j_derivs(const Box& tau, long bits) { return evaluate(tau, bits, true); }

JDerivatives eval_j_derivs(const AlgebraicNumber& tau, long bits)
{
    return eval_j_derivs(point_box(tau, bits), bits);
}

Box schwarzian_residual(const Box& tau, long bits)
{
    JDerivatives v = eval_j_derivs(tau, bits);
    PrecisionScope scope(bits + 32);
    if (v.j.contains_zero() || (v.j - Box(1728)).contains_zero())
        throw SingularPoint("schwarzian_residual: j meets 0 or 1728 at this precision");
    if (v.d1.contains_zero())
        throw SingularPoint("schwarzian_residual: j' meets 0 at this precision");
    const Box& j = v.j;
    const Box a = v.d3 / v.d1;
    const Box b = v.d2 / v.d1;
    const Box num = j * j - Box(1968) * j + Box(2654208);
    const Box den = Box(2) * j * j * pow(j - Box(1728), 2);
    return a - Box(Rational(3, 2)) * b * b + num / den * v.d1 * v.d1;
}

Box schwarzian_residual(const AlgebraicNumber& tau, long bits)
{
    return schwarzian_residual(point_box(tau, bits), bits);
}

// ---- BiPoly ------------------------------------------------------------------------

BiPoly::BiPoly(const Terms& terms)
{
    Terms clean;
    for (const auto& [e, c] : terms)
        if (sgn(c) != 0)
            clean[e] = c;
    symmetric_ = std::all_of(clean.begin(), clean.end(), [&](const auto& t) {
        auto it = clean.find({t.first.second, t.first.first});
        return it != clean.end() && it->second == t.second;
    });
    for (const auto& [e, c] : clean)
        if (!symmetric_ || e.first <= e.second)
            stored_[e] = c;
}

Integer BiPoly::coefficient(int a, int b) const
{
    if (symmetric_ && a > b)
        std::swap(a, b);
    auto it = stored_.find({a, b});
    return it == stored_.end() ? Integer(0) : it->second;
}

BiPoly::Terms BiPoly::terms() const
{
    Terms out = stored_;
    if (symmetric_)
        for (const auto& [e, c] : stored_)
            out[{e.second, e.first}] = c;
    return out;
}

int BiPoly::degree_x() const
{
    int d = -1;
    for (const auto& [e, c] : terms())
        d = std::max(d, e.first);
    return d;
}

int BiPoly::degree_y() const
{
    int d = -1;
    for (const auto& [e, c] : terms())
        d = std::max(d, e.second);
    return d;
}

int BiPoly::total_degree() const
{
    int d = -1;
    for (const auto& [e, c] : stored_)
        d = std::max(d, e.first + e.second);
    return d;
}

std::size_t BiPoly::max_coefficient_bits() const
{
    std::size_t b = 0;
    for (const auto& [e, c] : stored_)
        b = std::max(b, bit_length(abs(c)));
    return b;
}

namespace {

template <class T, class Lift>
T evaluate_terms(const BiPoly::Terms& terms, int dx, int dy, const T& x, const T& y, const T& zero, Lift lift)
{
    T acc = zero;
    for (int a = dx; a >= 0; --a) {
        T row = zero;
        for (int b = dy; b >= 0; --b) {
            auto it = terms.find({a, b});
            row = row * y;
            if (it != terms.end())
                row = row + lift(it->second);
        }
        acc = acc * x + row;
    }
    return acc;
}

} // namespace

Box BiPoly::evaluate(const Box& x, const Box& y) const
{
    return evaluate_terms(terms(), degree_x(), degree_y(), x, y, Box(0),
                          [](const Integer& c) { return Box(Rational(c)); });
}

NFElem BiPoly::evaluate(const NFElem& x, const NFElem& y) const
{
    return evaluate_terms(terms(), degree_x(), degree_y(), x, y, NFElem(), [](const Integer& c) {
        return NFElem(Rational(c));
    });
}

QPoly BiPoly::specialize_x(const Rational& x) const
{
    std::vector<Rational> c(static_cast<std::size_t>(std::max(degree_y() + 1, 0)), Rational(0));
    for (const auto& [e, v] : terms()) {
        Rational t(v);
        for (int i = 0; i < e.first; ++i)
            t = t * x;
        c[static_cast<std::size_t>(e.second)] = c[static_cast<std::size_t>(e.second)] + t;
    }
    return QPoly(c);
}

// ---- modular polynomials ----------------------------------------------------------------

namespace {

struct Triple {
    long a, b, d;
};

std::vector<Triple> isogeny_triples(int n)
{
    std::vector<Triple> out;
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0)
            continue;
        const long d = n / a;
        for (long b = 0; b < d; ++b)
            if (std::gcd(std::gcd(a, b), d) == 1)
                out.push_back({a, b, d});
    }
    return out;
}

/// The unique integer in the box, if the box pins one down.
std::optional<Integer> round_box(const Box& z)
{
    if (!z.im().contains_zero() || !(z.im().width() < Rational(1)) || !(z.re().width() < Rational(1)))
        return std::nullopt;
    Integer lo = ceil(z.re().lo()), hi = floor(z.re().hi());
    if (lo != hi)
        return std::nullopt;
    return lo;
}

/// Coefficients (ascending) of prod (X - r).
std::vector<Box> from_roots(const std::vector<Box>& roots)
{
    std::vector<Box> c{Box(1)};
    for (const auto& r : roots) {
        std::vector<Box> next(c.size() + 1, Box(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

/// Monomial coefficients of the interpolant through (x_i, v_i).
std::vector<Box> interpolate(const std::vector<Box>& x, std::vector<Box> v)
{
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i)
            v[i] = (v[i] - v[i - 1]) / (x[i] - x[i - k]);
    std::vector<Box> c{v[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        // c <- c * (X - x_i) + v_i
        std::vector<Box> next(c.size() + 1, Box(0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= x[i] * c[k];
        }
        next[0] += v[i];
        c = std::move(next);
    }
    return c;
}

std::optional<BiPoly> phi_attempt(int n, long bits)
{
    PrecisionScope scope(bits);
    const auto triples = isogeny_triples(n);
    const std::size_t deg = triples.size();
    const std::size_t nodes = deg + 1;
    std::vector<Box> ys;
    std::vector<std::vector<Box>> coeffs; // coeffs[m][k]
    for (std::size_t m = 0; m < nodes; ++m) {
        const Box tau = Box::point(Rational(static_cast<long>(m), static_cast<long>(nodes)), Rational(1));
        ys.push_back(eval_j(tau, bits));
        std::vector<Box> roots;
        for (const auto& t : triples) {
            Box s = (Box(Rational(t.a)) * tau + Box(Rational(t.b))) / Box(Rational(t.d));
            roots.push_back(eval_j(s, bits));
        }
        coeffs.push_back(from_roots(roots));
    }
    BiPoly::Terms terms;
    terms[{static_cast<int>(deg), 0}] = 1;
    for (std::size_t k = 0; k < deg; ++k) {
        std::vector<Box> v;
        for (std::size_t m = 0; m < nodes; ++m)
            v.push_back(coeffs[m][k]);
        auto c = interpolate(ys, v);
        for (std::size_t l = 0; l < c.size(); ++l) {
            auto z = round_box(c[l]);
            if (!z)
                return std::nullopt;
            if (sgn(*z) != 0)
                terms[{static_cast<int>(k), static_cast<int>(l)}] = *z;
        }
    }
    return BiPoly(terms);
}

void validate_phi(int n, const BiPoly& p)
{
    if (n >= 2 && !p.is_symmetric())
        throw ComputationFailure("phi_n: result is not symmetric");
    if (n >= 2 && p.total_degree() < 2 * n)
        throw ComputationFailure("phi_n: total degree below 2N");
    const long bits = static_cast<long>(p.max_coefficient_bits()) + 64L * p.degree_x() + 128;
    PrecisionScope scope(bits);
    const std::array<Box, 2> samples{Box::point(Rational(0), Rational(11, 10)),
                                     Box::point(Rational(3, 10), Rational(17, 10))};
    for (const auto& tau : samples) {
        Box v = p.evaluate(eval_j(tau, bits), eval_j(Box(Rational(n)) * tau, bits));
        if (!v.contains_zero())
            throw ComputationFailure("phi_n: Phi_N(j(tau), j(N tau)) does not vanish");
    }
}

std::mutex g_phi_mutex;
std::map<int, BiPoly> g_phi_cache;

} // namespace

int psi(int n) { return static_cast<int>(isogeny_triples(n).size()); }

BiPoly phi_n(int n, const PhiPolicy& policy)
{
    if (n < 1 || n > policy.max_level)
        throw std::invalid_argument("phi_n: level out of range");
    if (n == 1)
        return BiPoly(BiPoly::Terms{{{1, 0}, Integer(1)}, {{0, 1}, Integer(-1)}});
    {
        std::lock_guard lock(g_phi_mutex);
        if (auto it = g_phi_cache.find(n); it != g_phi_cache.end())
            return it->second;
    }
    for (long bits = policy.start_bits; bits <= policy.max_bits; bits *= 2) {
        auto first = phi_attempt(n, bits);
        if (!first)
            continue;
        auto second = phi_attempt(n, 2 * bits);
        if (!second || !(*second == *first))
            throw ComputationFailure("phi_n: coefficients differ between working precisions");
        validate_phi(n, *first);
        std::lock_guard lock(g_phi_mutex);
        g_phi_cache.emplace(n, *first);
        return *first;
    }
    throw ComputationFailure("phi_n: rounding stayed ambiguous up to the precision limit");
}

// ---- binary quadratic forms ---------------------------------------------------------

bool BQF::is_reduced() const
{
    if (abs(b) > a || a > c)
        return false;
    if ((abs(b) == a || a == c) && sgn(b) < 0)
        return false;
    return true;
}

bool BQF::is_primitive() const { return gcd(gcd(a, b), c) == 1; }

BQF reduce(const BQF& f)
{
    if (sgn(f.a) <= 0 || sgn(f.discriminant()) >= 0)
        throw std::invalid_argument("reduce: form is not positive definite");
    const Integer disc = f.discriminant();
    BQF g = f;
    for (;;) {
        // normalize b into (-a, a]
        if (g.b > g.a || g.b <= -g.a) {
            Integer two_a = 2 * g.a;
            Integer k = floor(Rational(g.a - g.b, two_a));
            g.b += two_a * k;
            g.c = (g.b * g.b - disc) / (4 * g.a);
        }
        if (g.a > g.c) {
            g = BQF{g.c, -g.b, g.a};
            continue;
        }
        break;
    }
    if (g.a == g.c && sgn(g.b) < 0)
        g.b = -g.b;
    return g;
}

std::vector<BQF> reduced_forms(long d)
{
    if (d >= 0 || ((d % 4) + 4) % 4 > 1)
        throw std::invalid_argument("reduced_forms: discriminant must be negative and 0 or 1 mod 4");
    std::vector<BQF> out;
    const long bound = static_cast<long>(std::sqrt(static_cast<double>(-d) / 3.0)) + 1;
    for (long a = 1; a <= bound; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - d;
            if (num % (4 * a) != 0)
                continue;
            BQF f{a, b, num / (4 * a)};
            if (f.is_reduced() && f.is_primitive())
                out.push_back(f);
        }
    return out;
}

AlgebraicNumber cm_point(const BQF& f)
{
    const Integer disc = f.discriminant();
    if (sgn(f.a) <= 0 || sgn(disc) >= 0)
        throw std::invalid_argument("cm_point: form is not positive definite");
    return (AlgebraicNumber(Rational(Integer(-f.b))) + sqrt_rational(Rational(disc))) / AlgebraicNumber(Rational(Integer(2 * f.a)));
}

BQF form_of(const AlgebraicNumber& tau)
{
    if (degree(tau) != 2 || tau.is_real())
        throw std::invalid_argument("form_of: point is not imaginary quadratic");
    ZPoly p = primitive_integer(tau.poly());
    if (sgn(p[2]) < 0)
        p = -p;
    return BQF{p[2], p[1], p[0]};
}

namespace {

Box cm_box(const BQF& f)
{
    const Interval s = sqrt(Interval(Rational(Integer(-f.discriminant()))));
    const Rational two_a(Integer(2 * f.a));
    return Box(Interval(Rational(Integer(-f.b)) / two_a), s / Interval(two_a));
}

std::optional<QPoly> class_attempt(const std::vector<BQF>& forms, long bits)
{
    PrecisionScope scope(bits);
    std::vector<Box> roots;
    for (const auto& f : forms)
        roots.push_back(eval_j(cm_box(f), bits));
    auto c = from_roots(roots);
    std::vector<Rational> out;
    for (const auto& z : c) {
        auto v = round_box(z);
        if (!v)
            return std::nullopt;
        out.emplace_back(*v);
    }
    return QPoly(out);
}

std::mutex g_class_mutex;
std::map<long, QPoly> g_class_cache;

} // namespace

QPoly class_polynomial(long d, const ClassPolicy& policy)
{
    if (-d > policy.max_abs_discriminant)
        throw std::invalid_argument("class_polynomial: |D| exceeds the configured bound");
    const auto forms = reduced_forms(d);
    {
        std::lock_guard lock(g_class_mutex);
        if (auto it = g_class_cache.find(d); it != g_class_cache.end())
            return it->second;
    }
    for (long bits = policy.start_bits; bits <= policy.max_bits; bits *= 2) {
        auto first = class_attempt(forms, bits);
        if (!first)
            continue;
        auto second = class_attempt(forms, 2 * bits);
        if (!second || !(*second == *first))
            throw ComputationFailure("class_polynomial: coefficients differ between working precisions");
        std::lock_guard lock(g_class_mutex);
        g_class_cache.emplace(d, *first);
        return *first;
    }
    throw ComputationFailure("class_polynomial: rounding stayed ambiguous up to the precision limit");
}

AlgebraicNumber singular_modulus(const BQF& f, const ClassPolicy& policy)
{
    const Integer g = gcd(gcd(f.a, f.b), f.c);
    const BQF prim = reduce(BQF{f.a / g, f.b / g, f.c / g});
    const long d = prim.discriminant().get_si();
    const QPoly h = class_polynomial(d, policy);
    return select_root(h, [&](const Rational& w) {
        const long target = static_cast<long>(bit_length(w.den())) - static_cast<long>(bit_length(w.num()));
        const long bits = std::max(64L, target + 64) + static_cast<long>(bit_length(abs(h[0].num())));
        PrecisionScope scope(bits + 32);
        return eval_j(cm_box(prim), bits);
    });
}

// ---- isogeny levels ---------------------------------------------------------------

IsogenyLevel find_isogeny_level(const AlgebraicNumber& x, const AlgebraicNumber& y, int n_max,
                                const ClassPolicy& policy)
{
    if (in_upper_half_plane(x) != Tri::yes || in_upper_half_plane(y) != Tri::yes)
        throw NotInUpperHalfPlane();
    if (!is_special(x).special || !is_special(y).special) {
        // the fixer of a non-special point is scalar, so g with g x = y is unique up to scale
        auto g = orbit_equiv(x, y, rationals());
        if (!g)
            return {IsogenyLevel::Status::none, 0};
        const Integer det = primitive_form(*g).det;
        if (det <= n_max)
            return {IsogenyLevel::Status::found, static_cast<int>(det.get_si())};
        return {IsogenyLevel::Status::none, 0};
    }
    const BQF fx = form_of(x), fy = form_of(y);
    const bool exact = -fx.discriminant() <= policy.max_abs_discriminant &&
                       -fy.discriminant() <= policy.max_abs_discriminant;
    std::optional<PresentedField> k;
    auto exact_zero = [&](const BiPoly& p) {
        if (!k)
            k = primitive_element({singular_modulus(fx, policy), singular_modulus(fy, policy)});
        return is_zero(p.evaluate(k->generator_coords[0], k->generator_coords[1]));
    };
    for (int n = 1; n <= n_max; ++n) {
        const BiPoly p = phi_n(n, PhiPolicy{.max_level = std::max(n_max, 10)});
        const long base = static_cast<long>(p.max_coefficient_bits()) + 64L * p.degree_x();
        bool nonzero = false;
        for (long bits = base + 128; bits <= base + 1024; bits *= 2) {
            PrecisionScope scope(bits);
            if (!p.evaluate(eval_j(x, bits), eval_j(y, bits)).contains_zero()) {
                nonzero = true;
                break;
            }
        }
        if (nonzero)
            continue;
        if (!exact)
            return {IsogenyLevel::Status::undecided, n};
        if (exact_zero(p))
            return {IsogenyLevel::Status::found, n};
    }
    return {IsogenyLevel::Status::none, 0};
}

} // namespace modtower
