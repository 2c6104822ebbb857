#include "modtower/upoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "modtower/linalg.hpp"
#include "modtower/modp.hpp"

namespace modtower {

QPoly qpoly(std::initializer_list<long> ascending)
{
    std::vector<Rational> v;
    for (long c : ascending)
        v.emplace_back(c);
    return QPoly(std::move(v));
}

QPoly poly_gcd(const QPoly& a, const QPoly& b)
{
    return gcd(a, b);
}

Rational resultant(const QPoly& a0, const QPoly& b0)
{
    if (a0.is_zero() || b0.is_zero())
        throw std::invalid_argument("resultant of the zero polynomial");
    QPoly a = a0, b = b0;
    Rational acc(1);
    for (;;) {
        const int m = a.degree(), n = b.degree();
        if (n == 0)
            return acc * pow(b.lead(), m);
        QPoly r = rem(a, b);
        if (r.is_zero())
            return Rational(0);
        const int k = r.degree();
        if ((m * n) % 2 == 1)
            acc = -acc;
        acc *= pow(b.lead(), m - k);
        a = std::move(b);
        b = std::move(r);
    }
}

QPoly squarefree_part(const QPoly& a)
{
    if (a.is_zero())
        throw std::invalid_argument("squarefree part of the zero polynomial");
    if (a.degree() <= 0)
        return QPoly::constant(Rational(1));
    QPoly g = gcd(a, derivative(a));
    return monic(divrem(a, g).first);
}

std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& a)
{
    std::vector<std::pair<QPoly, int>> out;
    if (a.degree() <= 0)
        return out;
    QPoly f = monic(a);
    QPoly df = derivative(f);
    QPoly c = gcd(f, df);
    QPoly w = divrem(f, c).first;
    QPoly y = divrem(df, c).first;
    QPoly z = y - derivative(w);
    int i = 1;
    while (w.degree() > 0) {
        QPoly g = gcd(w, z);
        if (g.degree() > 0)
            out.emplace_back(g, i);
        w = divrem(w, g).first;
        y = divrem(z, g).first;
        z = y - derivative(w);
        ++i;
    }
    return out;
}

QPoly Factorization::expand() const
{
    QPoly r = QPoly::constant(unit);
    for (const auto& [f, m] : factors)
        r = r * pow(f, m);
    return r;
}

Integer content(const ZPoly& z)
{
    Integer g = 0;
    for (const auto& c : z.coeffs())
        g = gcd(g, c);
    return g;
}

ZPoly primitive_integer(const QPoly& a)
{
    if (a.is_zero())
        return {};
    Integer l = 1;
    for (const auto& c : a.coeffs())
        l = lcm(l, c.den());
    std::vector<Integer> v;
    for (const auto& c : a.coeffs())
        v.push_back(c.num() * (l / c.den()));
    Integer g = 0;
    for (const auto& c : v)
        g = gcd(g, c);
    if (v.back() < 0)
        g = -g;
    for (auto& c : v)
        c /= g;
    return ZPoly(std::move(v));
}

QPoly to_qpoly(const ZPoly& z)
{
    std::vector<Rational> v;
    for (const auto& c : z.coeffs())
        v.emplace_back(c);
    return QPoly(std::move(v));
}

std::optional<QPoly> exact_divide(const QPoly& a, const QPoly& b)
{
    auto [q, r] = divrem(a, b);
    if (!r.is_zero())
        return std::nullopt;
    return q;
}

std::string to_string(const QPoly& p, const std::string& var)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        Rational c = p[i];
        if (c.is_zero())
            continue;
        if (!first)
            os << (c.sign() < 0 ? " - " : " + ");
        else if (c.sign() < 0)
            os << "-";
        Rational ac = abs(c);
        if (i == 0 || ac != Rational(1))
            os << ac;
        if (i > 0)
            os << (i == 0 || ac != Rational(1) ? "*" : "") << var << (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Factorization over F_p

namespace {

using FpPoly = Poly<Fp>;

FpPoly to_fp(const std::vector<std::int64_t>& f, std::int64_t p)
{
    std::vector<Fp> v;
    for (auto c : f)
        v.emplace_back(c, static_cast<std::uint64_t>(p));
    return FpPoly(std::move(v));
}

std::vector<std::int64_t> from_fp(const FpPoly& f, std::int64_t p)
{
    std::vector<std::int64_t> v;
    for (const auto& c : f.coeffs())
        v.push_back(Fp(c.value(), static_cast<std::uint64_t>(p)).value());
    return v;
}

FpPoly to_fp(const ZPoly& f, std::int64_t p)
{
    std::vector<Fp> v;
    Integer pp(static_cast<long>(p));
    for (const auto& c : f.coeffs()) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), pp.get_mpz_t());
        v.emplace_back(static_cast<std::int64_t>(r.get_si()), static_cast<std::uint64_t>(p));
    }
    return FpPoly(std::move(v));
}

ZPoly from_fp_z(const FpPoly& f, std::int64_t p)
{
    std::vector<Integer> v;
    for (const auto& c : f.coeffs())
        v.emplace_back(static_cast<long>(Fp(c.value(), static_cast<std::uint64_t>(p)).value()));
    return ZPoly(std::move(v));
}

FpPoly powmod(FpPoly base, Integer e, const FpPoly& mod)
{
    FpPoly r = rem(FpPoly::constant(Fp(1)), mod);
    base = rem(base, mod);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t()))
            r = rem(r * base, mod);
        base = rem(base * base, mod);
        e >>= 1;
    }
    return r;
}

} // namespace

std::vector<std::vector<std::int64_t>> berlekamp(const std::vector<std::int64_t>& fin, std::int64_t p)
{
    const auto P = static_cast<std::uint64_t>(p);
    FpPoly f = monic(to_fp(fin, p));
    const int n = f.degree();
    if (n <= 1)
        return {from_fp(f, p)};
    FpPoly xp = powmod(FpPoly::x(), Integer(static_cast<long>(p)), f);
    Mat<Fp> b(n, n);
    FpPoly cur = FpPoly::constant(Fp(1, P));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Fp v = cur[j];
            if (i == j)
                v = v - Fp(1, P);
            b(j, i) = Fp(v.value(), P);
        }
        cur = rem(cur * xp, f);
    }
    auto kernel = nullspace(b);
    const std::size_t r = kernel.size();
    std::vector<FpPoly> factors{f};
    for (const auto& v : kernel) {
        if (factors.size() == r)
            break;
        std::vector<Fp> coeffs;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            coeffs.emplace_back(v(i).value(), P);
        FpPoly vp(coeffs);
        if (vp.degree() < 1)
            continue;
        for (std::int64_t s = 0; s < p && factors.size() < r; ++s) {
            std::vector<FpPoly> next;
            for (const auto& h : factors) {
                if (h.degree() <= 1) {
                    next.push_back(h);
                    continue;
                }
                FpPoly g = gcd(h, vp - FpPoly::constant(Fp(s, P)));
                if (g.degree() > 0 && g.degree() < h.degree()) {
                    next.push_back(g);
                    next.push_back(monic(divrem(h, g).first));
                } else {
                    next.push_back(h);
                }
            }
            factors = std::move(next);
        }
    }
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& h : factors)
        out.push_back(from_fp(h, p));
    return out;
}

// ---------------------------------------------------------------------------
// Hensel lifting and recombination

namespace {

Integer mod_floor(const Integer& a, const Integer& m)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

ZPoly zmod(const ZPoly& a, const Integer& m)
{
    std::vector<Integer> v;
    for (const auto& c : a.coeffs())
        v.push_back(mod_floor(c, m));
    return ZPoly(std::move(v));
}

ZPoly symmetric(const ZPoly& a, const Integer& m)
{
    Integer half = m / 2;
    std::vector<Integer> v;
    for (const auto& c : a.coeffs()) {
        Integer r = mod_floor(c, m);
        if (r > half)
            r -= m;
        v.push_back(r);
    }
    return ZPoly(std::move(v));
}

/// Lift monic F = A*B (mod p) to monic A, B with F = A*B (mod p^k).
std::pair<ZPoly, ZPoly> hensel_pair(const ZPoly& F, const ZPoly& A0, const ZPoly& B0, std::int64_t p, int k)
{
    FpPoly a = to_fp(A0, p), b = to_fp(B0, p);
    auto [g, s, t] = xgcd(a, b);
    if (g.degree() != 0)
        throw std::logic_error("hensel_pair: factors not coprime mod p");
    ZPoly A = A0, B = B0;
    Integer m(static_cast<long>(p)), P(static_cast<long>(p));
    for (int j = 1; j < k; ++j) {
        ZPoly e = F - A * B;
        std::vector<Integer> ev;
        for (const auto& c : e.coeffs()) {
            Integer q;
            mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
            ev.push_back(q);
        }
        FpPoly ef = to_fp(ZPoly(std::move(ev)), p);
        FpPoly beta = rem(ef * s, b);
        FpPoly alpha = rem(ef * t, a);
        A = A + Integer(m) * from_fp_z(alpha, p);
        B = B + Integer(m) * from_fp_z(beta, p);
        m *= P;
        A = zmod(A, m);
        B = zmod(B, m);
    }
    return {A, B};
}

void multi_lift(const ZPoly& F, const std::vector<ZPoly>& gs, std::int64_t p, int k, std::vector<ZPoly>& out)
{
    Integer M = 1;
    for (int i = 0; i < k; ++i)
        M *= static_cast<long>(p);
    if (gs.size() == 1) {
        out.push_back(zmod(F, M));
        return;
    }
    std::size_t half = gs.size() / 2;
    std::vector<ZPoly> left(gs.begin(), gs.begin() + static_cast<long>(half));
    std::vector<ZPoly> right(gs.begin() + static_cast<long>(half), gs.end());
    auto prod = [&](const std::vector<ZPoly>& v) {
        FpPoly r = FpPoly::constant(Fp(1, static_cast<std::uint64_t>(p)));
        for (const auto& g : v)
            r = r * to_fp(g, p);
        return from_fp_z(r, p);
    };
    auto [A, B] = hensel_pair(F, prod(left), prod(right), p, k);
    multi_lift(A, left, p, k, out);
    multi_lift(B, right, p, k, out);
}

bool is_prime_small(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Integer zcoeff(const ZPoly& f, int i)
{
    return f[i];
}

} // namespace

std::vector<ZPoly> zassenhaus(const ZPoly& f0)
{
    if (f0.degree() < 1)
        throw std::invalid_argument("zassenhaus: polynomial of positive degree required");
    if (f0.degree() == 1)
        return {f0};
    const Integer lc = f0.lead();
    const int n = f0.degree();

    // choose a prime: squarefree reduction, fewest modular factors among a few
    std::int64_t best_p = 0;
    std::vector<std::vector<std::int64_t>> best;
    int good = 0;
    for (std::int64_t p = 3; good < 4 && p < 100000; p += 2) {
        if (!is_prime_small(p))
            continue;
        if (mod_floor(lc, Integer(static_cast<long>(p))) == 0)
            continue;
        FpPoly fp = to_fp(f0, p);
        if (gcd(fp, derivative(fp)).degree() != 0)
            continue;
        auto fac = berlekamp(from_fp(fp, p), p);
        ++good;
        if (best_p == 0 || fac.size() < best.size()) {
            best_p = p;
            best = std::move(fac);
        }
        if (best.size() == 1)
            break;
    }
    if (best_p == 0)
        throw std::runtime_error("zassenhaus: no suitable prime");
    if (best.size() == 1)
        return {f0};

    // coefficient bound for lc * (any factor)
    Integer norm2 = 0;
    for (const auto& c : f0.coeffs())
        norm2 += c * c;
    Integer alc = lc;
    if (alc < 0)
        alc = -alc;
    Integer bound = (isqrt(norm2) + 1) * alc;
    bound <<= static_cast<unsigned long>(n);
    Integer target = 2 * bound + 1;
    Integer M = 1;
    int k = 0;
    while (M <= target) {
        M *= static_cast<long>(best_p);
        ++k;
    }

    Integer lcinv;
    mpz_invert(lcinv.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
    ZPoly F = zmod(Integer(lcinv) * f0, M);
    std::vector<ZPoly> gs;
    for (const auto& g : best)
        gs.push_back(from_fp_z(to_fp(g, best_p), best_p));
    std::vector<ZPoly> lifted;
    multi_lift(F, gs, best_p, k, lifted);

    // recombination
    std::vector<ZPoly> result;
    ZPoly f = f0;
    std::vector<ZPoly> rest = lifted;
    std::size_t s = 1;
    while (2 * s <= rest.size()) {
        bool found = false;
        std::vector<int> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        const int r = static_cast<int>(rest.size());
        for (;;) {
            const Integer flc = f.lead();
            ZPoly g = ZPoly::constant(flc), h = ZPoly::constant(flc);
            std::vector<bool> in(static_cast<std::size_t>(r), false);
            for (int i : idx)
                in[static_cast<std::size_t>(i)] = true;
            for (int i = 0; i < r; ++i) {
                if (in[static_cast<std::size_t>(i)])
                    g = zmod(g * rest[static_cast<std::size_t>(i)], M);
                else
                    h = zmod(h * rest[static_cast<std::size_t>(i)], M);
            }
            g = symmetric(g, M);
            h = symmetric(h, M);
            if (g * h == ZPoly::constant(flc) * f) {
                Integer cg = content(g), ch = content(h);
                std::vector<Integer> gv, hv;
                for (const auto& c : g.coeffs())
                    gv.push_back(c / cg);
                for (const auto& c : h.coeffs())
                    hv.push_back(c / ch);
                ZPoly gp(std::move(gv)), hp(std::move(hv));
                if (gp.lead() < 0)
                    gp = -gp;
                if (hp.lead() < 0)
                    hp = -hp;
                result.push_back(gp);
                f = hp;
                std::vector<ZPoly> keep;
                for (int i = 0; i < r; ++i)
                    if (!in[static_cast<std::size_t>(i)])
                        keep.push_back(rest[static_cast<std::size_t>(i)]);
                rest = std::move(keep);
                found = true;
                break;
            }
            // next combination
            int pos = static_cast<int>(s) - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == r - static_cast<int>(s) + pos)
                --pos;
            if (pos < 0)
                break;
            ++idx[static_cast<std::size_t>(pos)];
            for (std::size_t j = static_cast<std::size_t>(pos) + 1; j < s; ++j)
                idx[j] = idx[j - 1] + 1;
        }
        if (!found)
            ++s;
    }
    if (f.degree() > 0)
        result.push_back(f);
    (void)zcoeff;
    return result;
}

Factorization factor_rational_poly(const QPoly& a)
{
    if (a.is_zero())
        throw std::invalid_argument("factorization of the zero polynomial");
    Factorization out{a.lead(), {}};
    for (const auto& [sq, mult] : squarefree_decomposition(a)) {
        for (const auto& z : zassenhaus(primitive_integer(sq)))
            out.factors.emplace_back(monic(to_qpoly(z)), mult);
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree())
            return x.first.degree() < y.first.degree();
        for (int i = x.first.degree(); i >= 0; --i)
            if (x.first[i] != y.first[i])
                return x.first[i] < y.first[i];
        return x.second < y.second;
    });
    return out;
}

} // namespace modtower
