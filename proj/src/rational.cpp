#include "modtower/rational.hpp"

#include <cctype>
#include <ostream>

namespace modtower {

Rational::Rational(const Integer& num, const Integer& den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
    std::string s(text);
    auto trim = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
            t.erase(t.begin());
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
            t.pop_back();
    };
    trim(s);
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size())
            return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                return false;
        return true;
    };
    auto to_int = [](std::string t) {
        if (!t.empty() && t[0] == '+')
            t.erase(t.begin());
        return Integer(t, 10);
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(s))
            throw std::invalid_argument("malformed rational '" + s + "'");
        return Rational(to_int(s));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    trim(n);
    trim(d);
    if (!valid_int(n) || !valid_int(d))
        throw std::invalid_argument("malformed rational '" + s + "'");
    Integer dd = to_int(d);
    if (dd == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(to_int(n), dd);
}

std::string Rational::str() const
{
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
    if (r.is_integer())
        return os << r.num().get_str();
    return os << r.str();
}

Rational inverse(const Rational& r)
{
    return Rational(1) / r;
}

Rational pow(const Rational& r, long e)
{
    if (e < 0)
        return pow(inverse(r), -e);
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), r.num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), r.den().get_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

Integer floor(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
    return q;
}

Integer ceil(const Rational& r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
    return q;
}

std::size_t bit_length(const Integer& n)
{
    if (n == 0)
        return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Integer gcd(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Integer isqrt(const Integer& n)
{
    if (n < 0)
        throw std::domain_error("isqrt of negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

} // namespace modtower
