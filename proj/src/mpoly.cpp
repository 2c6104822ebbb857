#include "modtower/mpoly.hpp"

#include <cctype>
#include <memory>
#include <sstream>
#include <variant>

namespace modtower {

MPoly MPoly::constant(std::size_t nvars, const Rational& c)
{
    MPoly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

MPoly MPoly::variable(std::size_t nvars, std::size_t i)
{
    if (i >= nvars)
        throw std::out_of_range("MPoly::variable");
    MPoly p(nvars);
    Exponents e(nvars, 0);
    e[i] = 1;
    p.add_term(e, 1);
    return p;
}

void MPoly::add_term(const Exponents& e, const Rational& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = t_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            t_.erase(it);
    }
}

int MPoly::total_degree() const
{
    int d = -1;
    for (const auto& [e, c] : t_) {
        int s = 0;
        for (int k : e)
            s += k;
        d = std::max(d, s);
    }
    return d;
}

std::vector<std::size_t> MPoly::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (const auto& [e, c] : t_)
            if (e[i] > 0) {
                out.push_back(i);
                break;
            }
    return out;
}

MPoly MPoly::derivative(std::size_t var) const
{
    MPoly d(n_);
    for (const auto& [e, c] : t_) {
        if (e[var] == 0)
            continue;
        Exponents f = e;
        --f[var];
        d.add_term(f, c * Rational(e[var]));
    }
    return d;
}

static void check_compatible(const MPoly& a, const MPoly& b)
{
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("MPoly: variable counts differ");
}

MPoly operator+(const MPoly& a, const MPoly& b)
{
    check_compatible(a, b);
    MPoly r = a;
    for (const auto& [e, c] : b.t_)
        r.add_term(e, c);
    return r;
}

MPoly operator-(const MPoly& a)
{
    MPoly r(a.n_);
    for (const auto& [e, c] : a.t_)
        r.t_.emplace(e, -c);
    return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b)
{
    check_compatible(a, b);
    MPoly r(a.n_);
    for (const auto& [ea, ca] : a.t_)
        for (const auto& [eb, cb] : b.t_) {
            MPoly::Exponents e(a.n_);
            for (std::size_t i = 0; i < a.n_; ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

MPoly pow(const MPoly& a, int e)
{
    if (e < 0)
        throw std::invalid_argument("MPoly: negative power");
    MPoly r = MPoly::constant(a.n_, 1), b = a;
    for (; e > 0; e >>= 1) {
        if (e & 1)
            r = r * b;
        if (e > 1)
            b = b * b;
    }
    return r;
}

std::string to_string(const MPoly& p, const std::vector<std::string>& names)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    // highest total degree first, for readability
    std::vector<std::pair<MPoly::Exponents, Rational>> terms(p.terms().rbegin(), p.terms().rend());
    for (const auto& [e, c] : terms) {
        Rational a = abs(c);
        if (first)
            os << (c.sign() < 0 ? "-" : "");
        else
            os << (c.sign() < 0 ? " - " : " + ");
        first = false;
        bool mono = false;
        std::ostringstream m;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (mono)
                m << "*";
            m << names.at(i);
            if (e[i] > 1)
                m << "^" << e[i];
            mono = true;
        }
        if (!mono)
            os << a;
        else if (a == Rational(1))
            os << m.str();
        else
            os << a << "*" << m.str();
    }
    return os.str();
}

namespace {

struct Node {
    enum class Kind { num, name, call, neg, add, sub, mul, div, pow } kind;
    Rational value;       // num; exponent for pow
    std::string id;       // name, call
    std::unique_ptr<Node> lhs, rhs;
};
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind k, NodePtr l = nullptr, NodePtr r = nullptr)
{
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr n = expr();
        skip();
        if (p_ != s_.size())
            fail("unexpected character");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at offset " + std::to_string(p_) + " in \"" + s_ + "\"");
    }
    void skip()
    {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_])))
            ++p_;
    }
    bool eat(char c)
    {
        skip();
        if (p_ < s_.size() && s_[p_] == c) {
            ++p_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        NodePtr n = term();
        for (;;) {
            if (eat('+'))
                n = make(Node::Kind::add, std::move(n), term());
            else if (eat('-'))
                n = make(Node::Kind::sub, std::move(n), term());
            else
                return n;
        }
    }
    NodePtr term()
    {
        NodePtr n = unary();
        for (;;) {
            if (eat('*'))
                n = make(Node::Kind::mul, std::move(n), unary());
            else if (eat('/'))
                n = make(Node::Kind::div, std::move(n), unary());
            else
                return n;
        }
    }
    NodePtr unary()
    {
        if (eat('-'))
            return make(Node::Kind::neg, unary());
        if (eat('+'))
            return unary();
        return power();
    }
    NodePtr power()
    {
        NodePtr n = atom();
        if (eat('^')) {
            auto p = make(Node::Kind::pow, std::move(n));
            p->value = exponent();
            return p;
        }
        return n;
    }
    Rational exponent()
    {
        bool neg = eat('-');
        Rational e;
        if (eat('(')) {
            bool ineg = eat('-');
            e = integer();
            if (ineg)
                e = -e;
            if (eat('/')) {
                Rational d = integer();
                if (d.is_zero())
                    fail("zero denominator in exponent");
                e = e / d;
            }
            if (!eat(')'))
                fail("expected ')'");
        } else {
            e = integer();
        }
        return neg ? -e : e;
    }
    Rational integer()
    {
        skip();
        std::size_t b = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_])))
            ++p_;
        if (b == p_)
            fail("expected integer");
        return Rational(Integer(s_.substr(b, p_ - b)));
    }
    NodePtr atom()
    {
        skip();
        if (p_ >= s_.size())
            fail("unexpected end of input");
        char c = s_[p_];
        if (eat('(')) {
            NodePtr n = expr();
            if (!eat(')'))
                fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t b = p_;
            while (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.'))
                ++p_;
            std::string lit = s_.substr(b, p_ - b);
            auto dot = lit.find('.');
            auto n = make(Node::Kind::num);
            if (dot == std::string::npos) {
                n->value = Rational(Integer(lit, 10));
            } else {
                std::string frac = lit.substr(dot + 1);
                std::string digits = lit.substr(0, dot) + frac;
                if (digits.empty() || frac.find('.') != std::string::npos)
                    fail("malformed number");
                Integer scale;
                mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
                n->value = Rational(Integer(digits, 10), scale);
            }
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = p_;
            while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_' ||
                                      s_[p_] == '\''))
                ++p_;
            std::string id = s_.substr(b, p_ - b);
            if (eat('(')) {
                auto n = make(Node::Kind::call, expr());
                n->id = id;
                if (!eat(')'))
                    fail("expected ')'");
                return n;
            }
            auto n = make(Node::Kind::name);
            n->id = id;
            return n;
        }
        fail("unexpected character");
    }

    const std::string& s_;
    std::size_t p_ = 0;
};

MPoly to_mpoly(const Node& n, const std::vector<std::string>& names)
{
    const std::size_t nv = names.size();
    switch (n.kind) {
    case Node::Kind::num:
        return MPoly::constant(nv, n.value);
    case Node::Kind::name:
        for (std::size_t i = 0; i < nv; ++i)
            if (names[i] == n.id)
                return MPoly::variable(nv, i);
        throw ParseError("unknown symbol '" + n.id + "'");
    case Node::Kind::call:
        throw ParseError("function '" + n.id + "' is not allowed in a polynomial");
    case Node::Kind::neg:
        return -to_mpoly(*n.lhs, names);
    case Node::Kind::add:
        return to_mpoly(*n.lhs, names) + to_mpoly(*n.rhs, names);
    case Node::Kind::sub:
        return to_mpoly(*n.lhs, names) - to_mpoly(*n.rhs, names);
    case Node::Kind::mul:
        return to_mpoly(*n.lhs, names) * to_mpoly(*n.rhs, names);
    case Node::Kind::div: {
        MPoly d = to_mpoly(*n.rhs, names);
        if (d.total_degree() != 0)
            throw ParseError("division by a non-constant");
        Rational c = d.terms().begin()->second;
        return to_mpoly(*n.lhs, names) * MPoly::constant(nv, inverse(c));
    }
    case Node::Kind::pow:
        if (n.value.den() != 1 || n.value.sign() < 0)
            throw ParseError("polynomial exponents must be nonnegative integers");
        return pow(to_mpoly(*n.lhs, names), static_cast<int>(n.value.num().get_si()));
    }
    throw ParseError("bad expression");
}

using AlgValue = std::variant<Rational, AlgebraicNumber>;

AlgebraicNumber as_alg(const AlgValue& v)
{
    if (const Rational* q = std::get_if<Rational>(&v))
        return AlgebraicNumber(*q);
    return std::get<AlgebraicNumber>(v);
}

AlgValue combine(const AlgValue& a, const AlgValue& b, AlgOp op)
{
    const Rational* qa = std::get_if<Rational>(&a);
    const Rational* qb = std::get_if<Rational>(&b);
    if (qa && qb) {
        switch (op) {
        case AlgOp::add: return *qa + *qb;
        case AlgOp::sub: return *qa - *qb;
        case AlgOp::mul: return *qa * *qb;
        case AlgOp::div:
            if (qb->is_zero())
                throw ParseError("division by zero");
            return *qa / *qb;
        }
    }
    try {
        return alg_arith(as_alg(a), as_alg(b), op);
    } catch (const DivisionByZero&) {
        throw ParseError("division by zero");
    }
}

AlgValue to_alg(const Node& n)
{
    switch (n.kind) {
    case Node::Kind::num:
        return n.value;
    case Node::Kind::name:
        if (n.id == "i" || n.id == "I")
            return imag_unit();
        throw ParseError("unknown constant '" + n.id + "'");
    case Node::Kind::call: {
        if (n.id != "sqrt")
            throw ParseError("unknown function '" + n.id + "'");
        AlgValue a = to_alg(*n.lhs);
        const Rational* q = std::get_if<Rational>(&a);
        if (!q) {
            if (auto r = std::get<AlgebraicNumber>(a).rational_value())
                return sqrt_rational(*r);
            throw ParseError("sqrt is supported for rational arguments only");
        }
        return sqrt_rational(*q);
    }
    case Node::Kind::neg: {
        AlgValue a = to_alg(*n.lhs);
        if (const Rational* q = std::get_if<Rational>(&a))
            return -*q;
        return -std::get<AlgebraicNumber>(a);
    }
    case Node::Kind::add: return combine(to_alg(*n.lhs), to_alg(*n.rhs), AlgOp::add);
    case Node::Kind::sub: return combine(to_alg(*n.lhs), to_alg(*n.rhs), AlgOp::sub);
    case Node::Kind::mul: return combine(to_alg(*n.lhs), to_alg(*n.rhs), AlgOp::mul);
    case Node::Kind::div: return combine(to_alg(*n.lhs), to_alg(*n.rhs), AlgOp::div);
    case Node::Kind::pow: {
        AlgValue a = to_alg(*n.lhs);
        const Rational& e = n.value;
        long p = e.num().get_si();
        long q = e.den().get_si();
        if (q == 1) {
            if (const Rational* r = std::get_if<Rational>(&a)) {
                if (r->is_zero() && p < 0)
                    throw ParseError("division by zero");
                return pow(*r, p);
            }
            AlgebraicNumber x = std::get<AlgebraicNumber>(a);
            if (p < 0)
                return combine(Rational(1), pow(x, static_cast<int>(-p)), AlgOp::div);
            return pow(x, static_cast<int>(p));
        }
        std::optional<Rational> r;
        if (const Rational* rr = std::get_if<Rational>(&a))
            r = *rr;
        else
            r = std::get<AlgebraicNumber>(a).rational_value();
        if (!r || r->sign() <= 0)
            throw ParseError("fractional powers are supported for positive rationals only");
        AlgebraicNumber root = real_root(pow(*r, p < 0 ? -p : p), static_cast<int>(q));
        if (p < 0)
            return combine(Rational(1), root, AlgOp::div);
        return root;
    }
    }
    throw ParseError("bad expression");
}

} // namespace

MPoly parse_polynomial(const std::string& text, const std::vector<std::string>& names)
{
    NodePtr n = Parser(text).parse();
    return to_mpoly(*n, names);
}

AlgebraicNumber parse_algebraic(const std::string& text)
{
    NodePtr n = Parser(text).parse();
    return as_alg(to_alg(*n));
}

} // namespace modtower
