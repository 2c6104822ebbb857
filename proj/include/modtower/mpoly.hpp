#ifndef MODTOWER_MPOLY_HPP
#define MODTOWER_MPOLY_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "modtower/algebraic.hpp"

namespace modtower {

/// Sparse polynomial over Q in a fixed number of variables.
class MPoly {
public:
    using Exponents = std::vector<int>;

    MPoly() = default;
    explicit MPoly(std::size_t nvars) : n_(nvars) {}
    static MPoly constant(std::size_t nvars, const Rational& c);
    static MPoly variable(std::size_t nvars, std::size_t i);

    std::size_t nvars() const { return n_; }
    const std::map<Exponents, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int total_degree() const;
    /// Variables that occur with a positive exponent.
    std::vector<std::size_t> support() const;

    MPoly derivative(std::size_t var) const;

    friend MPoly operator+(const MPoly& a, const MPoly& b);
    friend MPoly operator-(const MPoly& a, const MPoly& b);
    friend MPoly operator-(const MPoly& a);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    friend MPoly pow(const MPoly& a, int e);
    friend bool operator==(const MPoly& a, const MPoly& b) = default;

    /// Value at x; T needs T(Rational), + and *.
    template <class T>
    T evaluate(const std::vector<T>& x) const
    {
        if (x.size() != n_)
            throw std::invalid_argument("MPoly::evaluate: wrong number of values");
        T acc(Rational(0));
        for (const auto& [e, c] : t_) {
            T m(c);
            for (std::size_t i = 0; i < n_; ++i)
                for (int k = 0; k < e[i]; ++k)
                    m = m * x[i];
            acc = acc + m;
        }
        return acc;
    }

private:
    void add_term(const Exponents& e, const Rational& c);

    std::size_t n_ = 0;
    std::map<Exponents, Rational> t_;
};

std::string to_string(const MPoly& p, const std::vector<std::string>& names);

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parse a polynomial such as "u2 - u1^2" or "W^2 - 2*W + 1" over the given
/// variable names.  Division is allowed by nonzero rational constants only.
MPoly parse_polynomial(const std::string& text, const std::vector<std::string>& names);

/// Parse an algebraic-number literal: rationals, i, sqrt(q), r^(p/q) for
/// positive rational r, and +, -, *, / and integer powers of those.
AlgebraicNumber parse_algebraic(const std::string& text);

} // namespace modtower

#endif
