#ifndef MODTOWER_UPOLY_HPP
#define MODTOWER_UPOLY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modtower/poly.hpp"
#include "modtower/rational.hpp"

namespace modtower {

using QPoly = Poly<Rational>;
using ZPoly = Poly<Integer>;

/// Convenience: build a rational polynomial from integer coefficients.
QPoly qpoly(std::initializer_list<long> ascending);

/// Monic gcd; gcd(a, 0) = monic(a).
QPoly poly_gcd(const QPoly& a, const QPoly& b);

/// Determinant of the Sylvester matrix of a and b.
/// Throws std::invalid_argument when either input is the zero polynomial.
Rational resultant(const QPoly& a, const QPoly& b);

/// Product of the distinct monic irreducible factors of a.
QPoly squarefree_part(const QPoly& a);

/// Yun decomposition: a = lc * prod f_i^i with f_i squarefree, pairwise coprime.
std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& a);

struct Factorization {
    Rational unit;                             // leading coefficient of the input
    std::vector<std::pair<QPoly, int>> factors; // monic irreducible, multiplicity
    QPoly expand() const;
};

/// Complete factorization over Q into monic irreducibles (Zassenhaus).
Factorization factor_rational_poly(const QPoly& a);

/// Primitive integer polynomial with positive leading coefficient and the same
/// roots as a.
ZPoly primitive_integer(const QPoly& a);
QPoly to_qpoly(const ZPoly& z);
Integer content(const ZPoly& z);

/// Factor a primitive squarefree integer polynomial of positive degree into
/// primitive irreducible integer factors.
std::vector<ZPoly> zassenhaus(const ZPoly& f);

/// Monic irreducible factors of f over F_p (f squarefree mod p, p prime).
std::vector<std::vector<std::int64_t>> berlekamp(const std::vector<std::int64_t>& f, std::int64_t p);

/// Exact division a / b in Q[X]; nullopt if b does not divide a.
std::optional<QPoly> exact_divide(const QPoly& a, const QPoly& b);

/// Human readable form in X (used in diagnostics, not serialization).
std::string to_string(const QPoly& p, const std::string& var = "X");

} // namespace modtower

#endif
