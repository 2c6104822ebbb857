#ifndef MODTOWER_MOEBIUS_HPP
#define MODTOWER_MOEBIUS_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "modtower/fieldlin.hpp"

namespace modtower {

/// Invertible 2x2 matrix [[a, b], [c, d]] with algebraic entries, acting on
/// the projective line by Moebius transformations.
class Moebius {
public:
    /// Throws std::invalid_argument when ad - bc = 0.
    Moebius(AlgebraicNumber a, AlgebraicNumber b, AlgebraicNumber c, AlgebraicNumber d);
    static Moebius identity() { return Moebius(1, 0, 0, 1); }
    static Moebius rational(const Rational& a, const Rational& b, const Rational& c, const Rational& d)
    {
        return Moebius(a, b, c, d);
    }

    const AlgebraicNumber& a() const { return m_[0]; }
    const AlgebraicNumber& b() const { return m_[1]; }
    const AlgebraicNumber& c() const { return m_[2]; }
    const AlgebraicNumber& d() const { return m_[3]; }
    const std::array<AlgebraicNumber, 4>& entries() const { return m_; }
    AlgebraicNumber det() const;

    bool is_rational() const;
    /// Rational entries (throws unless is_rational()).
    std::array<Rational, 4> rational_entries() const;
    bool is_scalar() const;
    Moebius inverse() const;
    friend Moebius operator*(const Moebius& g, const Moebius& h);

private:
    std::array<AlgebraicNumber, 4> m_;
};

/// A point of the projective line: a number or infinity (nullopt).
using ProjPoint = std::optional<AlgebraicNumber>;

ProjPoint act(const Moebius& g, const ProjPoint& x);
/// Projective equality of points.
bool same_point(const ProjPoint& x, const ProjPoint& y);
/// Projective equality of matrices (equal up to a nonzero scalar).
bool same_transformation(const Moebius& g, const Moebius& h);

struct PrimitiveIntegerForm {
    std::array<Integer, 4> matrix; // a, b, c, d
    Integer det;
};

/// The positive rational multiple of g with coprime integer entries.
PrimitiveIntegerForm primitive_form(const Moebius& g);

/// Some g in GL2(F) with g x = y, or nullopt.  Over Q the returned matrix has
/// coprime integer entries and, when the solution space is two-dimensional and
/// the determinant form is definite, the smallest determinant in absolute value.
std::optional<Moebius> orbit_equiv(const AlgebraicNumber& x, const AlgebraicNumber& y, const PresentedField& f);

struct NotInUpperHalfPlane : std::invalid_argument {
    NotInUpperHalfPlane() : std::invalid_argument("point is not certified to lie in the upper half plane") {}
};

struct SpecialResult {
    bool special = false;
    std::optional<Moebius> witness; // non-scalar rational fixer of x
};

/// Specialness of x in the upper half plane: x is quadratic over Q.
SpecialResult is_special(const AlgebraicNumber& x);

/// Number of G(F)-orbits met by A that contain no element of B.
int dim_G(const std::vector<AlgebraicNumber>& a, const std::vector<AlgebraicNumber>& b, const PresentedField& f);
/// Number of G(Q)-orbits met by A that contain no special point.
int dim_G_sigma(const std::vector<AlgebraicNumber>& a);

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class DescentCase { a, b, c, d };
struct Descent {
    Moebius h;
    DescentCase which;
    Dependence dependence;
};

/// Given g over F with g l1 = l2, l1, l2 in L and F linearly disjoint from L
/// over E, construct h in GL2(E) with h l1 = l2.
Descent descend(const Moebius& g, const AlgebraicNumber& l1, const AlgebraicNumber& l2, const PresentedField& e,
                const PresentedField& l);

} // namespace modtower

#endif
