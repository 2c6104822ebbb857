#ifndef MODTOWER_ALGEBRAIC_HPP
#define MODTOWER_ALGEBRAIC_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modtower/interval.hpp"
#include "modtower/upoly.hpp"

namespace modtower {

/// A certified element of the algebraic closure of Q inside C.
///
/// Stored as a squarefree primitive integer polynomial together with a box
/// containing exactly one of its roots, strictly inside the box.  Refinement
/// only ever shrinks the box (the new box is intersected with the old one), so
/// every box that was ever reported still contains the number.
///
/// Copies share the refinement cache; refinement is guarded by a mutex and
/// publishes the new box atomically with respect to readers.
class AlgebraicNumber {
public:
    AlgebraicNumber() : AlgebraicNumber(Rational(0)) {}
    AlgebraicNumber(const Rational& q);
    AlgebraicNumber(int q) : AlgebraicNumber(Rational(q)) {}

    /// The unique root of p inside `hint`.  Throws std::invalid_argument when
    /// the hint does not isolate exactly one root (after bounded refinement).
    static AlgebraicNumber from_poly_box(const QPoly& p, const Box& hint);

    /// Defining polynomial: squarefree, primitive, integer coefficients.
    const QPoly& poly() const;
    /// Current certified box.
    Box box() const;
    /// Refine until the box width is at most `width`; returns the new box.
    Box refine(const Rational& width) const;
    /// Refinement depth reached so far (number of successful shrink steps).
    int precision_state() const;

    std::optional<Rational> rational_value() const;
    bool is_rational() const { return rational_value().has_value(); }
    bool is_zero() const;

    /// Certified realness: the box is symmetric about the real axis.
    bool is_real() const;

    /// double approximation (diagnostics and ordering only)
    double approx_re() const;
    double approx_im() const;

private:
    struct State;
    explicit AlgebraicNumber(std::shared_ptr<State> s) : s_(std::move(s)) {}
    std::shared_ptr<State> s_;

    friend std::vector<AlgebraicNumber> isolate_roots(const QPoly& p, const Rational& target_width);
    friend AlgebraicNumber make_certified(const QPoly& sqf, const Box& box, bool real);
};

/// One certified box per distinct complex root of p, boxes pairwise disjoint
/// and of width at most target_width.  Roots are ordered by real part, then
/// imaginary part.
std::vector<AlgebraicNumber> isolate_roots(const QPoly& p, const Rational& target_width);

enum class AlgOp { add, sub, mul, div };

/// Thrown by alg_arith for division by an algebraic zero.
struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("algebraic division by zero") {}
};

AlgebraicNumber alg_arith(const AlgebraicNumber& a, const AlgebraicNumber& b, AlgOp op);
AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a);
AlgebraicNumber conj(const AlgebraicNumber& a);
AlgebraicNumber pow(const AlgebraicNumber& a, int e);

bool alg_equals(const AlgebraicNumber& a, const AlgebraicNumber& b);

/// True iff f(a) = 0.
bool is_root_of(const AlgebraicNumber& a, const QPoly& f);

/// Monic irreducible polynomial over Q vanishing at a (cached).
QPoly minimal_polynomial(const AlgebraicNumber& a);
int degree(const AlgebraicNumber& a);

/// Common algebraic constructors.
AlgebraicNumber imag_unit();
/// Principal square root of a rational (positive real, or positive imaginary
/// for negative input).
AlgebraicNumber sqrt_rational(const Rational& q);
/// Real positive root of X^n - q for q > 0.
AlgebraicNumber real_root(const Rational& q, int n);

enum class Tri { yes, no, undecided };

/// Whether Im(a) > 0, with a bounded refinement budget.
Tri in_upper_half_plane(const AlgebraicNumber& a, int budget_bits = 4096);

/// The root of f whose location is pinned down by `enclosure`: enclosure(w)
/// must return a box containing the wanted root, shrinking as w decreases.
AlgebraicNumber select_root(const QPoly& f, const std::function<Box(const Rational&)>& enclosure);

/// Enclosure of a polynomial value at a point box.
Box eval_box(const QPoly& p, const Box& z);

} // namespace modtower

#endif
