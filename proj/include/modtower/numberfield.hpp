#ifndef MODTOWER_NUMBERFIELD_HPP
#define MODTOWER_NUMBERFIELD_HPP

#include <memory>
#include <optional>
#include <vector>

#include "modtower/algebraic.hpp"
#include "modtower/linalg.hpp"

namespace modtower {

class NFElem;

/// Q(theta) for an algebraic theta, with elements in the power basis
/// 1, theta, ..., theta^(n-1).  Copies share the field data.
class NumberField {
public:
    /// Q itself (theta = 0, degree 1).
    NumberField();
    explicit NumberField(const AlgebraicNumber& theta);

    int degree() const;
    const AlgebraicNumber& theta() const;
    /// Monic minimal polynomial of theta.
    const QPoly& modulus() const;

    NFElem zero() const;
    NFElem one() const;
    NFElem gen() const;
    NFElem lift(const Rational& q) const;
    NFElem from_coords(std::vector<Rational> c) const;
    NFElem from_poly(const QPoly& p) const;

    /// The complex number an element denotes.
    AlgebraicNumber to_algebraic(const NFElem& e) const;
    /// Enclosure of the element's value, refining theta to `width`.
    Box enclose(const NFElem& e, const Rational& width) const;

    friend bool operator==(const NumberField& a, const NumberField& b) { return a.d_ == b.d_; }

    struct Data; // opaque

private:
    std::shared_ptr<const Data> d_;
    friend class NFElem;
};

/// Element of a NumberField.  A default or integer-constructed element is a
/// context-free rational constant that adopts the field of the other operand.
class NFElem {
public:
    NFElem() : NFElem(0) {}
    NFElem(int q) : c_{Rational(q)} {}
    NFElem(const Rational& q) : c_{q} {}

    /// Coordinates in the power basis (padded to the field degree).
    std::vector<Rational> coords() const;
    QPoly as_poly() const { return QPoly(c_); }
    bool has_field() const { return f_ != nullptr; }
    bool is_zero() const;
    bool is_rational() const;

    friend NFElem operator+(const NFElem& a, const NFElem& b);
    friend NFElem operator-(const NFElem& a, const NFElem& b);
    friend NFElem operator-(const NFElem& a);
    friend NFElem operator*(const NFElem& a, const NFElem& b);
    friend NFElem operator/(const NFElem& a, const NFElem& b);
    NFElem& operator+=(const NFElem& o) { return *this = *this + o; }
    NFElem& operator-=(const NFElem& o) { return *this = *this - o; }
    NFElem& operator*=(const NFElem& o) { return *this = *this * o; }
    friend bool operator==(const NFElem& a, const NFElem& b);
    friend bool is_zero(const NFElem& e) { return e.is_zero(); }
    friend NFElem inverse(const NFElem& e);

private:
    friend class NumberField;
    std::vector<Rational> c_;
    std::shared_ptr<const NumberField::Data> f_;
};

/// Matrix of multiplication by e on the power basis (columns are images).
Mat<Rational> multiplication_matrix(const NumberField& k, const NFElem& e);

/// A finitely generated subfield of the algebraic numbers together with a
/// primitive element theta = sum c_i g_i and the coordinates of every
/// generator in the power basis of theta.
struct PresentedField {
    std::vector<AlgebraicNumber> generators;
    std::vector<long> combination;
    NumberField field;
    std::vector<NFElem> generator_coords;

    int degree() const { return field.degree(); }
    const AlgebraicNumber& primitive_element() const { return field.theta(); }
};

PresentedField primitive_element(const std::vector<AlgebraicNumber>& gens);

/// Coordinates of a in the power basis of the field, or nullopt if a is not in
/// the field.
std::optional<std::vector<Rational>> express_in_basis(const NumberField& k, const AlgebraicNumber& a);
std::optional<NFElem> to_element(const NumberField& k, const AlgebraicNumber& a);

/// Result of adjoining one algebraic number to a field.
struct Adjoined {
    NumberField field;   // Q(delta), delta = theta + t g
    long t = 0;
    NFElem old_theta;    // theta in the new field
    NFElem adjoined;     // g in the new field
};
Adjoined adjoin(const NumberField& k, const AlgebraicNumber& g);

/// Re-express an element of k in a field containing it, given the image of
/// k's generator there.
NFElem transport(const NFElem& e, const NFElem& theta_image);

} // namespace modtower

namespace Eigen {

template <>
struct NumTraits<modtower::NFElem> : GenericNumTraits<modtower::NFElem> {
    using Real = modtower::NFElem;
    using NonInteger = modtower::NFElem;
    using Nested = modtower::NFElem;
    using Literal = modtower::NFElem;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 50,
        MulCost = 200
    };
};

} // namespace Eigen

#endif
