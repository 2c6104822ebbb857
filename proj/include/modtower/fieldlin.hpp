#ifndef MODTOWER_FIELDLIN_HPP
#define MODTOWER_FIELDLIN_HPP

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "modtower/numberfield.hpp"

namespace modtower {

/// A number field K containing a base field F and a list of elements, with
/// the elements and a Q-basis of F expressed in K.  Every rank question over
/// F is answered here by Q-linear algebra on K-coordinates:
/// dim_F span(v_i) = rank_Q {f_j v_i} / [F:Q].
class Workspace {
public:
    Workspace(const PresentedField& base, const std::vector<AlgebraicNumber>& elements);
    Workspace(const PresentedField& base, const std::vector<std::vector<AlgebraicNumber>>& vectors);

    const NumberField& field() const { return k_.field; }
    /// Q-basis of the base field inside K (powers of its primitive element).
    const std::vector<NFElem>& base_basis() const { return base_basis_; }
    int base_degree() const { return static_cast<int>(base_basis_.size()); }
    /// Element i (or entry (i, s) of vector i) as an element of K.
    const NFElem& element(std::size_t i, std::size_t s = 0) const { return vecs_[i][s]; }
    std::size_t count() const { return vecs_.size(); }
    std::size_t length() const { return len_; }

    /// dim over the base field of the span of the chosen vectors.
    int rank(const std::vector<std::size_t>& which) const;
    int rank() const;

    /// Nonzero base-field coefficients c with sum c_i v_i = 0, or nullopt.
    std::optional<std::vector<NFElem>> dependence(const std::vector<std::size_t>& which) const;

    /// Convert a K-element to an algebraic number.
    AlgebraicNumber value(const NFElem& e) const { return k_.field.to_algebraic(e); }

private:
    void init(const PresentedField& base, const std::vector<std::vector<AlgebraicNumber>>& vectors);
    Mat<Rational> q_matrix(const std::vector<std::size_t>& which) const;

    PresentedField k_;
    std::vector<NFElem> base_basis_;
    std::vector<std::vector<NFElem>> vecs_;
    std::size_t len_ = 1;
};

/// The presented field Q.
PresentedField rationals();
/// Presented field generated by the given numbers.
PresentedField field_of(const std::vector<AlgebraicNumber>& gens);

int rank_over(const PresentedField& field, const std::vector<std::vector<AlgebraicNumber>>& vectors);
/// l.dim_F(A | B)
int ldim(const PresentedField& field, const std::vector<AlgebraicNumber>& a, const std::vector<AlgebraicNumber>& b = {});

/// sum coefficients[i] * elements[i] = 0
struct Witness {
    std::vector<AlgebraicNumber> coefficients;
    std::vector<AlgebraicNumber> elements;
};

struct Disjoint {};
using DisjointnessResult = std::variant<Disjoint, Witness>;

/// Whether E(F_gens) and E(L_gens) are linearly disjoint over E.
DisjointnessResult linearly_disjoint(const PresentedField& e, const std::vector<AlgebraicNumber>& f_gens,
                                     const std::vector<AlgebraicNumber>& l_gens);

/// E-linear dependence of the elements.
struct Dependence {
    std::vector<AlgebraicNumber> coefficients;
    /// coordinates of each coefficient in the power basis of E's primitive element
    std::vector<std::vector<Rational>> coordinates;
};
std::optional<Dependence> find_E_dependence(const PresentedField& e, const std::vector<AlgebraicNumber>& elements);

/// A value known through certified enclosures, optionally with its exact
/// algebraic value.
struct LinValue {
    std::function<Box(long bits)> enclose;
    std::optional<AlgebraicNumber> exact;

    static LinValue of(const AlgebraicNumber& a);
    static LinValue numeric(std::function<Box(long bits)> f) { return {std::move(f), std::nullopt}; }
};

enum class RelationStatus { verified, relation_found, undecided };
struct RelationResult {
    RelationStatus status;
    /// Integer coordinates of each coefficient over the field's power basis.
    std::vector<std::vector<long>> coefficients;
};

/// Exhaustive search for a field-linear relation whose coefficient
/// coordinates are integers of absolute value <= height.
RelationResult no_small_linear_relation(const std::vector<LinValue>& values, long height,
                                        const PresentedField& field, long max_bits = 2048);

} // namespace modtower

#endif
