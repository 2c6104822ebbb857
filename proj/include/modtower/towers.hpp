#ifndef MODTOWER_TOWERS_HPP
#define MODTOWER_TOWERS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modtower/modular.hpp"

namespace modtower {

enum class Side { J, K, E_numeric, L_numeric };
std::string to_string(Side s);

/// Where a tower element came from.  J: the singular modulus of `form`.
/// K: cm_point(form) + shift.  Numeric sides: the expression in `expression`.
struct Provenance {
    int stage = 0;
    BQF form{};
    long discriminant = 0;
    Integer shift = 0;
    std::string expression;
};

struct TowerElement {
    std::optional<AlgebraicNumber> value;
    /// Enclosure at a requested precision (numeric sides).
    std::function<Box(long bits)> enclose;
    Provenance provenance;
};

struct TowerSample {
    PresentedField base;
    Side side = Side::J;
    int depth = 0;
    std::vector<TowerElement> elements;
    /// Field generated by base and the (algebraic) elements, when requested.
    std::optional<PresentedField> field;

    std::vector<AlgebraicNumber> values() const;
};

/// Recompute an element from its provenance.
AlgebraicNumber replay(const TowerElement& e, Side side, const ClassPolicy& policy = {});

struct TowerBounds {
    int depth = 1;
    long dmax = 20;
    /// Bound on max(|a|, |b|, |c|) of the reduced forms used.
    long form_height = 10;
    /// Also present the field of the whole sample (costly: K-side degrees double per discriminant).
    bool with_field = true;
};

/// Special-point truncation of the J or K tower over `base`; depth <= 2.
TowerSample build_special_tower(const PresentedField& base, Side side, const TowerBounds& bounds,
                                const ClassPolicy& policy = {});

/// Numeric exp-side sample over Q: E side iterates z -> exp(z) from the
/// rationals 1..seeds; L side collects log of 2..seeds+1 and i*pi, then logs
/// of those (principal branch).
TowerSample build_exp_tower(Side side, int depth, int seeds);

enum class Direction { a_from_b, b_from_a };
std::string to_string(Direction d);

struct PairCheck {
    std::size_t first = 0, second = 0;
    /// "descend", "orbit-over-E", "not-equivalent"
    std::string method;
    std::optional<Moebius> g;
    std::optional<Moebius> h;
    bool violation = false;
};

struct GDisjointnessReport {
    Direction direction = Direction::a_from_b;
    int degree_e = 1, degree_f = 1, degree_l = 1;
    bool linearly_disjoint = false;
    int pairs_checked = 0;
    int equivalent_pairs = 0;
    std::vector<PairCheck> pairs;
    /// [F cap L : Q]
    int intersection_degree = 1;
    bool intersection_equals_e = true;
    /// An element of (F cap L) \ E, when there is one.
    std::optional<AlgebraicNumber> intersection_witness;
    int violations = 0;
};

/// a_from_b checks F_A against L = F_B: pairs of B elements equivalent under
/// GL2(F_A) must be equivalent under GL2(E).  b_from_a swaps the roles.
GDisjointnessReport check_g_disjointness_sample(const TowerSample& a, const TowerSample& b, const PresentedField& e,
                                                Direction direction);
/// Same, from plain element lists (the TowerSample form adds the base generators).
GDisjointnessReport check_g_disjointness_sample(const std::vector<AlgebraicNumber>& a,
                                                const std::vector<AlgebraicNumber>& b, const PresentedField& e,
                                                Direction direction);

} // namespace modtower

#endif
