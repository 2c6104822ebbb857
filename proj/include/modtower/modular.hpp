#ifndef MODTOWER_MODULAR_HPP
#define MODTOWER_MODULAR_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modtower/moebius.hpp"

namespace modtower {

/// Truncated Laurent series sum_{n >= valuation} c_n q^n + O(q^order) with
/// integer coefficients.
class QExpansion {
public:
    QExpansion() = default;
    /// coeffs[k] is the coefficient of q^(valuation + k); known up to q^(order - 1).
    QExpansion(int valuation, std::vector<Integer> coeffs, int order);

    int valuation() const { return val_; }
    int order() const { return order_; }
    /// Throws std::out_of_range for n >= order().
    Integer coefficient(int n) const;
    /// Coefficients of q^valuation .. q^(order-1).
    const std::vector<Integer>& coefficients() const { return c_; }

    QExpansion truncated(int order) const;
    /// q d/dq
    QExpansion q_derivative() const;

    friend QExpansion operator+(const QExpansion& a, const QExpansion& b);
    friend QExpansion operator-(const QExpansion& a, const QExpansion& b);
    friend QExpansion operator*(const QExpansion& a, const QExpansion& b);
    friend QExpansion operator*(const Integer& s, const QExpansion& a);
    /// Exact division; the divisor's leading coefficient must be +-1.
    friend QExpansion operator/(const QExpansion& a, const QExpansion& b);
    friend bool operator==(const QExpansion& a, const QExpansion& b) = default;

private:
    int val_ = 0;
    int order_ = 0;
    std::vector<Integer> c_;
};

/// Normalized Eisenstein series E_k, k in {2, 4, 6}, to O(q^order).
QExpansion eisenstein_qexp(int k, int order);
/// Delta = q prod (1 - q^n)^24 to O(q^order).
QExpansion delta_qexp(int order);
/// j = E4^3 / Delta to O(q^order).  order >= 1.
QExpansion j_qexp(int order);

/// Enclosures of j and its tau-derivatives j' = dj/dtau (2 pi i included).
struct JDerivatives {
    Box j, d1, d2, d3;
};

/// Rigorous enclosure of j(tau) computed with `bits` of working precision.
/// Throws NotInUpperHalfPlane unless Im(tau) > 0 is certified.
Box eval_j(const Box& tau, long bits);
Box eval_j(const AlgebraicNumber& tau, long bits);
JDerivatives eval_j_derivs(const Box& tau, long bits);
JDerivatives eval_j_derivs(const AlgebraicNumber& tau, long bits);

struct SingularPoint : std::domain_error {
    using std::domain_error::domain_error;
};

/// Enclosure of j'''/j' - (3/2)(j''/j')^2 + (j^2 - 1968 j + 2654208)/(2 j^2 (j - 1728)^2) j'^2,
/// which vanishes identically.  Throws SingularPoint when the enclosures of j
/// meet {0, 1728} or the enclosure of j' meets 0.
Box schwarzian_residual(const Box& tau, long bits);
Box schwarzian_residual(const AlgebraicNumber& tau, long bits);

/// Integer polynomial in X, Y.  Symmetric polynomials store only a <= b.
class BiPoly {
public:
    using Terms = std::map<std::pair<int, int>, Integer>;

    BiPoly() = default;
    explicit BiPoly(const Terms& terms);

    Integer coefficient(int a, int b) const;
    /// All nonzero terms with exponent pairs (a, b).
    Terms terms() const;
    bool is_symmetric() const { return symmetric_; }
    int degree_x() const;
    int degree_y() const;
    int total_degree() const;
    std::size_t max_coefficient_bits() const;

    Box evaluate(const Box& x, const Box& y) const;
    NFElem evaluate(const NFElem& x, const NFElem& y) const;
    /// Phi(x, Y) as a univariate polynomial for rational x.
    QPoly specialize_x(const Rational& x) const;

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms() == b.terms(); }

private:
    Terms stored_;
    bool symmetric_ = false;
};

struct PhiPolicy {
    long start_bits = 128;
    long max_bits = 1L << 15;
    int max_level = 10;
};

struct ComputationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The modular polynomial Phi_N, computed numerically, rounded and validated.
BiPoly phi_n(int n, const PhiPolicy& policy = {});
/// Number of triples (a, b, d) with a d = N, 0 <= b < d, gcd(a, b, d) = 1.
int psi(int n);

/// Integral binary quadratic form a X^2 + b XY + c Y^2.
struct BQF {
    Integer a, b, c;
    Integer discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    bool is_primitive() const;
    friend bool operator==(const BQF&, const BQF&) = default;
};

/// Equivalent reduced form of a positive definite form.
BQF reduce(const BQF& f);
/// All primitive reduced forms of discriminant d (d < 0, d = 0 or 1 mod 4).
std::vector<BQF> reduced_forms(long d);
/// The point (-b + sqrt(D)) / (2a) of the upper half plane.
AlgebraicNumber cm_point(const BQF& f);
/// Form of a point of the upper half plane that is quadratic over Q.
BQF form_of(const AlgebraicNumber& tau);

struct ClassPolicy {
    long start_bits = 128;
    long max_bits = 1L << 15;
    long max_abs_discriminant = 200;
};

/// Hilbert class polynomial H_D (monic, integer coefficients).
QPoly class_polynomial(long d, const ClassPolicy& policy = {});
/// j of the form's CM point as a certified root of H_D.
AlgebraicNumber singular_modulus(const BQF& f, const ClassPolicy& policy = {});

struct IsogenyLevel {
    enum class Status { found, none, undecided };
    Status status = Status::undecided;
    int level = 0;
};

/// Smallest N <= n_max with Phi_N(j(x), j(y)) = 0.  Special pairs are decided
/// through singular moduli; when either point is not special the answer is
/// read off the (projectively unique) rational orbit matrix.
IsogenyLevel find_isogeny_level(const AlgebraicNumber& x, const AlgebraicNumber& y, int n_max,
                                const ClassPolicy& policy = {});

} // namespace modtower

#endif
