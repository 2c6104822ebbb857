#ifndef MODTOWER_AUDIT_HPP
#define MODTOWER_AUDIT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modtower/modular.hpp"
#include "modtower/mpoly.hpp"

namespace modtower {

// ---- Khovanskii systems -----------------------------------------------------

/// Polynomials p_1..p_n in z_1..z_n, w_1..w_n and a box for (y_1..y_n); the
/// system is f_i(z) = p_i(z, exp(z)).
struct KhovanskiiCertificate {
    int n = 0;
    std::vector<MPoly> polys;
    std::vector<Box> box;

    /// z1..zn, w1..wn
    static std::vector<std::string> variable_names(int n);
    /// Parses over z1..zn, w1..wn; for n = 1 also over z, w.  Case-insensitive.
    static MPoly parse(const std::string& text, int n);
};

enum class KhovanskiiVerdict { valid, invalid, undecided };
std::string to_string(KhovanskiiVerdict v);

struct KhovanskiiReport {
    KhovanskiiVerdict verdict = KhovanskiiVerdict::undecided;
    std::string reason;
    long bits = 0;
    /// Krawczyk image intersected with the box (valid only).
    std::vector<Box> zero;
    /// Enclosure of det J over the box at the last precision tried.
    Box jacobian_det;
};

struct KhovanskiiPolicy {
    long start_bits = 64;
    long max_bits = 1024;
};

/// valid: a unique zero in the box is certified by a Krawczyk test and the
/// Jacobian determinant enclosure over the box excludes 0.  invalid: some f_i
/// is certified nonzero on the box, or the Jacobian determinant is certified
/// to vanish at a point of the box.
KhovanskiiReport verify_khovanskii(const KhovanskiiCertificate& cert, const KhovanskiiPolicy& policy = {});

/// Enclosure of the certified zero of width below 2^-bits, or nullopt if the
/// Krawczyk test fails on the box.
std::optional<std::vector<Box>> khovanskii_zero(const KhovanskiiCertificate& cert, long bits);

// ---- formal instances -------------------------------------------------------

enum class InstanceKind { exp, modular };

struct InstanceSymbol {
    std::string name;
    std::optional<AlgebraicNumber> value;
    /// Witness enclosure for symbols without an exact value.
    std::optional<Box> enclosure;
    /// exp: {exp(x)}; modular: {j(z), j'(z), j''(z)}.  Prefixes may be given.
    std::vector<std::string> images;
    /// Member of the parameter tuple t.
    bool parameter = false;
};

struct Certificates {
    std::optional<long> trdeg;
    /// trdeg of Q(z, j(z), j'(z), j''(z)); trdeg above refers to Q(z, j(z)).
    std::optional<long> trdeg_mscd;
    std::optional<long> dim_e;
    std::optional<long> dim_j;
};

struct FormalInstance {
    InstanceKind kind = InstanceKind::exp;
    std::vector<InstanceSymbol> symbols;
    /// Polynomials over Q in the symbol and image names.
    std::vector<std::string> relations;
    Certificates certificates;

    /// Symbol names followed by image names, in declaration order.
    std::vector<std::string> variable_names() const;
    /// Structural checks: unique names, image counts, nonnegative certificates.
    void validate() const;
};

struct InconsistentInstance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct MissingCertificate : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Verdict { satisfied, violation_candidate, undecided, convenient, not_convenient };
std::string to_string(Verdict v);

struct AuditCheck {
    std::string name;
    Verdict verdict = Verdict::undecided;
    long lhs = 0;
    long rhs = 0;
    bool rhs_exact = true;
    std::string statement;
};

struct SchneiderCertificate {
    std::string symbol;
    long discriminant = 0;
    QPoly class_polynomial;
    AlgebraicNumber j_value;
};

struct AuditReport {
    std::string kind;
    Verdict verdict = Verdict::undecided;
    /// Depends on user-declared certificates.
    bool conditional = true;
    std::vector<AuditCheck> checks;
    std::vector<SchneiderCertificate> schneider;
    std::vector<std::string> notes;
};

struct AuditPolicy {
    long bits = 128;
    /// Height bound for numeric linear-relation searches.
    long height = 10;
    ClassPolicy class_policy{};
};

/// Enclosures of all variables (symbols, then images) at the given precision.
std::vector<Box> witness_values(const FormalInstance& inst, long bits);
/// Throws InconsistentInstance when a relation is certified nonzero at the witness.
void check_relations(const FormalInstance& inst, long bits);

AuditReport audit_sc_instance(const FormalInstance& inst, const AuditPolicy& policy = {});
AuditReport audit_mscd_instance(const FormalInstance& inst, const AuditPolicy& policy = {});

enum class Flavor { exp, j };
AuditReport check_convenient(const FormalInstance& inst, Flavor flavor, const AuditPolicy& policy = {});

} // namespace modtower

#endif
