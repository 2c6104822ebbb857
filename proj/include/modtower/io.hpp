#ifndef MODTOWER_IO_HPP
#define MODTOWER_IO_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "modtower/audit.hpp"
#include "modtower/towers.hpp"

namespace modtower::io {

using Json = nlohmann::json;

/// Input that does not match the expected schema; `where` is a JSON pointer.
struct SchemaError : std::invalid_argument {
    SchemaError(const std::string& where, const std::string& what)
        : std::invalid_argument(where + ": " + what), location(where)
    {
    }
    std::string location;
};

/// Decimal, fraction or integer string, or a JSON number (taken exactly).
Rational rational_from(const Json& j, const std::string& where);

Json to_json(const Rational& q);
Json to_json(const Interval& x);
Json to_json(const Box& b);
Box box_from(const Json& j, const std::string& where);

/// {"poly": ascending coefficients, "box": isolating box, "degree", "approx"}.
/// The box is refined to width 2^-bits and rounded outward to that grid.
Json to_json(const AlgebraicNumber& a, long bits = 64);
/// A literal string (see parse_algebraic) or a {"poly", "box"} object.
AlgebraicNumber algebraic_from(const Json& j, const std::string& where);
std::vector<AlgebraicNumber> algebraic_list_from(const Json& j, const std::string& where);

Json to_json(const QPoly& p);
Json to_json(const BiPoly& p);
Json to_json(const Moebius& g);
Json to_json(const BQF& f);

FormalInstance instance_from(const Json& j);
KhovanskiiCertificate khovanskii_from(const Json& j);

Json to_json(const AuditReport& r);
Json to_json(const KhovanskiiReport& r);
Json to_json(const TowerSample& s, long bits = 64);
Json to_json(const GDisjointnessReport& r);

} // namespace modtower::io

#endif
