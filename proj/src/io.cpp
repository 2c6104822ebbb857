#include "modtower/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace modtower::io {

namespace {

std::string fmt_double(double d)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", d);
    return buf;
}

const Json& member(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object())
        throw SchemaError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(where, std::string("missing key \"") + key + "\"");
    return *it;
}

std::string string_from(const Json& j, const std::string& where)
{
    if (!j.is_string())
        throw SchemaError(where, "expected a string");
    return j.get<std::string>();
}

std::optional<long> optional_count(const Json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    if (!it->is_number_integer() || it->get<long>() < 0)
        throw SchemaError(where + "/" + key, "expected a nonnegative integer or null");
    return it->get<long>();
}

} // namespace

Rational rational_from(const Json& j, const std::string& where)
{
    if (j.is_number_integer())
        return Rational(Integer(std::to_string(j.get<long long>())));
    if (j.is_number_float())
        return Rational(mpq_class(j.get<double>()));
    if (!j.is_string())
        throw SchemaError(where, "expected a number or numeric string");
    try {
        auto a = parse_algebraic(j.get<std::string>());
        if (auto q = a.rational_value())
            return *q;
    } catch (const std::exception&) {
    }
    throw SchemaError(where, "malformed rational \"" + j.get<std::string>() + "\"");
}

Json to_json(const Rational& q)
{
    std::ostringstream os;
    os << q;
    return os.str();
}

Json to_json(const Interval& x) { return Json::array({to_json(x.lo()), to_json(x.hi())}); }

Json to_json(const Box& b) { return Json{{"re", to_json(b.re())}, {"im", to_json(b.im())}}; }

Box box_from(const Json& j, const std::string& where)
{
    auto interval = [&](const char* key) {
        const Json& a = member(j, key, where);
        if (!a.is_array() || a.size() != 2)
            throw SchemaError(where + "/" + key, "expected [lo, hi]");
        Rational lo = rational_from(a[0], where + "/" + key + "/0");
        Rational hi = rational_from(a[1], where + "/" + key + "/1");
        if (hi < lo)
            throw SchemaError(where + "/" + key, "lo > hi");
        return Interval(lo, hi);
    };
    return Box(interval("re"), interval("im"));
}

Json to_json(const AlgebraicNumber& a, long bits)
{
    Integer scale = 1;
    scale <<= static_cast<unsigned long>(bits);
    Box b = a.refine(Rational(Integer(1), scale));
    auto down = [&](const Rational& q) { return Rational(floor(q * Rational(scale)), scale); };
    auto up = [&](const Rational& q) { return Rational(ceil(q * Rational(scale)), scale); };
    Box canon(Interval(down(b.re().lo()), up(b.re().hi())), Interval(down(b.im().lo()), up(b.im().hi())));
    Json coeffs = Json::array();
    QPoly m = minimal_polynomial(a);
    for (const auto& c : m.coeffs())
        coeffs.push_back(to_json(c));
    Json out{{"poly", coeffs},
             {"box", to_json(canon)},
             {"degree", m.degree()},
             {"approx", Json::array({fmt_double(a.approx_re()), fmt_double(a.approx_im())})}};
    if (auto q = a.rational_value())
        out["rational"] = to_json(*q);
    return out;
}

AlgebraicNumber algebraic_from(const Json& j, const std::string& where)
{
    if (j.is_number())
        return AlgebraicNumber(rational_from(j, where));
    if (j.is_string()) {
        try {
            return parse_algebraic(j.get<std::string>());
        } catch (const std::exception& e) {
            throw SchemaError(where, e.what());
        }
    }
    const Json& p = member(j, "poly", where);
    if (!p.is_array() || p.size() < 2)
        throw SchemaError(where + "/poly", "expected at least two ascending coefficients");
    std::vector<Rational> c;
    for (std::size_t k = 0; k < p.size(); ++k)
        c.push_back(rational_from(p[k], where + "/poly/" + std::to_string(k)));
    Box b = box_from(member(j, "box", where), where + "/box");
    try {
        return AlgebraicNumber::from_poly_box(QPoly(c), b);
    } catch (const std::exception& e) {
        throw SchemaError(where, e.what());
    }
}

std::vector<AlgebraicNumber> algebraic_list_from(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw SchemaError(where, "expected an array");
    std::vector<AlgebraicNumber> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(algebraic_from(j[k], where + "/" + std::to_string(k)));
    return out;
}

Json to_json(const QPoly& p)
{
    Json c = Json::array();
    for (const auto& x : p.coeffs())
        c.push_back(to_json(x));
    return c;
}

Json to_json(const BiPoly& p)
{
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms())
        terms.push_back(Json{{"e", Json::array({e.first, e.second})}, {"c", c.get_str()}});
    return Json{{"terms", terms}};
}

Json to_json(const Moebius& g)
{
    auto entry = [](const AlgebraicNumber& x) -> Json {
        if (auto q = x.rational_value())
            return to_json(*q);
        return to_json(x);
    };
    return Json::array({Json::array({entry(g.a()), entry(g.b())}), Json::array({entry(g.c()), entry(g.d())})});
}

Json to_json(const BQF& f) { return Json::array({f.a.get_str(), f.b.get_str(), f.c.get_str()}); }

FormalInstance instance_from(const Json& j)
{
    FormalInstance inst;
    if (!j.is_object())
        throw SchemaError("", "expected an object");
    if (auto it = j.find("schema"); it != j.end() && *it != "v1")
        throw SchemaError("/schema", "unsupported schema version");
    std::string kind = j.contains("kind") ? string_from(j["kind"], "/kind") : "exp";
    if (kind == "exp")
        inst.kind = InstanceKind::exp;
    else if (kind == "modular")
        inst.kind = InstanceKind::modular;
    else
        throw SchemaError("/kind", "expected \"exp\" or \"modular\"");

    const Json& syms = member(j, "symbols", "");
    if (!syms.is_array())
        throw SchemaError("/symbols", "expected an array");
    for (std::size_t k = 0; k < syms.size(); ++k) {
        const std::string w = "/symbols/" + std::to_string(k);
        const Json& s = syms[k];
        InstanceSymbol sym;
        sym.name = string_from(member(s, "name", w), w + "/name");
        if (s.contains("value"))
            sym.value = algebraic_from(s["value"], w + "/value");
        if (s.contains("enclosure"))
            sym.enclosure = box_from(s["enclosure"], w + "/enclosure");
        if (s.contains("image"))
            sym.images.push_back(string_from(s["image"], w + "/image"));
        if (s.contains("images")) {
            if (!s["images"].is_array())
                throw SchemaError(w + "/images", "expected an array");
            for (std::size_t i = 0; i < s["images"].size(); ++i)
                sym.images.push_back(string_from(s["images"][i], w + "/images/" + std::to_string(i)));
        }
        if (s.contains("parameter")) {
            if (!s["parameter"].is_boolean())
                throw SchemaError(w + "/parameter", "expected a boolean");
            sym.parameter = s["parameter"].get<bool>();
        }
        inst.symbols.push_back(std::move(sym));
    }
    if (j.contains("witness")) {
        const Json& wit = j["witness"];
        if (!wit.is_object())
            throw SchemaError("/witness", "expected an object keyed by symbol name");
        for (auto it = wit.begin(); it != wit.end(); ++it) {
            auto s = std::find_if(inst.symbols.begin(), inst.symbols.end(),
                                  [&](const InstanceSymbol& x) { return x.name == it.key(); });
            if (s == inst.symbols.end())
                throw SchemaError("/witness/" + it.key(), "unknown symbol");
            s->enclosure = box_from(it.value(), "/witness/" + it.key());
        }
    }
    if (j.contains("relations")) {
        const Json& r = j["relations"];
        if (!r.is_array())
            throw SchemaError("/relations", "expected an array");
        for (std::size_t k = 0; k < r.size(); ++k)
            inst.relations.push_back(string_from(r[k], "/relations/" + std::to_string(k)));
    }
    if (j.contains("certificates")) {
        const Json& c = j["certificates"];
        if (!c.is_object())
            throw SchemaError("/certificates", "expected an object");
        inst.certificates.trdeg = optional_count(c, "trdeg", "/certificates");
        inst.certificates.trdeg_mscd = optional_count(c, "trdeg_mscd", "/certificates");
        inst.certificates.dim_e = optional_count(c, "dim_e", "/certificates");
        inst.certificates.dim_j = optional_count(c, "dim_j", "/certificates");
    }
    for (std::size_t k = 0; k < inst.relations.size(); ++k)
        try {
            parse_polynomial(inst.relations[k], inst.variable_names());
        } catch (const ParseError& e) {
            throw SchemaError("/relations/" + std::to_string(k), e.what());
        }
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/symbols", e.what());
    }
    return inst;
}

KhovanskiiCertificate khovanskii_from(const Json& j)
{
    KhovanskiiCertificate c;
    const Json& n = member(j, "n", "");
    if (!n.is_number_integer() || n.get<int>() < 1)
        throw SchemaError("/n", "expected a positive integer");
    c.n = n.get<int>();
    const Json& polys = member(j, "polys", "");
    const Json& box = member(j, "box", "");
    if (!polys.is_array() || polys.size() != static_cast<std::size_t>(c.n))
        throw SchemaError("/polys", "expected n polynomial strings");
    if (!box.is_array() || box.size() != static_cast<std::size_t>(c.n))
        throw SchemaError("/box", "expected n boxes");
    for (std::size_t k = 0; k < polys.size(); ++k) {
        const std::string w = "/polys/" + std::to_string(k);
        try {
            c.polys.push_back(KhovanskiiCertificate::parse(string_from(polys[k], w), c.n));
        } catch (const ParseError& e) {
            throw SchemaError(w, e.what());
        }
    }
    for (std::size_t k = 0; k < box.size(); ++k)
        c.box.push_back(box_from(box[k], "/box/" + std::to_string(k)));
    return c;
}

Json to_json(const AuditReport& r)
{
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name},
                              {"verdict", to_string(c.verdict)},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"rhs_exact", c.rhs_exact},
                              {"statement", c.statement}});
    Json sch = Json::array();
    for (const auto& s : r.schneider)
        sch.push_back(Json{{"symbol", s.symbol},
                           {"discriminant", s.discriminant},
                           {"class_polynomial", to_json(s.class_polynomial)},
                           {"j", to_json(s.j_value)}});
    return Json{{"kind", r.kind},
                {"verdict", to_string(r.verdict)},
                {"conditional", r.conditional},
                {"checks", checks},
                {"schneider", sch},
                {"notes", r.notes}};
}

Json to_json(const KhovanskiiReport& r)
{
    Json zero = Json::array();
    for (const auto& b : r.zero)
        zero.push_back(to_json(b));
    return Json{{"verdict", to_string(r.verdict)},
                {"reason", r.reason},
                {"bits", r.bits},
                {"zero", zero},
                {"jacobian_det", to_json(r.jacobian_det)}};
}

Json to_json(const TowerSample& s, long bits)
{
    Json elems = Json::array();
    for (const auto& e : s.elements) {
        Json prov{{"stage", e.provenance.stage}};
        if (s.side == Side::J || s.side == Side::K) {
            prov["form"] = to_json(e.provenance.form);
            prov["discriminant"] = e.provenance.discriminant;
            if (s.side == Side::K)
                prov["shift"] = e.provenance.shift.get_str();
        } else {
            prov["expression"] = e.provenance.expression;
        }
        Json el{{"provenance", prov}};
        if (e.value)
            el["value"] = to_json(*e.value, bits);
        else
            el["enclosure"] = to_json(e.enclose(bits));
        elems.push_back(std::move(el));
    }
    Json base = Json::array();
    for (const auto& g : s.base.generators)
        base.push_back(to_json(g, bits));
    return Json{{"side", to_string(s.side)},
                {"depth", s.depth},
                {"base", base},
                {"field_degree", s.field ? Json(s.field->degree()) : Json(nullptr)},
                {"elements", elems}};
}

Json to_json(const GDisjointnessReport& r)
{
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
        Json j{{"pair", Json::array({p.first, p.second})}, {"method", p.method}, {"violation", p.violation}};
        j["g"] = p.g ? to_json(*p.g) : Json(nullptr);
        j["h"] = p.h ? to_json(*p.h) : Json(nullptr);
        pairs.push_back(std::move(j));
    }
    return Json{{"direction", to_string(r.direction)},
                {"degree_e", r.degree_e},
                {"degree_f", r.degree_f},
                {"degree_l", r.degree_l},
                {"linearly_disjoint", r.linearly_disjoint},
                {"pairs_checked", r.pairs_checked},
                {"equivalent_pairs", r.equivalent_pairs},
                {"pairs", pairs},
                {"intersection_degree", r.intersection_degree},
                {"intersection_equals_e", r.intersection_equals_e},
                {"intersection_witness", r.intersection_witness ? to_json(*r.intersection_witness) : Json(nullptr)},
                {"violations", r.violations}};
}

} // namespace modtower::io
