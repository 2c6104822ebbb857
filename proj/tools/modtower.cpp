// modtower: batch command-line front end.  One JSON document per run.
//
// exit codes: 0 affirmative, 1 negative, 2 input or internal error, 3 undecided

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modtower/io.hpp"

using namespace modtower;
using io::Json;

namespace {

enum Exit { ok = 0, negative = 1, error = 2, undecided = 3 };

struct Config {
    long prec = 128;
    int nmax = 5;
    long dmax = 20;
    long height = 10;
    int depth = 1;
    std::string in, out;
    std::string json;
    unsigned long seed = 0;
    long max_bits = 1L << 15;

    PhiPolicy phi_policy() const { return {std::min(128L, max_bits), max_bits, 10}; }
    ClassPolicy class_policy() const { return {std::min(128L, max_bits), max_bits, 200}; }
};

struct Outcome {
    Json result;
    int code = ok;
};

AlgebraicNumber literal(const std::string& text, const std::string& where)
{
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw io::SchemaError(where, e.what());
        }
        return io::algebraic_from(j, where);
    }
    return io::algebraic_from(Json(text), where);
}

std::vector<AlgebraicNumber> literals(const std::vector<std::string>& xs, const std::string& where)
{
    std::vector<AlgebraicNumber> out;
    for (std::size_t k = 0; k < xs.size(); ++k)
        out.push_back(literal(xs[k], where + "/" + std::to_string(k)));
    return out;
}

PresentedField field_from(const std::vector<std::string>& gens, const std::string& where)
{
    if (gens.empty())
        return rationals();
    return primitive_element(literals(gens, where));
}

AlgebraicNumber require(const std::string& text, const std::string& flag)
{
    if (text.empty())
        throw io::SchemaError(flag, "required");
    return literal(text, flag);
}

Json read_document(const Config& cfg)
{
    std::string text;
    if (!cfg.json.empty()) {
        text = cfg.json;
    } else if (cfg.in == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        text = os.str();
    } else if (!cfg.in.empty()) {
        std::ifstream f(cfg.in);
        if (!f)
            throw io::SchemaError("--in", "cannot open " + cfg.in);
        std::ostringstream os;
        os << f.rdbuf();
        text = os.str();
    } else {
        throw io::SchemaError("--in", "an input document is required (--in FILE, --in - or --json TEXT)");
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw io::SchemaError("--in", e.what());
    }
}

int verdict_code(Verdict v)
{
    switch (v) {
    case Verdict::satisfied:
    case Verdict::convenient: return ok;
    case Verdict::violation_candidate:
    case Verdict::not_convenient: return negative;
    case Verdict::undecided: return undecided;
    }
    return error;
}

std::string bipoly_text(const BiPoly& p)
{
    auto terms = p.terms();
    std::vector<std::pair<std::pair<int, int>, Integer>> v(terms.begin(), terms.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
        int dx = x.first.first + x.first.second, dy = y.first.first + y.first.second;
        return dx != dy ? dx > dy : x.first.first > y.first.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : v) {
        Integer a = abs(c);
        os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
        first = false;
        std::string mono;
        if (e.first)
            mono += e.first == 1 ? "X" : "X^" + std::to_string(e.first);
        if (e.second)
            mono += std::string(mono.empty() ? "" : "*") + (e.second == 1 ? "Y" : "Y^" + std::to_string(e.second));
        if (mono.empty())
            os << a.get_str();
        else if (a == 1)
            os << mono;
        else
            os << a.get_str() << "*" << mono;
    }
    return first ? "0" : os.str();
}

Json relation_json(const RelationResult& r)
{
    const char* s = r.status == RelationStatus::verified         ? "verified"
                    : r.status == RelationStatus::relation_found ? "relation_found"
                                                                 : "undecided";
    return Json{{"status", s}, {"coefficients", r.coefficients}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and certified computations for special points, modular polynomials and tower audits"};
    app.fallthrough();
    app.require_subcommand(1);
    Config cfg;
    if (const char* env = std::getenv("MODTOWER_PREC"))
        cfg.prec = std::atol(env);
    app.add_option("--prec", cfg.prec, "working precision in bits (default from MODTOWER_PREC or 128)")
        ->check(CLI::PositiveNumber);
    app.add_option("--nmax", cfg.nmax, "largest isogeny level")->check(CLI::PositiveNumber);
    app.add_option("--dmax", cfg.dmax, "largest |D| for towers")->check(CLI::PositiveNumber);
    app.add_option("--height", cfg.height, "height bound (forms, linear relations)")->check(CLI::PositiveNumber);
    app.add_option("--depth", cfg.depth, "tower depth")->check(CLI::Range(1, 2));
    app.add_option("--in", cfg.in, "input document ('-' for stdin)");
    app.add_option("--json", cfg.json, "inline input document");
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--seed", cfg.seed, "seed recorded for replay");
    app.add_option("--max-bits", cfg.max_bits, "budget for adaptive precision (modular and class polynomials)")
        ->check(CLI::Range(64L, 1L << 20));

    Json args = Json::object();
    std::function<Outcome()> run;
    std::string command;

    auto text_opt = [&](CLI::App* sub, const std::string& name, std::string& target, const std::string& help) {
        sub->add_option("--" + name, target, help);
    };

    // orbit
    std::string ox, oy;
    std::vector<std::string> ofield, oe, ol;
    auto* orbit = app.add_subcommand("orbit", "g in GL2(F) with g x = y, optionally descended to GL2(E)");
    text_opt(orbit, "x", ox, "point");
    text_opt(orbit, "y", oy, "point");
    orbit->add_option("--field", ofield, "generators of F (default Q)");
    orbit->add_option("--e", oe, "generators of E for descent");
    orbit->add_option("--l", ol, "generators of L for descent (default x, y)");
    orbit->callback([&] {
        command = "orbit";
        args = {{"x", ox}, {"y", oy}, {"field", ofield}, {"e", oe}, {"l", ol}};
        run = [&]() -> Outcome {
            AlgebraicNumber x = require(ox, "--x"), y = require(oy, "--y");
            PresentedField f = field_from(ofield, "--field");
            auto g = orbit_equiv(x, y, f);
            Json r{{"equivalent", g.has_value()}, {"matrix", g ? io::to_json(*g) : Json(nullptr)}};
            if (g && !oe.empty()) {
                PresentedField e = field_from(oe, "--e");
                PresentedField l = ol.empty() ? primitive_element({x, y}) : field_from(ol, "--l");
                Descent d = descend(*g, x, y, e, l);
                const char* cases[] = {"a", "b", "c", "d"};
                r["descent"] = {{"matrix", io::to_json(d.h)}, {"case", cases[static_cast<int>(d.which)]}};
            }
            return {r, g ? ok : negative};
        };
    });

    // special
    std::string sx;
    auto* special = app.add_subcommand("special", "whether x in the upper half plane is special");
    text_opt(special, "x", sx, "point");
    special->callback([&] {
        command = "special";
        args = {{"x", sx}};
        run = [&]() -> Outcome {
            auto r = is_special(require(sx, "--x"));
            return {{{"special", r.special}, {"witness", r.witness ? io::to_json(*r.witness) : Json(nullptr)}},
                    r.special ? ok : negative};
        };
    });

    // dimg
    std::vector<std::string> gx, gb, gfield;
    bool sigma = false;
    auto* dimg = app.add_subcommand("dimg", "number of G(F)-orbits of x avoiding b (or special points)");
    dimg->add_option("--x", gx, "points");
    dimg->add_option("--b", gb, "points to discount");
    dimg->add_option("--field", gfield, "generators of F (default Q)");
    dimg->add_flag("--sigma", sigma, "discount special points (over Q)");
    dimg->callback([&] {
        command = "dimg";
        args = {{"x", gx}, {"b", gb}, {"field", gfield}, {"sigma", sigma}};
        run = [&]() -> Outcome {
            auto x = literals(gx, "--x");
            int d = sigma ? dim_G_sigma(x) : dim_G(x, literals(gb, "--b"), field_from(gfield, "--field"));
            return {{{"dim_G", d}}, ok};
        };
    });

    // ldim
    std::vector<std::string> la, lb, lfield;
    auto* ldim_cmd = app.add_subcommand("ldim", "l.dim_F(a | b)");
    ldim_cmd->add_option("--a", la, "elements");
    ldim_cmd->add_option("--b", lb, "conditioning elements");
    ldim_cmd->add_option("--field", lfield, "generators of F (default Q)");
    ldim_cmd->callback([&] {
        command = "ldim";
        args = {{"a", la}, {"b", lb}, {"field", lfield}};
        run = [&]() -> Outcome {
            return {{{"ldim", ldim(field_from(lfield, "--field"), literals(la, "--a"), literals(lb, "--b"))}}, ok};
        };
    });

    // disjoint
    std::vector<std::string> de, df, dl;
    auto* disjoint = app.add_subcommand("disjoint", "linear disjointness of E(f) and E(l) over E");
    disjoint->add_option("--e", de, "generators of E (default Q)");
    disjoint->add_option("--f", df, "generators of F over E");
    disjoint->add_option("--l", dl, "generators of L over E");
    disjoint->callback([&] {
        command = "disjoint";
        args = {{"e", de}, {"f", df}, {"l", dl}};
        run = [&]() -> Outcome {
            auto r = linearly_disjoint(field_from(de, "--e"), literals(df, "--f"), literals(dl, "--l"));
            if (std::holds_alternative<Disjoint>(r))
                return {{{"disjoint", true}, {"witness", nullptr}}, ok};
            const auto& w = std::get<Witness>(r);
            Json c = Json::array(), e = Json::array();
            for (const auto& x : w.coefficients)
                c.push_back(io::to_json(x));
            for (const auto& x : w.elements)
                e.push_back(io::to_json(x));
            return {{{"disjoint", false}, {"witness", {{"coefficients", c}, {"elements", e}}}}, negative};
        };
    });

    // phi
    int pn = 0;
    auto* phi = app.add_subcommand("phi", "modular polynomial Phi_N");
    phi->add_option("--n", pn, "level")->required()->check(CLI::Range(1, 10));
    phi->callback([&] {
        command = "phi";
        args = {{"n", pn}};
        run = [&]() -> Outcome {
            BiPoly p = phi_n(pn, cfg.phi_policy());
            return {{{"n", pn},
                     {"psi", psi(pn)},
                     {"poly", io::to_json(p)},
                     {"text", bipoly_text(p)},
                     {"symmetric", p.is_symmetric()},
                     {"total_degree", p.total_degree()}},
                    ok};
        };
    });

    // classpoly
    long cd = 0;
    auto* classpoly = app.add_subcommand("classpoly", "Hilbert class polynomial H_D");
    classpoly->add_option("--d", cd, "discriminant (negative)")->required();
    classpoly->callback([&] {
        command = "classpoly";
        args = {{"d", cd}};
        run = [&]() -> Outcome {
            QPoly h = class_polynomial(cd, cfg.class_policy());
            return {{{"d", cd}, {"class_number", h.degree()}, {"poly", io::to_json(h)}, {"text", to_string(h)}}, ok};
        };
    });

    // jval
    std::string jt;
    bool derivs = false;
    auto* jval = app.add_subcommand("jval", "enclosure of j(tau)");
    text_opt(jval, "tau", jt, "point of the upper half plane");
    jval->add_flag("--derivs", derivs, "also j', j'', j'''");
    jval->callback([&] {
        command = "jval";
        args = {{"tau", jt}, {"derivs", derivs}};
        run = [&]() -> Outcome {
            AlgebraicNumber tau = require(jt, "--tau");
            if (!derivs)
                return {{{"j", io::to_json(eval_j(tau, cfg.prec))}}, ok};
            auto d = eval_j_derivs(tau, cfg.prec);
            return {{{"j", io::to_json(d.j)},
                     {"d1", io::to_json(d.d1)},
                     {"d2", io::to_json(d.d2)},
                     {"d3", io::to_json(d.d3)}},
                    ok};
        };
    });

    // schwarzian
    std::string st;
    auto* schw = app.add_subcommand("schwarzian", "enclosure of the residual of the third-order equation for j");
    text_opt(schw, "tau", st, "point of the upper half plane");
    schw->callback([&] {
        command = "schwarzian";
        args = {{"tau", st}};
        run = [&]() -> Outcome {
            Box r = schwarzian_residual(require(st, "--tau"), cfg.prec);
            return {{{"residual", io::to_json(r)}, {"contains_zero", r.contains_zero()}},
                    r.contains_zero() ? ok : negative};
        };
    });

    // isogeny
    std::string ix, iy;
    auto* isog = app.add_subcommand("isogeny", "smallest N <= nmax with Phi_N(j(x), j(y)) = 0");
    text_opt(isog, "x", ix, "special point");
    text_opt(isog, "y", iy, "special point");
    isog->callback([&] {
        command = "isogeny";
        args = {{"x", ix}, {"y", iy}};
        run = [&]() -> Outcome {
            auto r = find_isogeny_level(require(ix, "--x"), require(iy, "--y"), cfg.nmax, cfg.class_policy());
            switch (r.status) {
            case IsogenyLevel::Status::found: return {{{"status", "found"}, {"level", r.level}}, ok};
            case IsogenyLevel::Status::none: return {{{"status", "none"}, {"level", nullptr}}, negative};
            default: return {{{"status", "undecided"}, {"level", nullptr}}, undecided};
            }
        };
    });

    // tower
    std::string tside = "J";
    std::vector<std::string> tbase;
    int seeds = 2;
    bool with_field = false;
    auto* tower = app.add_subcommand("tower", "special-point tower sample (J, K) or numeric exp sample (E, L)");
    tower->add_option("--side", tside, "J, K, E or L")->check(CLI::IsMember({"J", "K", "E", "L"}));
    tower->add_option("--base", tbase, "generators of the base field (default Q)");
    tower->add_option("--seeds", seeds, "seed count for E, L")->check(CLI::PositiveNumber);
    tower->add_flag("--field-degree", with_field, "also compute the degree of the sample field");
    tower->callback([&] {
        command = "tower";
        args = {{"side", tside}, {"base", tbase}, {"seeds", seeds}, {"field_degree", with_field}};
        run = [&]() -> Outcome {
            TowerSample s;
            if (tside == "E" || tside == "L")
                s = build_exp_tower(tside == "E" ? Side::E_numeric : Side::L_numeric, cfg.depth, seeds);
            else
                s = build_special_tower(field_from(tbase, "--base"), tside == "J" ? Side::J : Side::K,
                                        {cfg.depth, cfg.dmax, cfg.height, with_field}, cfg.class_policy());
            return {io::to_json(s, cfg.prec), ok};
        };
    });

    // audit
    std::string flavor = "exp";
    auto* audit = app.add_subcommand("audit", "audit a formal instance or a Khovanskii certificate");
    audit->require_subcommand(1);
    audit->fallthrough();
    auto audit_policy = [&] {
        AuditPolicy p;
        p.bits = cfg.prec;
        p.height = cfg.height;
        p.class_policy = cfg.class_policy();
        return p;
    };
    audit->add_subcommand("sc", "Schanuel-type inequality for an exp instance")->callback([&] {
        command = "audit sc";
        run = [&]() -> Outcome {
            auto r = audit_sc_instance(io::instance_from(read_document(cfg)), audit_policy());
            return {io::to_json(r), verdict_code(r.verdict)};
        };
    });
    audit->add_subcommand("mscd", "modular inequalities (with and without derivatives)")->callback([&] {
        command = "audit mscd";
        run = [&]() -> Outcome {
            auto r = audit_mscd_instance(io::instance_from(read_document(cfg)), audit_policy());
            return {io::to_json(r), verdict_code(r.verdict)};
        };
    });
    auto* conv = audit->add_subcommand("convenient", "convenience equality from declared certificates");
    conv->add_option("--flavor", flavor, "exp or j")->check(CLI::IsMember({"exp", "j"}));
    conv->callback([&] {
        command = "audit convenient";
        args = {{"flavor", flavor}};
        run = [&]() -> Outcome {
            auto r = check_convenient(io::instance_from(read_document(cfg)), flavor == "exp" ? Flavor::exp : Flavor::j,
                                      audit_policy());
            return {io::to_json(r), verdict_code(r.verdict)};
        };
    });
    audit->add_subcommand("khovanskii", "verify a Khovanskii certificate")->callback([&] {
        command = "audit khovanskii";
        run = [&]() -> Outcome {
            auto cert = io::khovanskii_from(read_document(cfg));
            KhovanskiiPolicy pol;
            pol.max_bits = std::max(cfg.prec * 8, pol.start_bits);
            auto r = verify_khovanskii(cert, pol);
            Json out = io::to_json(r);
            if (r.verdict == KhovanskiiVerdict::valid) {
                std::vector<LinValue> vals;
                for (int i = 0; i < cert.n; ++i)
                    vals.push_back(LinValue::numeric([cert, i](long bits) {
                        auto z = khovanskii_zero(cert, bits);
                        if (!z)
                            throw std::logic_error("certified zero lost on refinement");
                        return (*z)[static_cast<std::size_t>(i)];
                    }));
                out["witness_linear_relations"] = relation_json(
                    no_small_linear_relation(vals, cfg.height, rationals(), cfg.prec * 8));
            }
            int code = r.verdict == KhovanskiiVerdict::valid     ? ok
                       : r.verdict == KhovanskiiVerdict::invalid ? negative
                                                                 : undecided;
            return {out, code};
        };
    });

    // gdisjoint-sample
    std::string direction = "A-from-B";
    auto* gd = app.add_subcommand("gdisjoint-sample", "sampled G-disjointness check between two samples over E");
    gd->add_option("--direction", direction, "A-from-B or B-from-A")->check(CLI::IsMember({"A-from-B", "B-from-A"}));
    gd->callback([&] {
        command = "gdisjoint-sample";
        args = {{"direction", direction}};
        run = [&]() -> Outcome {
            Json doc = read_document(cfg);
            auto side = [&](const char* key) {
                if (!doc.is_object() || !doc.contains(key))
                    throw io::SchemaError(std::string("/") + key, "missing");
                const Json& s = doc[key];
                // a tower sample document or a plain list
                if (s.is_object()) {
                    std::vector<AlgebraicNumber> v;
                    if (s.contains("base"))
                        for (const auto& g : io::algebraic_list_from(s["base"], std::string("/") + key + "/base"))
                            v.push_back(g);
                    const Json& el = s.contains("elements") ? s["elements"] : Json::array();
                    for (std::size_t k = 0; k < el.size(); ++k) {
                        const std::string w = std::string("/") + key + "/elements/" + std::to_string(k);
                        if (!el[k].contains("value"))
                            throw io::SchemaError(w, "numeric elements cannot be used here");
                        v.push_back(io::algebraic_from(el[k]["value"], w + "/value"));
                    }
                    return v;
                }
                return io::algebraic_list_from(s, std::string("/") + key);
            };
            auto a = side("A"), b = side("B");
            std::vector<AlgebraicNumber> e = doc.contains("E") ? io::algebraic_list_from(doc["E"], "/E")
                                                               : std::vector<AlgebraicNumber>{};
            PresentedField ef = e.empty() ? rationals() : primitive_element(e);
            auto r = check_g_disjointness_sample(a, b, ef,
                                                 direction == "A-from-B" ? Direction::a_from_b : Direction::b_from_a);
            return {io::to_json(r), r.violations == 0 ? ok : negative};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return error;
    }

    Json doc{{"schema", "v1"},
             {"command", command},
             {"config",
              {{"prec", cfg.prec},
               {"nmax", cfg.nmax},
               {"dmax", cfg.dmax},
               {"height", cfg.height},
               {"depth", cfg.depth},
               {"seed", cfg.seed},
               {"max_bits", cfg.max_bits},
               {"in", cfg.in},
               {"args", args}}}};
    if (!cfg.json.empty())
        doc["config"]["json"] = cfg.json;
    int code = ok;
    try {
        Outcome o = run();
        doc["result"] = o.result;
        code = o.code;
    } catch (const io::SchemaError& e) {
        doc["error"] = {{"message", e.what()}, {"location", e.location}};
        code = error;
    } catch (const ComputationFailure& e) {
        doc["error"] = {{"message", e.what()}, {"location", nullptr}};
        code = undecided;
    } catch (const std::exception& e) {
        doc["error"] = {{"message", e.what()}, {"location", nullptr}};
        code = error;
    }
    if (doc.contains("error"))
        std::cerr << "modtower: " << doc["error"]["message"].get<std::string>() << "\n";

    const std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            std::cerr << "modtower: cannot write " << cfg.out << "\n";
            return error;
        }
        f << text;
    }
    return code;
}
