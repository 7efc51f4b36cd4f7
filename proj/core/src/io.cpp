#include "arccrit/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "arccrit/error.hpp"

namespace arccrit {

using Json = nlohmann::ordered_json;

namespace {

// ---- series literals ----

class SeriesParser {
public:
    SeriesParser(const std::string& text, std::size_t begin, std::size_t end) : s_(text), pos_(begin), end_(end) {}

    PuiseuxSeries parse(Exponent truncation, std::int64_t max_ram)
    {
        std::vector<Term> terms;
        std::optional<Exponent> big_o;
        bool first = true;
        for (;;) {
            skip();
            if (pos_ >= end_) {
                if (first) {
                    fail("empty series");
                }
                break;
            }
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = get() == '-' ? -1 : 1;
                skip();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            if (peek() == 'O') {
                ++pos_;
                expect('(');
                expect('t');
                expect('^');
                big_o = exponent();
                expect(')');
                if (sign < 0) {
                    fail("O-term must be added");
                }
                skip();
                if (pos_ < end_) {
                    fail("O-term must come last");
                }
                break;
            }
            terms.push_back(term(sign));
        }
        const Exponent trunc = big_o ? *big_o : truncation;
        if (trunc <= Exponent(0)) {
            fail("truncation must be positive");
        }
        for (const auto& t : terms) {
            if (t.exponent >= trunc) {
                fail("term at or beyond the truncation");
            }
        }
        return PuiseuxSeries(std::move(terms), trunc, max_ram);
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw SpecError("series literal, offset " + std::to_string(pos_) + ": " + what);
    }

private:
    char peek() const { return pos_ < end_ ? s_[pos_] : '\0'; }
    char get() { return pos_ < end_ ? s_[pos_++] : '\0'; }
    void skip()
    {
        while (pos_ < end_ && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }
    void expect(char c)
    {
        skip();
        if (get() != c) {
            --pos_;
            fail(std::string("expected '") + c + "'");
        }
        skip();
    }

    std::int64_t integer()
    {
        skip();
        const std::size_t start = pos_;
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        const std::size_t digits = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        if (pos_ == digits) {
            pos_ = start;
            fail("expected an integer");
        }
        const std::string tok = s_.substr(digits, pos_ - digits);
        if (tok.size() > 18) {
            fail("integer too large");
        }
        const auto v = static_cast<std::int64_t>(std::stoll(tok));
        return neg ? -v : v;
    }

    // p or p/q, reduced.
    Exponent fraction()
    {
        const std::int64_t p = integer();
        std::int64_t q = 1;
        if (peek() == '/') {
            ++pos_;
            q = integer();
        }
        const auto e = Exponent::from_reduced(p, q);
        if (!e) {
            fail("fraction " + std::to_string(p) + "/" + std::to_string(q) + " is not in lowest terms");
        }
        return *e;
    }

    Exponent exponent()
    {
        skip();
        if (peek() == '(') {
            ++pos_;
            const Exponent e = fraction();
            expect(')');
            return e;
        }
        return Exponent(integer());
    }

    Coeff coefficient()
    {
        skip();
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        if (peek() == '/') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
        }
        const std::string tok = s_.substr(start, pos_ - start);
        Coeff c;
        if (c.set_str(tok, 10) != 0 || tok.back() == '/') {
            pos_ = start;
            fail("bad coefficient");
        }
        if (c.get_den() == 0) {
            pos_ = start;
            fail("zero denominator");
        }
        Coeff canon = c;
        canon.canonicalize();
        if (canon.get_num() != c.get_num() || canon.get_den() != c.get_den()) {
            pos_ = start;
            fail("coefficient " + tok + " is not in lowest terms");
        }
        return canon;
    }

    Term term(int sign)
    {
        skip();
        Coeff c = 1;
        bool has_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            c = coefficient();
            has_coeff = true;
            skip();
            if (peek() == '*') {
                ++pos_;
                skip();
            } else {
                return Term{Exponent(0), sign * c}; // a bare 0 is the zero series
            }
        }
        if (peek() != 't') {
            fail(has_coeff ? "expected 't' after '*'" : "expected a term");
        }
        ++pos_;
        Exponent e(1);
        skip();
        if (peek() == '^') {
            ++pos_;
            e = exponent();
        }
        if (c == 0) {
            fail("zero term");
        }
        return Term{e, sign * c};
    }

    const std::string& s_;
    std::size_t pos_;
    std::size_t end_;
};

// ---- JSON helpers ----

[[noreturn]] void field_error(const std::string& path, const std::string& what)
{
    throw SpecError("germ spec " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& member(const Json& j, const std::string& path, const char* key)
{
    if (!j.is_object()) {
        field_error(path, "expected an object");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        field_error(path + "/" + key, "missing");
    }
    return *it;
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys)
{
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* allowed : keys) {
            ok = ok || k == allowed;
        }
        if (!ok) {
            field_error(path + "/" + k, "unknown field");
        }
    }
}

const Json& array_at(const Json& j, const std::string& path)
{
    if (!j.is_array()) {
        field_error(path, "expected an array");
    }
    return j;
}

std::int64_t integer_at(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) {
        field_error(path, "expected an integer");
    }
    return j.get<std::int64_t>();
}

Exponent exponent_at(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) {
        field_error(path, "expected [num, den]");
    }
    const std::int64_t p = integer_at(j[0], path + "/0");
    const std::int64_t q = integer_at(j[1], path + "/1");
    if (q == 0) {
        field_error(path, "zero denominator");
    }
    const auto e = Exponent::from_reduced(p, q);
    if (!e) {
        field_error(path, "exponent not in lowest terms with positive denominator");
    }
    return *e;
}

Coeff coeff_at(const Json& j, const std::string& path)
{
    if (!j.is_string()) {
        field_error(path, "expected a rational string such as \"-3/2\"");
    }
    const std::string s = j.get<std::string>();
    Coeff c;
    if (s.empty() || s.find_first_not_of("-0123456789/") != std::string::npos || c.set_str(s, 10) != 0) {
        field_error(path, "bad rational \"" + s + "\"");
    }
    if (c.get_den() == 0) {
        field_error(path, "zero denominator");
    }
    Coeff canon = c;
    canon.canonicalize();
    if (canon.get_num() != c.get_num() || canon.get_den() != c.get_den()) {
        field_error(path, "rational not in lowest terms");
    }
    return canon;
}

std::string coeff_text(const Coeff& c)
{
    return c.get_str();
}

Json exponent_json(Exponent e)
{
    return Json::array({e.num(), e.den()});
}

std::vector<Monomial> monomials_at(const Json& j, const std::string& path)
{
    std::vector<Monomial> out;
    const Json& arr = array_at(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        only_keys(arr[i], p, {"coeff", "u_exp", "v_exp"});
        Monomial m;
        m.coeff = coeff_at(member(arr[i], p, "coeff"), p + "/coeff");
        if (m.coeff == 0) {
            field_error(p + "/coeff", "zero coefficient");
        }
        m.u_exp = exponent_at(member(arr[i], p, "u_exp"), p + "/u_exp");
        if (arr[i].contains("v_exp")) {
            m.v_exp = integer_at(arr[i]["v_exp"], p + "/v_exp");
        }
        out.push_back(std::move(m));
    }
    return out;
}

Json monomials_json(const std::vector<Monomial>& ms)
{
    Json arr = Json::array();
    for (const auto& m : ms) {
        arr.push_back(Json{{"coeff", coeff_text(m.coeff)}, {"u_exp", exponent_json(m.u_exp)}, {"v_exp", m.v_exp}});
    }
    return arr;
}

std::size_t index_at(const Json& j, const std::string& path, std::size_t bound)
{
    const std::int64_t v = integer_at(j, path);
    if (v < 0 || static_cast<std::size_t>(v) >= bound) {
        field_error(path, "index out of range");
    }
    return static_cast<std::size_t>(v);
}

Json parse_document(const std::string& text, const char* what)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SpecError(std::string(what) + ": syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(col));
    }
}

Json order_json(const ContactOrder& o)
{
    return Json{{"kind", o.is_finite() ? "finite" : "at_least"}, {"value", to_string(o.value())}};
}

Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json pairs_json(const std::vector<std::pair<double, double>>& v)
{
    Json arr = Json::array();
    for (const auto& [a, b] : v) {
        arr.push_back(Json::array({number(a), number(b)}));
    }
    return arr;
}

Json inner_json(const InnerOrderEstimate& e)
{
    return Json{{"slope", number(e.slope)},
                {"snapped", e.snapped ? Json(to_string(*e.snapped)) : Json(nullptr)},
                {"r_squared", number(e.r_squared)},
                {"degenerate", e.degenerate},
                {"scales", pairs_json(e.scales)}};
}

Json report_to_json(const CriterionReport& r)
{
    return Json{{"pair", Json::array({r.first, r.second})},
                {"outer_order", order_json(r.outer_order)},
                {"inner_order", inner_json(r.inner_order)},
                {"equal", to_string(r.equal)},
                {"ratio_exponent", r.ratio_exponent ? number(*r.ratio_exponent) : Json(nullptr)},
                {"notes", r.notes}};
}

Json scales_json(const ScaleSpec& s)
{
    return Json{{"k_min", s.k_min}, {"k_max", s.k_max}, {"base", s.base}};
}

Json config_to_json(const RunConfig& c)
{
    return Json{{"truncation", to_string(c.truncation)},
                {"max_ramification", c.max_ramification},
                {"scales", scales_json(c.scales)},
                {"outer_scales", scales_json(c.outer_scales)},
                {"probe_scales", scales_json(c.probe_scales)},
                {"resolution_divisor", c.resolution_divisor},
                {"snap_denominator", c.snap_denominator},
                {"snap_tolerance", c.snap_tolerance},
                {"min_r_squared", c.min_r_squared},
                {"witness_gap", c.witness_gap},
                {"tangency_slope", c.tangency_slope},
                {"lipschitz_ks", c.lipschitz_ks},
                {"pairs_per_scale", c.pairs_per_scale},
                {"chain_iterations", c.chain_iterations},
                {"chain_tolerance", c.chain_tolerance},
                {"seed", c.seed}};
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

PuiseuxSeries parse_series(const std::string& text, Exponent truncation, std::int64_t max_ramification)
{
    return SeriesParser(text, 0, text.size()).parse(truncation, max_ramification);
}

Arc parse_arc(const std::string& text, Exponent truncation, std::int64_t max_ramification)
{
    const auto open = text.find_first_not_of(" \t\n");
    const auto close = text.find_last_not_of(" \t\n");
    if (open == std::string::npos || text[open] != '(' || text[close] != ')') {
        throw SpecError("arc literal must look like (s_1, ..., s_n)");
    }
    std::vector<PuiseuxSeries> comps;
    std::size_t start = open + 1;
    int depth = 0;
    for (std::size_t i = open + 1; i <= close; ++i) {
        const char c = text[i];
        if (c == '(') {
            ++depth;
        } else if ((c == ')' && depth == 0) || (c == ',' && depth == 0)) {
            comps.push_back(SeriesParser(text, start, i).parse(truncation, max_ramification));
            start = i + 1;
        } else if (c == ')') {
            --depth;
        }
    }
    if (comps.empty()) {
        throw SpecError("arc literal has no components");
    }
    const Arc plain(comps);
    PuiseuxSeries t2 = PuiseuxSeries::monomial(1, Exponent(2), squared_norm_series(plain).truncation(), max_ramification);
    const bool dp = squared_norm_series(plain).agrees_with(t2) && squared_norm_series(plain).truncation() > Exponent(2);
    return Arc(std::move(comps), dp);
}

std::string format_arc(const Arc& arc)
{
    std::string out = "(";
    for (std::size_t i = 0; i < arc.dimension(); ++i) {
        out += (i ? ", " : "") + to_string(arc.components()[i]);
    }
    return out + ")";
}

GermModel parse_germ_spec(const std::string& json_text)
{
    const Json doc = parse_document(json_text, "germ spec");
    only_keys(doc, "", {"name", "ambient_dim", "sheets", "pancakes"});
    const Json& name = member(doc, "", "name");
    if (!name.is_string()) {
        field_error("/name", "expected a string");
    }
    const std::int64_t dim = integer_at(member(doc, "", "ambient_dim"), "/ambient_dim");
    if (dim < 1) {
        field_error("/ambient_dim", "must be positive");
    }
    const Json& sheets_j = array_at(member(doc, "", "sheets"), "/sheets");
    if (sheets_j.empty()) {
        field_error("/sheets", "at least one sheet is required");
    }
    std::vector<Sheet> sheets;
    for (std::size_t i = 0; i < sheets_j.size(); ++i) {
        const std::string p = "/sheets/" + std::to_string(i);
        const Json& sj = sheets_j[i];
        only_keys(sj, p, {"parameter_dim", "domain", "components"});
        const std::int64_t pd = integer_at(member(sj, p, "parameter_dim"), p + "/parameter_dim");
        if (pd != 1 && pd != 2) {
            field_error(p + "/parameter_dim", "must be 1 or 2");
        }
        Domain dom;
        const Json& dj = member(sj, p, "domain");
        only_keys(dj, p + "/domain", {"u", "v"});
        auto bounds = [&](const char* key, Coeff& lo, Coeff& hi) {
            const std::string bp = p + "/domain/" + key;
            const Json& b = member(dj, p + "/domain", key);
            if (!b.is_array() || b.size() != 2) {
                field_error(bp, "expected [lo, hi]");
            }
            lo = coeff_at(b[0], bp + "/0");
            hi = coeff_at(b[1], bp + "/1");
            if (lo > hi) {
                field_error(bp, "lo exceeds hi");
            }
        };
        bounds("u", dom.u_lo, dom.u_hi);
        if (dj.contains("v")) {
            bounds("v", dom.v_lo, dom.v_hi);
        }
        const Json& cj = array_at(member(sj, p, "components"), p + "/components");
        if (static_cast<std::int64_t>(cj.size()) != dim) {
            field_error(p + "/components", "expected " + std::to_string(dim) + " components");
        }
        std::vector<RationalMap> comps;
        for (std::size_t c = 0; c < cj.size(); ++c) {
            const std::string cp = p + "/components/" + std::to_string(c);
            only_keys(cj[c], cp, {"numerator", "denominator"});
            RationalMap m;
            m.numerator = monomials_at(member(cj[c], cp, "numerator"), cp + "/numerator");
            if (cj[c].contains("denominator")) {
                m.denominator = monomials_at(cj[c]["denominator"], cp + "/denominator");
            }
            comps.push_back(std::move(m));
        }
        try {
            sheets.emplace_back(static_cast<int>(pd), std::move(comps), dom);
        } catch (const Error& e) {
            field_error(p, e.what());
        }
    }
    std::optional<PancakeDecomposition> pancakes;
    if (doc.contains("pancakes") && !doc["pancakes"].is_null()) {
        const Json& pj = doc["pancakes"];
        only_keys(pj, "/pancakes", {"pancakes", "adjacency"});
        PancakeDecomposition dec;
        const Json& list = array_at(member(pj, "/pancakes", "pancakes"), "/pancakes/pancakes");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = "/pancakes/pancakes/" + std::to_string(i);
            only_keys(list[i], p, {"sheets", "normally_embedded"});
            Pancake pk;
            const Json& sl = array_at(member(list[i], p, "sheets"), p + "/sheets");
            for (std::size_t k = 0; k < sl.size(); ++k) {
                pk.sheets.push_back(index_at(sl[k], p + "/sheets/" + std::to_string(k), sheets.size()));
            }
            if (list[i].contains("normally_embedded")) {
                if (!list[i]["normally_embedded"].is_boolean()) {
                    field_error(p + "/normally_embedded", "expected a boolean");
                }
                pk.normally_embedded = list[i]["normally_embedded"].get<bool>();
            }
            dec.pancakes.push_back(std::move(pk));
        }
        if (pj.contains("adjacency")) {
            const Json& adj = array_at(pj["adjacency"], "/pancakes/adjacency");
            for (std::size_t i = 0; i < adj.size(); ++i) {
                const std::string p = "/pancakes/adjacency/" + std::to_string(i);
                only_keys(adj[i], p, {"a", "b", "curves"});
                Adjacency a;
                a.a = index_at(member(adj[i], p, "a"), p + "/a", dec.pancakes.size());
                a.b = index_at(member(adj[i], p, "b"), p + "/b", dec.pancakes.size());
                if (adj[i].contains("curves")) {
                    const Json& cl = array_at(adj[i]["curves"], p + "/curves");
                    for (std::size_t k = 0; k < cl.size(); ++k) {
                        const std::string cp = p + "/curves/" + std::to_string(k);
                        only_keys(cl[k], cp, {"sheet", "side"});
                        BoundaryCurve bc;
                        bc.sheet = index_at(member(cl[k], cp, "sheet"), cp + "/sheet", sheets.size());
                        const Json& side = member(cl[k], cp, "side");
                        if (side == "v_low") {
                            bc.side = BoundaryCurve::Side::VLow;
                        } else if (side == "v_high") {
                            bc.side = BoundaryCurve::Side::VHigh;
                        } else {
                            field_error(cp + "/side", "expected \"v_low\" or \"v_high\"");
                        }
                        a.curves.push_back(bc);
                    }
                }
                dec.adjacency.push_back(std::move(a));
            }
        }
        pancakes = std::move(dec);
    }
    try {
        return GermModel(name.get<std::string>(), std::move(sheets), std::move(pancakes));
    } catch (const Error& e) {
        field_error("", e.what());
    }
}

std::string germ_spec_json(const GermModel& g)
{
    Json sheets = Json::array();
    for (const auto& s : g.sheets()) {
        Json comps = Json::array();
        for (const auto& m : s.components()) {
            comps.push_back(Json{{"numerator", monomials_json(m.numerator)}, {"denominator", monomials_json(m.denominator)}});
        }
        Json dom{{"u", Json::array({coeff_text(s.domain().u_lo), coeff_text(s.domain().u_hi)})}};
        if (s.parameter_dim() == 2) {
            dom["v"] = Json::array({coeff_text(s.domain().v_lo), coeff_text(s.domain().v_hi)});
        }
        sheets.push_back(Json{{"parameter_dim", s.parameter_dim()}, {"domain", dom}, {"components", comps}});
    }
    Json doc{{"name", g.name()}, {"ambient_dim", g.ambient_dim()}, {"sheets", sheets}};
    if (g.pancakes()) {
        Json list = Json::array();
        for (const auto& p : g.pancakes()->pancakes) {
            list.push_back(Json{{"sheets", p.sheets}, {"normally_embedded", p.normally_embedded}});
        }
        Json adj = Json::array();
        for (const auto& a : g.pancakes()->adjacency) {
            Json curves = Json::array();
            for (const auto& c : a.curves) {
                curves.push_back(
                    Json{{"sheet", c.sheet}, {"side", c.side == BoundaryCurve::Side::VLow ? "v_low" : "v_high"}});
            }
            adj.push_back(Json{{"a", a.a}, {"b", a.b}, {"curves", curves}});
        }
        doc["pancakes"] = Json{{"pancakes", list}, {"adjacency", adj}};
    }
    return doc.dump(2) + "\n";
}

GermModel resolve_germ(const std::string& ref)
{
    const std::string prefix = "builtin:";
    if (ref.rfind(prefix, 0) != 0) {
        return parse_germ_spec(read_file(ref));
    }
    std::vector<std::string> parts;
    std::stringstream ss(ref.substr(prefix.size()));
    for (std::string part; std::getline(ss, part, ':');) {
        parts.push_back(part);
    }
    if (parts.empty() || parts.front().empty()) {
        throw SpecError("builtin germ reference needs a family name");
    }
    std::vector<Coeff> params;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        Coeff c;
        if (parts[i].empty() || parts[i].find_first_not_of("-0123456789/") != std::string::npos ||
            c.set_str(parts[i], 10) != 0 || c.get_den() == 0) {
            throw SpecError("bad builtin parameter \"" + parts[i] + "\"");
        }
        c.canonicalize();
        params.push_back(c);
    }
    return builtin(parts.front(), params);
}

RunConfig parse_run_config(const std::string& json_text, RunConfig base)
{
    const Json doc = parse_document(json_text, "run config");
    if (!doc.is_object()) {
        throw SpecError("run config: expected an object");
    }
    auto fail = [](const std::string& key, const std::string& what) {
        throw SpecError("run config /" + key + ": " + what);
    };
    auto num = [&](const Json& j, const std::string& key) {
        if (!j.is_number()) {
            fail(key, "expected a number");
        }
        return j.get<double>();
    };
    auto integer = [&](const Json& j, const std::string& key) {
        if (!j.is_number_integer()) {
            fail(key, "expected an integer");
        }
        return j.get<std::int64_t>();
    };
    auto scales = [&](const Json& j, const std::string& key) {
        if (!j.is_object()) {
            fail(key, "expected {k_min, k_max, base}");
        }
        ScaleSpec s;
        for (const auto& [k, v] : j.items()) {
            if (k == "k_min") {
                s.k_min = static_cast<int>(integer(v, key + "/k_min"));
            } else if (k == "k_max") {
                s.k_max = static_cast<int>(integer(v, key + "/k_max"));
            } else if (k == "base") {
                s.base = num(v, key + "/base");
            } else {
                fail(key + "/" + k, "unknown field");
            }
        }
        return s;
    };
    for (const auto& [key, v] : doc.items()) {
        if (key == "truncation") {
            if (!v.is_string()) {
                fail(key, "expected \"p/q\"");
            }
            const auto e = parse_exponent(v.get<std::string>());
            if (!e) {
                fail(key, "bad exponent");
            }
            base.truncation = *e;
        } else if (key == "max_ramification") {
            base.max_ramification = integer(v, key);
        } else if (key == "scales") {
            base.scales = scales(v, key);
        } else if (key == "outer_scales") {
            base.outer_scales = scales(v, key);
        } else if (key == "probe_scales") {
            base.probe_scales = scales(v, key);
        } else if (key == "resolution_divisor") {
            base.resolution_divisor = static_cast<int>(integer(v, key));
        } else if (key == "snap_denominator") {
            base.snap_denominator = integer(v, key);
        } else if (key == "snap_tolerance") {
            base.snap_tolerance = num(v, key);
        } else if (key == "min_r_squared") {
            base.min_r_squared = num(v, key);
        } else if (key == "witness_gap") {
            base.witness_gap = num(v, key);
        } else if (key == "tangency_slope") {
            base.tangency_slope = num(v, key);
        } else if (key == "lipschitz_ks") {
            if (!v.is_array()) {
                fail(key, "expected an array");
            }
            base.lipschitz_ks.clear();
            for (const auto& k : v) {
                base.lipschitz_ks.push_back(num(k, key));
            }
        } else if (key == "pairs_per_scale") {
            base.pairs_per_scale = static_cast<int>(integer(v, key));
        } else if (key == "chain_iterations") {
            base.chain_iterations = static_cast<int>(integer(v, key));
        } else if (key == "chain_tolerance") {
            base.chain_tolerance = num(v, key);
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) {
                fail(key, "expected a nonnegative integer");
            }
            base.seed = v.get<std::uint64_t>();
        } else {
            fail(key, "unknown field");
        }
    }
    base.validate();
    return base;
}

std::string run_config_json(const RunConfig& config)
{
    return config_to_json(config).dump(2) + "\n";
}

RunConfig default_run_config()
{
    const char* path = std::getenv("ARCCRIT_CONFIG");
    if (!path || !*path) {
        return RunConfig{};
    }
    return parse_run_config(read_file(path));
}

std::string inner_estimate_json(const InnerOrderEstimate& e)
{
    return inner_json(e).dump(2) + "\n";
}

std::string report_json(const CriterionReport& r)
{
    return report_to_json(r).dump(2) + "\n";
}

std::string verdict_json(const Verdict& v, const RunConfig& config)
{
    Json arcs = Json::array();
    for (std::size_t i = 0; i < v.arcs.size(); ++i) {
        const Arc& a = v.arcs[i];
        arcs.push_back(Json{{"id", i},
                            {"sheet", a.trace() ? Json(a.trace()->sheet) : Json(nullptr)},
                            {"literal", format_arc(a)}});
    }
    Json reports = Json::array();
    for (const auto& r : v.reports) {
        reports.push_back(report_to_json(r));
    }
    Json psi{{"slope", number(v.psi.slope)},
             {"r_squared", number(v.psi.r_squared)},
             {"tangent", v.psi.tangent},
             {"max_ratio", pairs_json(v.psi.max_ratio)}};
    Json doc{{"schema", "arccrit-verdict"},
             {"version", kReportSchemaVersion},
             {"germ", v.germ},
             {"budget", v.budget},
             {"seed", v.seed},
             {"outcome", to_string(v.outcome)},
             {"witness", nullptr},
             {"arcs", arcs},
             {"reports", reports},
             {"psi", psi},
             {"max_lipschitz_ratio", pairs_json(v.max_lipschitz_ratio)},
             {"min_order_gap", v.min_order_gap ? Json(to_string(*v.min_order_gap)) : Json(nullptr)},
             {"inconclusive", v.inconclusive},
             {"notes", v.notes},
             {"config", config_to_json(config)}};
    if (v.witness) {
        const CriterionReport& w = v.reports[*v.witness];
        doc["witness"] = Json{{"report", *v.witness},
                              {"arcs", Json::array({format_arc(v.arcs[w.first]), format_arc(v.arcs[w.second])})},
                              {"seed", v.seed}};
    }
    return doc.dump(2) + "\n";
}

} // namespace arccrit
