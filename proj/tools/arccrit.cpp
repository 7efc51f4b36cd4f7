// arccrit: outer vs inner contact orders of arcs on parametrized germs.
//
// Exit codes: 0 success, 2 inconclusive (truncation-limited or unsnapped), 1 error
// or a failed check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "arccrit/criterion.hpp"
#include "arccrit/error.hpp"
#include "arccrit/io.hpp"
#include "arccrit/sampling.hpp"

using namespace arccrit;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInconclusive = 2;

struct Common {
    std::string germ = "builtin:plane";
    std::string config_path;
    std::string scales;
    std::string truncation;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t budget = 8;
    std::string out;
    std::string format; // empty: the subcommand's default
};

RunConfig build_config(const Common& c)
{
    RunConfig cfg = default_run_config();
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        if (!in) {
            throw SpecError("cannot read " + c.config_path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_run_config(ss.str(), cfg);
    }
    if (!c.scales.empty()) {
        const auto colon = c.scales.find(':');
        if (colon == std::string::npos) {
            throw SpecError("--scales expects k_min:k_max");
        }
        try {
            cfg.scales.k_min = std::stoi(c.scales.substr(0, colon));
            cfg.scales.k_max = std::stoi(c.scales.substr(colon + 1));
        } catch (const std::exception&) {
            throw SpecError("--scales expects integers k_min:k_max");
        }
    }
    if (!c.truncation.empty()) {
        const auto e = parse_exponent(c.truncation);
        if (!e) {
            throw SpecError("--truncation expects a reduced fraction p/q");
        }
        cfg.truncation = *e;
    }
    if (c.seed_set) {
        cfg.seed = c.seed;
    }
    cfg.validate();
    return cfg;
}

// Output goes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw SpecError("cannot write " + path);
            }
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// "sample:K" picks the K-th sampled arc of the germ; anything else is a literal.
Arc arc_argument(const std::string& text, const GermModel* g, const RunConfig& cfg, std::size_t budget)
{
    const std::string prefix = "sample:";
    if (text.rfind(prefix, 0) == 0) {
        if (!g) {
            throw SpecError("sample:K needs --germ");
        }
        const std::size_t k = std::stoul(text.substr(prefix.size()));
        SamplingSpec spec;
        spec.truncation = cfg.truncation;
        spec.max_ramification = cfg.max_ramification;
        const auto arcs = sample_arcs(*g, std::max(budget, k + 1), cfg.seed, spec);
        if (k >= arcs.size()) {
            throw SpecError("only " + std::to_string(arcs.size()) + " distinct arcs on " + g->name());
        }
        return arcs[k];
    }
    return parse_arc(text, cfg.truncation, cfg.max_ramification);
}

void add_common(CLI::App* sub, Common& c, bool germ, bool budget)
{
    if (germ) {
        sub->add_option("--germ", c.germ, "builtin:family[:params] or a germ spec JSON file")->capture_default_str();
    }
    if (budget) {
        sub->add_option("--budget", c.budget, "Number of sampled arcs")->capture_default_str()->check(CLI::Range(2, 1000));
    }
    sub->add_option("--config", c.config_path, "Run configuration JSON (default: $ARCCRIT_CONFIG)");
    sub->add_option("--scales", c.scales, "Inner-order scale exponents k_min:k_max");
    sub->add_option("--truncation", c.truncation, "Series truncation p/q");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&c](std::uint64_t s) {
            c.seed = s;
            c.seed_set = true;
        },
        "Sampling seed");
    sub->add_option("--out", c.out, "Output file (default: stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int run_contact(const Common& c, const std::string& a1, const std::string& a2, bool have_germ)
{
    const RunConfig cfg = build_config(c);
    std::optional<GermModel> g;
    if (have_germ) {
        g = resolve_germ(c.germ);
    }
    const Arc a = arc_argument(a1, g ? &*g : nullptr, cfg, c.budget);
    const Arc b = arc_argument(a2, g ? &*g : nullptr, cfg, c.budget);
    const ContactOrder o = tord(a, b);
    Sink sink(c.out);
    sink.os() << to_string(o) << "\n";
    return o.is_finite() ? kOk : kInconclusive;
}

int run_inner(const Common& c, const std::string& a1, const std::string& a2, bool point_to_arc)
{
    const RunConfig cfg = build_config(c);
    const GermModel g = resolve_germ(c.germ);
    const Arc a = arc_argument(a1, &g, cfg, c.budget);
    const Arc b = arc_argument(a2, &g, cfg, c.budget);
    const InnerOrderEstimate e = point_to_arc ? inner_point_to_arc_order(g, a, b, cfg) : inner_contact_order(g, a, b, cfg);
    Sink sink(c.out);
    if (c.format == "csv") {
        std::vector<DistanceRow> rows;
        const bool exact = a.distance_parametrized() && b.distance_parametrized();
        for (const auto& [t, d] : e.scales) {
            const double d_out = exact ? outer_distance(a, b, t) : euclidean_distance(a.evaluate(t), b.evaluate(t));
            rows.push_back({t, d_out, d});
        }
        write_distance_csv(sink.os(), rows);
    } else {
        sink.os() << inner_estimate_json(e);
    }
    return e.snapped ? kOk : kInconclusive;
}

int run_verdict(const Common& c)
{
    const RunConfig cfg = build_config(c);
    const GermModel g = resolve_germ(c.germ);
    const Verdict v = verdict(g, c.budget, cfg);
    Sink sink(c.out);
    sink.os() << verdict_json(v, cfg);
    std::cerr << g.name() << ": " << to_string(v.outcome) << "\n";
    if (v.outcome == Verdict::Outcome::NoWitnessFound && !v.inconclusive.empty()) {
        return kInconclusive;
    }
    return kOk;
}

int run_ultrametric(const Common& c, std::vector<std::string> arcs)
{
    const RunConfig cfg = build_config(c);
    if (arcs.empty()) {
        arcs = {"(t, 0)", "(t, t^2)", "(t, t^3)"};
    }
    if (arcs.size() != 3) {
        throw SpecError("ultrametric needs exactly three arcs");
    }
    std::vector<Arc> parsed;
    for (const auto& s : arcs) {
        parsed.push_back(parse_arc(s, cfg.truncation, cfg.max_ramification));
    }
    const UltrametricResult r = ultrametric_check(parsed[0], parsed[1], parsed[2]);
    Sink sink(c.out);
    const char* word = r.status == UltrametricResult::Status::Holds      ? "true"
                       : r.status == UltrametricResult::Status::Violated ? "false"
                                                                          : "inconclusive";
    sink.os() << word << " (" << to_string(r.orders[0]) << ", " << to_string(r.orders[1]) << ", "
              << to_string(r.orders[2]) << ")\n";
    switch (r.status) {
    case UltrametricResult::Status::Holds:
        return kOk;
    case UltrametricResult::Status::Violated:
        return kFailed;
    default:
        return kInconclusive;
    }
}

int run_scatter(const Common& c)
{
    const RunConfig cfg = build_config(c);
    const GermModel g = resolve_germ(c.germ);
    const PsiScatter s = psi_scatter(g, cfg);
    Sink sink(c.out);
    if (c.format == "csv") {
        write_psi_csv(sink.os(), s);
    } else {
        std::ostringstream rows;
        write_psi_csv(rows, s);
        sink.os() << "{\n  \"germ\": \"" << g.name() << "\",\n  \"slope\": " << s.slope
                  << ",\n  \"r_squared\": " << s.r_squared << ",\n  \"tangent\": " << (s.tangent ? "true" : "false")
                  << ",\n  \"rows\": " << s.rows.size() << "\n}\n";
    }
    std::cerr << g.name() << ": psi ratio slope " << s.slope << (s.tangent ? " (tangent to the d_inn axis)" : "")
              << "\n";
    return kOk;
}

int run_lemma(const Common& c)
{
    const RunConfig cfg = build_config(c);
    const GermModel g = resolve_germ(c.germ);
    SamplingSpec spec;
    spec.truncation = cfg.truncation;
    spec.max_ramification = cfg.max_ramification;
    const auto arcs = sample_arcs(g, c.budget, cfg.seed, spec);
    MeshCache cache(g);
    Sink sink(c.out);
    auto& os = sink.os();
    os << "pair,contact_slope,contact_order,point_to_arc_slope,point_to_arc_order,equal\n";
    int status = kOk;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            const auto pp = inner_contact_order(g, arcs[i], arcs[j], cfg, &cache);
            const auto pa = inner_point_to_arc_order(g, arcs[i], arcs[j], cfg, &cache);
            const std::string so = pp.snapped ? to_string(*pp.snapped) : "-";
            const std::string sa = pa.snapped ? to_string(*pa.snapped) : "-";
            std::string verdict_word = "yes";
            if (!pp.snapped || !pa.snapped) {
                verdict_word = "inconclusive";
                status = std::max(status, kInconclusive);
            } else if (*pp.snapped != *pa.snapped) {
                verdict_word = "no";
                status = kFailed;
            }
            os << i << "-" << j << ',' << pp.slope << ',' << so << ',' << pa.slope << ',' << sa << ',' << verdict_word
               << '\n';
        }
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Outer and inner contact orders of arcs on semialgebraic germs"};
    app.require_subcommand(1);

    Common common;
    std::string arc1;
    std::string arc2;
    std::vector<std::string> triple;
    bool point_to_arc = false;

    auto* contact = app.add_subcommand("contact", "Exact outer contact order of two arcs");
    add_common(contact, common, true, false);
    contact->add_option("--arc1", arc1, "Arc literal such as \"(t, 0, 0)\" or sample:K")->required();
    contact->add_option("--arc2", arc2, "Second arc")->required();

    auto* inner = app.add_subcommand("inner", "Inner contact order estimate of two arcs on a germ");
    add_common(inner, common, true, false);
    inner->add_option("--arc1", arc1, "Arc literal or sample:K")->required();
    inner->add_option("--arc2", arc2, "Second arc")->required();
    inner->add_flag("--point-to-arc", point_to_arc, "Use inf over the second arc instead of matched points");

    auto* verdict_cmd = app.add_subcommand("verdict", "Search sampled arc pairs for a non-embedding witness");
    add_common(verdict_cmd, common, true, true);

    auto* ultra = app.add_subcommand("ultrametric", "Check that the two smallest pairwise orders agree");
    add_common(ultra, common, false, false);
    ultra->add_option("--arc", triple, "Three arc literals (default: the (t,0), (t,t^2), (t,t^3) triple)");

    auto* scatter = app.add_subcommand("scatter", "psi-map scatter (d_out, d_inn) across scales");
    add_common(scatter, common, true, false);

    auto* lemma = app.add_subcommand("lemma-check", "Point-to-arc vs point-to-point inner orders on sampled pairs");
    add_common(lemma, common, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kFailed;
    }

    try {
        if (*contact) {
            return run_contact(common, arc1, arc2, contact->count("--germ") > 0);
        }
        if (*inner) {
            return run_inner(common, arc1, arc2, point_to_arc);
        }
        if (*verdict_cmd) {
            return run_verdict(common);
        }
        if (*ultra) {
            return run_ultrametric(common, triple);
        }
        if (*scatter) {
            if (common.format.empty()) {
                common.format = "csv";
            }
            return run_scatter(common);
        }
        if (*lemma) {
            return run_lemma(common);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kFailed;
}
