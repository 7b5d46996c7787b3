#include "engel/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "engel/document.hpp"
#include "engel/expression.hpp"

namespace engel {

namespace {

[[noreturn]] void input_error(const std::string& what) { throw Error("input: " + what); }

class Session {
public:
    Session(const std::string& document, const CommandOptions& options) : opts_(options) {
        if (!document.empty()) {
            doc_ = parse_document(document);
            resolved_ = resolve(*doc_);
            resolved_->source = &*doc_;
        }
    }

    const ResolvedDocument& doc() const {
        if (!resolved_) input_error("this subcommand needs an input document");
        return *resolved_;
    }
    bool has_doc() const { return resolved_.has_value(); }

    std::optional<std::string> param(const std::string& key) const {
        if (!doc_) return std::nullopt;
        auto it = doc_->params.find(key);
        if (it == doc_->params.end()) return std::nullopt;
        return it->second;
    }

    template <class T>
    T integer(const std::optional<T>& flag, const std::string& key, T fallback) const {
        if (flag) return *flag;
        auto text = param(key);
        if (!text) return fallback;
        T value{};
        auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc() || end != text->data() + text->size())
            input_error("params." + key + " must be an integer, got '" + *text + "'");
        return value;
    }

    double real(const std::optional<double>& flag, const std::string& key, double fallback) const {
        if (flag) return *flag;
        auto text = param(key);
        if (!text) return fallback;
        try {
            return to_double(parse_rational(*text));
        } catch (const Error&) {
            input_error("params." + key + " must be a number, got '" + *text + "'");
        }
    }

    SampleOptions sampling(std::size_t default_samples) const {
        SampleOptions s;
        s.samples = integer(opts_.samples, "samples", default_samples);
        s.seed = integer(opts_.seed, "seed", std::uint64_t{1});
        s.parallel = opts_.parallel;
        return s;
    }

    /// Document points, then --points, then pseudo-random samples.
    std::vector<RationalPoint> points(const Chart& chart, std::size_t default_samples) const {
        std::vector<RationalPoint> user;
        if (has_doc() && doc().chart == chart) user = doc().points;
        auto extra = parse_points(opts_.points, chart);
        user.insert(user.end(), extra.begin(), extra.end());
        auto out = sample_points(chart, sampling(default_samples), user);
        if (out.empty()) input_error("no sample points (use --samples or --points)");
        return out;
    }

    FlowOptions flow_options() const {
        FlowOptions f;
        const bool has_h = opts_.h || param("h");
        const bool has_steps = opts_.steps || param("steps");
        if (has_h && has_steps) input_error("give either h or steps, not both");
        if (has_steps) {
            const auto steps = integer(opts_.steps, "steps", std::size_t{1000});
            if (steps == 0) input_error("steps must be positive");
            f.h = f.t_end / static_cast<double>(steps);
        } else {
            f.h = real(opts_.h, "h", f.h);
        }
        if (!(f.h > 0) || f.h > f.t_end) input_error("h must lie in (0, 1]");
        return f;
    }

    const CommandOptions& opts() const { return opts_; }

private:
    CommandOptions opts_;
    std::optional<InputDocument> doc_;
    std::optional<ResolvedDocument> resolved_;
};

struct Outcome {
    Json report;
    int exit_code = 0;
};

Outcome cmd_bracket(const Session& s) {
    const auto& doc = s.doc();
    if (doc.source->bracket.size() != 2) input_error("'bracket' must name exactly two vector fields");
    const VectorField& x = doc.field(doc.source->bracket[0]);
    const VectorField& y = doc.field(doc.source->bracket[1]);
    const VectorField b = lie_bracket(x, y);
    Json j;
    j["report"] = "bracket";
    j["X"] = print(x);
    j["Y"] = print(y);
    j["bracket"] = print(b);
    std::vector<RationalPoint> pts = doc.points;
    auto extra = parse_points(s.opts().points, doc.chart);
    pts.insert(pts.end(), extra.begin(), extra.end());
    if (!pts.empty()) {
        Json values = Json::array();
        for (const auto& p : pts) {
            const RationalVector v = b.evaluate(p);
            values.push_back({{"point", point_json(p)}, {"value", print(constant_field(doc.chart, v))}});
        }
        j["values"] = values;
    }
    return {j, 0};
}

Outcome cmd_growth(const Session& s) {
    const auto& doc = s.doc();
    const Distribution d = doc.distribution();
    const auto pts = s.points(doc.chart, 25);
    const std::size_t n = doc.chart.dim();
    std::vector<GrowthVector> growth(pts.size(), GrowthVector{pts[0], {}});
    parallel_for(pts.size(), s.opts().parallel,
                 [&](std::size_t i) { growth[i] = derived_flag(d, pts[i], static_cast<int>(n)); });
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> keys;
    for (const auto& g : growth) keys.push_back(ids.emplace(g.ranks, ids.size()).first->second);
    auto regularity = regularity_from_ranks(pts, keys);
    std::vector<std::size_t> typical;
    for (const auto& [ranks, id] : ids)
        if (id == regularity.majority_rank) typical = ranks;
    Json j;
    j["report"] = "growth";
    j["dim"] = n;
    j["samples"] = pts.size();
    j["growth"] = typical;
    j["regular"] = regularity.regular;
    j["nonholonomic"] = !typical.empty() && typical.back() == n;
    Json singular = Json::array();
    for (std::size_t i = 0; i < growth.size() && singular.size() < 5; ++i)
        if (keys[i] != regularity.majority_rank) singular.push_back(to_json(growth[i]));
    j["singular_witnesses"] = singular;
    return {j, 0};
}

Outcome cmd_cauchy(const Session& s) {
    const auto& doc = s.doc();
    const auto pts = s.points(doc.chart, 25);
    std::vector<CauchyResult> results(pts.size());
    if (!doc.source->distribution.empty()) {
        CauchyCharacteristic cauchy(doc.distribution());
        parallel_for(pts.size(), s.opts().parallel, [&](std::size_t i) { results[i] = cauchy.at(pts[i]); });
    } else if (doc.source->theta) {
        const ExtForm theta = doc.pfaffian().first;
        parallel_for(pts.size(), s.opts().parallel,
                     [&](std::size_t i) { results[i] = cauchy_characteristic(theta, pts[i]); });
    } else {
        input_error("cauchy needs a 'distribution' (E) or a 'pfaffian' theta");
    }
    std::vector<std::size_t> ranks;
    for (const auto& r : results) ranks.push_back(r.rank());
    auto regularity = regularity_from_ranks(pts, ranks);
    Json j;
    j["report"] = "cauchy";
    j["dim"] = doc.chart.dim();
    j["samples"] = pts.size();
    j["rank"] = regularity.majority_rank;
    j["regular"] = regularity.regular;
    j["first_point"] = {{"point", point_json(pts[0])}, {"basis", fields_json(results[0].basis, doc.chart)}};
    Json singular = Json::array();
    for (const auto& p : regularity.singular_witnesses) {
        if (singular.size() >= 5) break;
        singular.push_back(point_json(p));
    }
    j["singular_witnesses"] = singular;
    return {j, 0};
}

Distribution document_distribution(const ResolvedDocument& doc, std::span<const RationalPoint> pts) {
    if (!doc.source->distribution.empty() || !doc.source->theta) return doc.distribution();
    auto [theta, omegas] = doc.pfaffian();
    auto converted = forms_to_distribution(theta, omegas, pts);
    if (!converted.symbolic)
        input_error("no polynomial kernel for the Pfaffian system: " + converted.symbolic_failure);
    return *converted.symbolic;
}

Outcome cmd_check(const Session& s) {
    const auto& doc = s.doc();
    const auto pts = s.points(doc.chart, 25);
    const Distribution d = document_distribution(doc, pts);
    auto report = check_generalized_engel(d, pts, s.opts().parallel);
    return {to_json(report, doc.chart), report.verdict.value_or(false) ? 0 : 2};
}

Outcome cmd_pfaffian(const Session& s) {
    const auto& doc = s.doc();
    const auto pts = s.points(doc.chart, 25);
    ExtForm theta = ExtForm::zero(doc.chart, 1);
    std::vector<ExtForm> omegas;
    if (doc.source->theta) {
        std::tie(theta, omegas) = doc.pfaffian();
    } else {
        auto forms = distribution_to_forms(doc.distribution(), pts);
        if (!forms.symbolic) input_error("no polynomial annihilator for the distribution: " + forms.note);
        theta = *forms.theta;
        omegas = forms.omegas;
    }
    auto report = check_pfaffian_criteria(theta, omegas, pts, s.opts().parallel);
    Json j = to_json(report);
    j["theta"] = print(theta);
    Json om = Json::array();
    for (const auto& w : omegas) om.push_back(print(w));
    j["omegas"] = om;
    return {j, report.verdict ? 0 : 2};
}

Outcome cmd_prolong(const Session& s) {
    const int n = s.integer(s.opts().n, "n", 1);
    auto pc = cartan_prolongation(n);
    InputDocument doc = distribution_document(pc.D, "V");
    doc.objects.push_back({"Theta", "one_form", print(pc.theta)});
    doc.params["n"] = std::to_string(n);
    return {Json::parse(to_json(doc)), 0};
}

Outcome cmd_normal_form(const Session& s) {
    const int l = s.integer(s.opts().l, "l", 1);
    const int r = s.integer(s.opts().r, "r", 0);
    auto nf = normal_form(l, r);
    InputDocument doc = pfaffian_document(nf.Theta, nf.Omegas);
    doc.params["l"] = std::to_string(l);
    doc.params["r"] = std::to_string(r);
    return {Json::parse(to_json(doc)), 0};
}

Outcome cmd_fixtures(const Session& s) {
    auto fixtures = reference_fixtures();
    if (s.opts().export_fixture) {
        for (const auto& f : fixtures)
            if (f.name == *s.opts().export_fixture) return {Json::parse(to_json(distribution_document(f.D, "V"))), 0};
        input_error("unknown fixture '" + *s.opts().export_fixture + "' (expected a, b or c)");
    }
    Json list = Json::array();
    bool all = true;
    for (const auto& f : fixtures) {
        const auto pts = s.points(f.D.chart(), 25);
        auto report = check_generalized_engel(f.D, pts, s.opts().parallel);
        Json j = fixture_json(f, report);
        all = all && j["matches"].get<bool>();
        list.push_back(j);
    }
    Json out;
    out["report"] = "fixtures";
    out["all_match"] = all;
    out["fixtures"] = list;
    return {out, all ? 0 : 2};
}

struct FamilyChoice {
    OneParamFamily family;
    std::vector<double> start;
};

FamilyChoice session_family(const Session& s) {
    if (const auto& name = s.opts().family) {
        const std::vector<double> p0{0.2, -0.1, 0.3, 0.5};
        if (*name == "translation") return {engel_translation_family(), p0};
        if (*name == "quadratic") return {engel_quadratic_family(), p0};
        if (*name == "pipeline") return {pipeline_family(), p0};
        if (*name == "moving-characteristic") return {moving_characteristic_family(), p0};
        input_error("unknown family '" + *name + "'");
    }
    const auto& doc = s.doc();
    OneParamFamily fam = doc.family();
    auto start = doc.start();
    return {std::move(fam), start ? *start : std::vector<double>(doc.chart.dim(), 0.0)};
}

Json rank_law_json(const KernelDistributions& k, bool& ok) {
    const std::size_t n = k.D.empty() ? 0 : k.D.front().size();
    bool inside = true, corank = true, j_rank = true;
    for (std::size_t i = 0; i < k.K.size(); ++i) {
        const auto rel = subspace_compare(k.K[i], k.L, n);
        inside = inside && (rel == SubspaceRelation::a_subset_b || rel == SubspaceRelation::equal);
        corank = corank && k.K[i].size() + 1 == k.L.size();
        j_rank = j_rank && k.J[i].size() == k.W.size() + 1;
    }
    ok = inside && corank && j_rank;
    return {{"K_in_L", inside}, {"K_corank1_in_L", corank}, {"J_rank_W_plus_1", j_rank}};
}

Outcome cmd_moser_verify(const Session& s) {
    FamilyChoice choice = session_family(s);
    const OneParamFamily& fam = choice.family;
    const Chart& ext = fam.extended_chart();
    auto sampling = s.sampling(20);
    std::vector<RationalPoint> user = parse_points(s.opts().points, ext);
    std::vector<RationalPoint> random = sample_points(ext, sampling);
    for (auto& p : random) p.coords.back() = abs(p.coords.back()) / 3;
    user.insert(user.end(), random.begin(), random.end());
    if (user.empty()) input_error("no sample points (use --samples or --points)");

    std::vector<Json> rows(user.size());
    std::vector<char> ok(user.size(), 0);
    parallel_for(user.size(), s.opts().parallel, [&](std::size_t i) {
        const Rational t = user[i].coords.back();
        RationalPoint p(fam.chart(), RationalVector(user[i].coords.begin(), user[i].coords.end() - 1));
        auto solved = moser_field_at(fam, t, p);
        bool laws = false;
        Json row = to_json(solved, fam.chart());
        row.erase("report");
        row["rank_laws"] = rank_law_json(kernel_distributions(fam, t, p), laws);
        ok[i] = solved.residual_zero && solved.membership_L && laws;
        rows[i] = std::move(row);
    });
    const bool exact_ok = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });

    const FlowOptions options = s.flow_options();
    const double tol = s.real(s.opts().tolerance, "tolerance", 1e-6);
    auto flow = integrate_moser_flow(fam, choice.start, options);
    const bool flow_ok = !flow.truncated && flow.max_angle_D <= tol && flow.max_angle_L <= tol;

    Json j;
    j["report"] = "moser_verify";
    j["verdict"] = exact_ok && flow_ok;
    j["tolerance"] = tol;
    j["exact_samples"] = rows.size();
    j["exact_ok"] = exact_ok;
    j["samples"] = rows;
    j["start"] = choice.start;
    j["flow"] = to_json(flow);
    return {j, exact_ok && flow_ok ? 0 : 2};
}

Outcome cmd_pipeline(const Session& s) {
    FamilyChoice choice = session_family(s);
    const FlowOptions options = s.flow_options();
    const double tol = s.real(s.opts().tolerance, "tolerance", 1e-4);
    auto composed = verify_stability_pipeline(choice.family, choice.start, options);
    Json j;
    j["report"] = "pipeline";
    const bool ok = !composed.truncated && composed.max_angle_D <= tol;
    j["verdict"] = ok;
    j["tolerance"] = tol;
    j["start"] = choice.start;
    j["theta_constant"] = choice.family.theta_is_constant();
    if (choice.family.theta_is_constant()) {
        auto direct = integrate_moser_flow(choice.family, choice.start, options);
        j["stage2_distance"] = trajectory_distance(composed, direct);
    }
    j["flow"] = to_json(composed);
    return {j, ok ? 0 : 2};
}

}  // namespace

CommandResult run_subcommand(const std::string& name, const std::string& document, const CommandOptions& options) {
    CommandResult result;
    auto fail = [&](int code, const std::string& message) {
        result.exit_code = code;
        result.error = "engel " + name + ": " + message + "\n";
    };
    try {
        if (std::find_if(std::begin(kSubcommands), std::end(kSubcommands),
                         [&](const char* c) { return name == c; }) == std::end(kSubcommands))
            input_error("unknown subcommand '" + name + "'");
        Session session(document, options);
        Outcome out;
        if (name == "bracket") out = cmd_bracket(session);
        else if (name == "growth") out = cmd_growth(session);
        else if (name == "cauchy") out = cmd_cauchy(session);
        else if (name == "check") out = cmd_check(session);
        else if (name == "pfaffian") out = cmd_pfaffian(session);
        else if (name == "prolong") out = cmd_prolong(session);
        else if (name == "normal-form") out = cmd_normal_form(session);
        else if (name == "fixtures") out = cmd_fixtures(session);
        else if (name == "moser-verify") out = cmd_moser_verify(session);
        else out = cmd_pipeline(session);
        // Generated documents are meant for piping, so they are always JSON.
        const bool document_output = name == "prolong" || name == "normal-form" ||
                                     (name == "fixtures" && options.export_fixture);
        result.output = render(out.report, document_output ? ReportFormat::json : options.format);
        result.exit_code = out.exit_code;
    } catch (const HypothesisViolation& e) {
        Json j;
        j["report"] = "hypothesis_violation";
        j["stage"] = e.stage();
        j["message"] = e.what();
        result.output = render(j, options.format);
        fail(2, e.what());
    } catch (const Error& e) {
        fail(1, e.what());
    } catch (const std::exception& e) {
        fail(1, std::string("internal error: ") + e.what());
    }
    return result;
}

}  // namespace engel
