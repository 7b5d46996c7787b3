#include "engel/document.hpp"

#include <set>

#include "json.hpp"

namespace engel {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void input_error(const std::string& what) { throw Error("input: " + what); }

std::string get_string(const ordered_json& j, const std::string& where) {
    if (!j.is_string()) input_error(where + " must be a string (numbers are written as strings)");
    return j.get<std::string>();
}

std::vector<std::string> get_strings(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) input_error(where + " must be an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

const std::set<std::string> kKinds{"vector_field", "one_form", "family"};

}  // namespace

InputDocument parse_document(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        input_error(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) input_error("document must be a JSON object");
    static const std::set<std::string> allowed{"chart", "parameter", "objects", "distribution", "pfaffian",
                                               "points", "start", "L", "bracket", "params"};
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) input_error("unknown key '" + key + "'");

    InputDocument doc;
    if (!j.contains("chart")) input_error("missing 'chart'");
    doc.chart = get_strings(j["chart"], "chart");
    if (j.contains("parameter")) doc.parameter = get_string(j["parameter"], "parameter");
    if (j.contains("objects")) {
        if (!j["objects"].is_array()) input_error("'objects' must be an array");
        for (const auto& o : j["objects"]) {
            if (!o.is_object() || !o.contains("name") || !o.contains("kind") || !o.contains("expr"))
                input_error("each object needs 'name', 'kind' and 'expr'");
            NamedObject obj{get_string(o["name"], "object name"), get_string(o["kind"], "object kind"),
                            get_string(o["expr"], "object expr")};
            if (!kKinds.count(obj.kind))
                input_error("object '" + obj.name + "' has unknown kind '" + obj.kind + "'");
            doc.objects.push_back(std::move(obj));
        }
    }
    if (j.contains("distribution")) doc.distribution = get_strings(j["distribution"], "distribution");
    if (j.contains("pfaffian")) {
        const auto& p = j["pfaffian"];
        if (!p.is_object() || !p.contains("theta")) input_error("'pfaffian' needs 'theta'");
        doc.theta = get_string(p["theta"], "pfaffian.theta");
        if (p.contains("omegas")) doc.omegas = get_strings(p["omegas"], "pfaffian.omegas");
    }
    if (j.contains("points")) {
        if (!j["points"].is_array()) input_error("'points' must be an array of coordinate lists");
        for (std::size_t i = 0; i < j["points"].size(); ++i)
            doc.points.push_back(get_strings(j["points"][i], "points[" + std::to_string(i) + "]"));
    }
    if (j.contains("start")) doc.start = get_strings(j["start"], "start");
    if (j.contains("L")) doc.L = get_strings(j["L"], "L");
    if (j.contains("bracket")) doc.bracket = get_strings(j["bracket"], "bracket");
    if (j.contains("params")) {
        if (!j["params"].is_object()) input_error("'params' must be an object");
        for (const auto& [key, value] : j["params"].items()) doc.params[key] = get_string(value, "params." + key);
    }
    return doc;
}

std::string to_json(const InputDocument& doc) {
    ordered_json j;
    j["chart"] = doc.chart;
    if (doc.parameter) j["parameter"] = *doc.parameter;
    ordered_json objects = ordered_json::array();
    for (const auto& o : doc.objects) objects.push_back({{"name", o.name}, {"kind", o.kind}, {"expr", o.expr}});
    j["objects"] = objects;
    if (!doc.distribution.empty()) j["distribution"] = doc.distribution;
    if (doc.theta) j["pfaffian"] = {{"theta", *doc.theta}, {"omegas", doc.omegas}};
    if (!doc.points.empty()) j["points"] = doc.points;
    if (!doc.start.empty()) j["start"] = doc.start;
    if (!doc.L.empty()) j["L"] = doc.L;
    if (!doc.bracket.empty()) j["bracket"] = doc.bracket;
    if (!doc.params.empty()) {
        ordered_json p = ordered_json::object();
        for (const auto& [k, v] : doc.params) p[k] = v;
        j["params"] = p;
    }
    return j.dump(2) + "\n";
}

InputDocument distribution_document(const Distribution& d, const std::string& stem) {
    InputDocument doc;
    doc.chart = d.chart().names();
    for (std::size_t i = 0; i < d.generators().size(); ++i) {
        const std::string name = stem + std::to_string(i + 1);
        doc.objects.push_back({name, "vector_field", print(d.generators()[i])});
        doc.distribution.push_back(name);
    }
    return doc;
}

InputDocument pfaffian_document(const ExtForm& theta, const std::vector<ExtForm>& omegas) {
    InputDocument doc;
    doc.chart = theta.chart().names();
    doc.objects.push_back({"Theta", "one_form", print(theta)});
    doc.theta = "Theta";
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const std::string name = "Omega" + std::to_string(i + 1);
        doc.objects.push_back({name, "one_form", print(omegas[i])});
        doc.omegas.push_back(name);
    }
    return doc;
}

std::vector<RationalPoint> parse_points(const std::string& text, const Chart& chart) {
    std::vector<RationalPoint> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        std::string chunk = text.substr(start, end - start);
        RationalVector coords;
        std::size_t s = 0;
        while (s <= chunk.size()) {
            std::size_t e = chunk.find(',', s);
            if (e == std::string::npos) e = chunk.size();
            try {
                coords.push_back(parse_rational(chunk.substr(s, e - s)));
            } catch (const Error& err) {
                input_error("bad point coordinate '" + chunk.substr(s, e - s) + "': " + err.what());
            }
            s = e + 1;
        }
        if (coords.size() != chart.dim())
            input_error("point '" + chunk + "' has " + std::to_string(coords.size()) + " coordinates, chart has " +
                        std::to_string(chart.dim()));
        out.emplace_back(chart, std::move(coords));
        start = end + 1;
    }
    return out;
}

ResolvedDocument resolve(const InputDocument& doc) {
    if (doc.chart.empty()) input_error("chart must name at least one coordinate");
    std::set<std::string> seen(doc.chart.begin(), doc.chart.end());
    if (seen.size() != doc.chart.size()) input_error("chart coordinate names must be distinct");
    Chart chart(doc.chart);
    const std::string parameter = doc.parameter.value_or("t");

    ResolvedDocument out{chart, parameter, {}, {}, {}, &doc};
    ParseContext spatial{chart, std::nullopt, {}};
    std::optional<Chart> extended;
    ParseContext family_ctx{chart, parameter, {}};
    for (const auto& o : doc.objects) {
        if (o.name.empty()) input_error("object names must be nonempty");
        if (out.objects.count(o.name) || out.families.count(o.name))
            input_error("duplicate object name '" + o.name + "'");
        if (chart.index_of(o.name)) input_error("object name '" + o.name + "' shadows a coordinate");
        try {
            if (o.kind == "family") {
                if (!extended) {
                    if (chart.index_of(parameter))
                        input_error("family parameter '" + parameter + "' collides with a coordinate");
                    extended = chart.extended(parameter);
                    family_ctx.chart = *extended;
                    for (const auto& [name, v] : out.objects) {
                        if (const auto* f = std::get_if<ExtForm>(&v)) family_ctx.named.emplace(name, embed(*f, *extended));
                    }
                }
                ExtForm f = parse_form(o.expr, family_ctx, 1);
                family_ctx.named.emplace(o.name, f);
                out.families.emplace(o.name, std::move(f));
            } else {
                Value v = parse_value(o.expr, spatial,
                                      o.kind == "vector_field" ? ExpectedKind::vector_field : ExpectedKind::form, 1);
                spatial.named.emplace(o.name, v);
                if (extended)
                    if (const auto* f = std::get_if<ExtForm>(&v)) family_ctx.named.emplace(o.name, embed(*f, *extended));
                out.objects.emplace(o.name, std::move(v));
            }
        } catch (const ParseError& e) {
            throw ParseError("object '" + o.name + "': " + e.what(), e.line(), e.column());
        }
    }
    for (const auto& p : doc.points) {
        if (p.size() != chart.dim())
            input_error("point has " + std::to_string(p.size()) + " coordinates, chart has " + std::to_string(chart.dim()));
        RationalVector coords;
        for (const auto& s : p) {
            try {
                coords.push_back(parse_rational(s));
            } catch (const Error& err) {
                input_error("bad point coordinate '" + s + "': " + err.what());
            }
        }
        out.points.emplace_back(chart, std::move(coords));
    }
    return out;
}

const VectorField& ResolvedDocument::field(const std::string& name) const {
    auto it = objects.find(name);
    if (it == objects.end()) input_error("no object named '" + name + "'");
    const auto* v = std::get_if<VectorField>(&it->second);
    if (!v) input_error("object '" + name + "' is not a vector field");
    return *v;
}

Distribution ResolvedDocument::distribution() const {
    if (source->distribution.empty()) input_error("'distribution' lists no generators");
    std::vector<VectorField> gens;
    for (const auto& name : source->distribution) gens.push_back(field(name));
    return Distribution(chart, std::move(gens));
}

std::pair<ExtForm, std::vector<ExtForm>> ResolvedDocument::pfaffian() const {
    if (!source->theta) input_error("missing 'pfaffian'");
    auto form = [&](const std::string& name) -> ExtForm {
        auto it = objects.find(name);
        if (it == objects.end()) {
            if (families.count(name)) input_error("'" + name + "' is a family; use moser-verify or pipeline");
            input_error("no object named '" + name + "'");
        }
        const auto* f = std::get_if<ExtForm>(&it->second);
        if (!f) input_error("object '" + name + "' is not a 1-form");
        return *f;
    };
    std::vector<ExtForm> omegas;
    for (const auto& name : source->omegas) omegas.push_back(form(name));
    return {form(*source->theta), std::move(omegas)};
}

OneParamFamily ResolvedDocument::family() const {
    if (!source->theta) input_error("missing 'pfaffian'");
    Chart extended = chart.extended(parameter);
    auto form = [&](const std::string& name) -> ExtForm {
        if (auto it = families.find(name); it != families.end()) return it->second;
        auto it = objects.find(name);
        if (it == objects.end()) input_error("no object named '" + name + "'");
        const auto* f = std::get_if<ExtForm>(&it->second);
        if (!f) input_error("object '" + name + "' is not a 1-form");
        return embed(*f, extended);
    };
    std::vector<ExtForm> omegas;
    for (const auto& name : source->omegas) omegas.push_back(form(name));
    OneParamFamily fam(chart, form(*source->theta), std::move(omegas), parameter);
    if (!source->L.empty()) {
        std::vector<VectorField> gens;
        for (const auto& name : source->L) gens.push_back(field(name));
        fam.set_fixed_L(std::move(gens));
    }
    return fam;
}

std::optional<std::vector<double>> ResolvedDocument::start() const {
    if (source->start.empty()) return std::nullopt;
    if (source->start.size() != chart.dim()) input_error("'start' has the wrong number of coordinates");
    std::vector<double> out;
    for (const auto& s : source->start) {
        try {
            out.push_back(to_double(parse_rational(s)));
        } catch (const Error& err) {
            input_error("bad start coordinate '" + s + "': " + err.what());
        }
    }
    return out;
}

}  // namespace engel
