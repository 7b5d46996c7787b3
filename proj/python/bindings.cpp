#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "engel/commands.hpp"
#include "engel/document.hpp"
#include "engel/expression.hpp"
#include "engel/flow.hpp"
#include "engel/verify.hpp"

namespace py = pybind11;
using namespace engel;

namespace {

struct Parsed {
    Chart chart;
    ParseContext context;
};

Parsed context_for(const std::vector<std::string>& coordinates) {
    Chart c(coordinates);
    return {c, ParseContext{c, std::nullopt, {}}};
}

Distribution distribution_of(const Parsed& p, const std::vector<std::string>& fields) {
    std::vector<VectorField> gens;
    for (const auto& f : fields) gens.push_back(parse_vector_field(f, p.context));
    return Distribution(p.chart, std::move(gens));
}

RationalPoint point_of(const Chart& c, const std::vector<std::string>& coords) {
    if (coords.size() != c.dim()) throw Error("input: point has " + std::to_string(coords.size()) + " coordinates");
    RationalVector x;
    for (const auto& s : coords) x.push_back(parse_rational(s));
    return RationalPoint(c, std::move(x));
}

std::vector<RationalPoint> sample(const Chart& c, std::size_t samples, std::uint64_t seed) {
    SampleOptions o;
    o.samples = samples;
    o.seed = seed;
    return sample_points(c, o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact exterior calculus and generalized Engel structure checks";

    // Later registrations are tried first, so the most derived type goes last.
    auto& base = py::register_exception<Error>(m, "EngelError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<HypothesisViolation>(m, "HypothesisViolation", base);

    m.def(
        "run",
        [](const std::string& name, const std::string& document, const std::string& format, const std::string& points,
           std::optional<std::size_t> samples, std::optional<std::uint64_t> seed, std::optional<std::size_t> steps,
           std::optional<double> h, std::optional<double> tolerance, std::optional<int> n, std::optional<int> l,
           std::optional<int> r, std::optional<std::string> export_fixture, std::optional<std::string> family,
           bool parallel) {
            CommandOptions o;
            if (format == "json") o.format = ReportFormat::json;
            else if (format != "text") throw Error("format must be 'text' or 'json'");
            o.points = points;
            o.samples = samples;
            o.seed = seed;
            o.steps = steps;
            o.h = h;
            o.tolerance = tolerance;
            o.n = n;
            o.l = l;
            o.r = r;
            o.export_fixture = std::move(export_fixture);
            o.family = std::move(family);
            o.parallel = parallel;
            CommandResult res;
            {
                py::gil_scoped_release release;
                res = run_subcommand(name, document, o);
            }
            return py::make_tuple(res.exit_code, res.output, res.error);
        },
        py::arg("name"), py::arg("document") = "", py::arg("format") = "json", py::arg("points") = "",
        py::arg("samples") = py::none(), py::arg("seed") = py::none(), py::arg("steps") = py::none(),
        py::arg("h") = py::none(), py::arg("tolerance") = py::none(), py::arg("n") = py::none(),
        py::arg("l") = py::none(), py::arg("r") = py::none(), py::arg("export") = py::none(),
        py::arg("family") = py::none(), py::arg("parallel") = false,
        "Runs a CLI subcommand in process; returns (exit_code, output, error).");

    m.def(
        "bracket",
        [](const std::vector<std::string>& chart, const std::string& x, const std::string& y) {
            auto p = context_for(chart);
            return print(lie_bracket(parse_vector_field(x, p.context), parse_vector_field(y, p.context)));
        },
        py::arg("chart"), py::arg("x"), py::arg("y"));

    m.def(
        "exterior_derivative",
        [](const std::vector<std::string>& chart, const std::string& form, int degree) {
            auto p = context_for(chart);
            return print(exterior_derivative(parse_form(form, p.context, degree)));
        },
        py::arg("chart"), py::arg("form"), py::arg("degree") = 1);

    m.def(
        "growth_vector",
        [](const std::vector<std::string>& chart, const std::vector<std::string>& fields,
           const std::vector<std::string>& point, int max_depth) {
            auto p = context_for(chart);
            return derived_flag(distribution_of(p, fields), point_of(p.chart, point), max_depth).ranks;
        },
        py::arg("chart"), py::arg("fields"), py::arg("point"), py::arg("max_depth") = 8);

    m.def(
        "check_engel",
        [](const std::vector<std::string>& chart, const std::vector<std::string>& fields, std::size_t samples,
           std::uint64_t seed) {
            auto p = context_for(chart);
            auto d = distribution_of(p, fields);
            auto pts = sample(p.chart, samples, seed);
            return to_json(check_generalized_engel(d, pts), p.chart).dump();
        },
        py::arg("chart"), py::arg("fields"), py::arg("samples") = 25, py::arg("seed") = 1,
        "Generalized Engel report as JSON text.");

    m.def(
        "check_pfaffian",
        [](const std::vector<std::string>& chart, const std::string& theta, const std::vector<std::string>& omegas,
           std::size_t samples, std::uint64_t seed) {
            auto p = context_for(chart);
            std::vector<ExtForm> ws;
            for (const auto& w : omegas) ws.push_back(parse_form(w, p.context));
            auto pts = sample(p.chart, samples, seed);
            return to_json(check_pfaffian_criteria(parse_form(theta, p.context), ws, pts)).dump();
        },
        py::arg("chart"), py::arg("theta"), py::arg("omegas"), py::arg("samples") = 25, py::arg("seed") = 1,
        "Pfaffian criteria report as JSON text.");

    m.def("principal_angles", &principal_angles, py::arg("a"), py::arg("b"),
          "Ascending principal angles between the spans of two lists of vectors.");

    m.attr("subcommands") = [] {
        std::vector<std::string> out(std::begin(kSubcommands), std::end(kSubcommands));
        return out;
    }();
    m.attr("families") = [] {
        std::vector<std::string> out(std::begin(kBuiltinFamilies), std::end(kBuiltinFamilies));
        return out;
    }();
}
