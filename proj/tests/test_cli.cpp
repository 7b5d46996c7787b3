#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "engel/commands.hpp"
#include "engel/constructions.hpp"
#include "engel/document.hpp"
#include "engel/expression.hpp"
#include "oracle.hpp"

using namespace engel;

namespace {

Chart chart5() { return Chart(std::vector<std::string>{"x", "y", "z", "w", "x1"}); }

CommandResult run(const std::string& name, const std::string& doc = "", CommandOptions o = {}) {
    return run_subcommand(name, doc, o);
}

Json json_of(const std::string& name, const std::string& doc = "", CommandOptions o = {}) {
    o.format = ReportFormat::json;
    auto r = run_subcommand(name, doc, o);
    REQUIRE_MESSAGE(!r.output.empty(), r.error);
    return Json::parse(r.output);
}

const char* kEngelDoc = R"({
  "chart": ["x", "y", "z", "w"],
  "objects": [
    {"name": "W", "kind": "vector_field", "expr": "d_w"},
    {"name": "X", "kind": "vector_field", "expr": "d_x + y*d_z + w*d_y"}
  ],
  "distribution": ["W", "X"],
  "bracket": ["W", "X"],
  "points": [["0", "1/2", "0.25", "-3"]]
})";

}  // namespace

TEST_CASE("expression examples") {
    Chart c(std::vector<std::string>{"w", "x", "x1"});
    ParseContext ctx{c, std::nullopt, {}};
    auto v = parse_vector_field("d_w + x*d_x1", ctx);
    CHECK(v[0] == PolyScalar::constant(c, 1));
    CHECK(v[1].is_zero());
    CHECK(v[2] == PolyScalar::variable(c, 1));

    auto pair = engel_pair_standard();
    ParseContext engel{pair.chart, std::nullopt, {}};
    CHECK(parse_form("dz - y*dx", engel) == pair.theta);
    CHECK(parse_form("dz-y * dx", engel) == pair.theta);

    auto fam = engel_translation_family();
    ParseContext family{fam.extended_chart(), std::string("t"), {}};
    CHECK(parse_form("dy - (w+t)*dx", family) == fam.omegas_t()[0]);
    CHECK_THROWS_AS(parse_form("dt", family), ParseError);

    CHECK(parse_form("dx^dy", engel, 2) == wedge(ExtForm::differential(pair.chart, 0), ExtForm::differential(pair.chart, 1)));
    CHECK(parse_scalar("(x+1)^2 - x^2 - 2*x", engel) == PolyScalar::constant(pair.chart, 1));
    CHECK(parse_scalar("3/6*x", engel) == Rational(1, 2) * PolyScalar::variable(pair.chart, 0));
    CHECK(print(parse_vector_field("0", engel)) == "0");
}

TEST_CASE("parse errors carry line and column") {
    auto pair = engel_pair_standard();
    ParseContext ctx{pair.chart, std::nullopt, {}};
    try {
        parse_form("dx +\n  * dy", ctx);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_WITH_AS(parse_form("dq", ctx), doctest::Contains("unknown identifier"), ParseError);
    CHECK_THROWS_WITH_AS(parse_form("0.5*dx", ctx), doctest::Contains("non-rational literal"), ParseError);
    CHECK_THROWS_WITH_AS(parse_form("1e5*dx", ctx), doctest::Contains("non-rational literal"), ParseError);
    CHECK_THROWS_AS(parse_form("dx / x", ctx), ParseError);
    CHECK_THROWS_AS(parse_form("(dx", ctx), ParseError);
    CHECK_THROWS_AS(parse_vector_field("dx", ctx), ParseError);
    CHECK_THROWS_AS(parse_form("d_x", ctx), ParseError);
}

TEST_CASE("property: print then parse is the identity on 200 random objects") {
    oracle::Gen g(61);
    Chart c = chart5();
    ParseContext ctx{c, std::nullopt, {}};
    for (int i = 0; i < 200; ++i) {
        const int kind = i % 4;
        if (kind == 0) {
            auto v = g.field(c, 3);
            const auto text = print(v);
            CAPTURE(text);
            CHECK(parse_vector_field(text, ctx) == v);
            CHECK(print(parse_vector_field(text, ctx)) == text);
        } else if (kind == 1) {
            auto p = g.poly(c, 3, 4);
            const auto text = print(p);
            CAPTURE(text);
            CHECK(parse_scalar(text, ctx) == p);
        } else {
            const int degree = g.integer(1, 3);
            auto f = g.form(c, degree, 2);
            const auto text = print(f);
            CAPTURE(text);
            CHECK(parse_form(text, ctx, degree) == f);
            CHECK(print(parse_form(text, ctx, degree)) == text);
        }
    }
}

TEST_CASE("documents: validation and canonical round trip") {
    auto doc = parse_document(kEngelDoc);
    CHECK(doc.chart.size() == 4);
    CHECK(doc.objects.size() == 2);
    auto again = parse_document(to_json(doc));
    CHECK(to_json(again) == to_json(doc));
    auto resolved = resolve(doc);
    REQUIRE(resolved.points.size() == 1);
    CHECK(resolved.points[0].coords[2] == Rational(1, 4));

    CHECK_THROWS_WITH_AS(parse_document(R"({"chart": ["x"], "points": [[1]]})"), doctest::Contains("string"), Error);
    CHECK_THROWS_WITH_AS(parse_document(R"({"chart": ["x"], "oops": 1})"), doctest::Contains("unknown key"), Error);
    CHECK_THROWS_AS(parse_document("{not json"), Error);
    CHECK_THROWS_AS(resolve(parse_document(R"({"chart": ["x", "x"]})")), Error);
    CHECK_THROWS_AS(
        resolve(parse_document(R"({"chart": ["x"], "objects": [{"name": "x", "kind": "one_form", "expr": "dx"}]})")),
        Error);
    auto pts = parse_points("1,2;3/2,-0.5", Chart(std::vector<std::string>{"a", "b"}));
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].coords[1] == Rational(-1, 2));
    CHECK_THROWS_AS(parse_points("1,2,3", Chart(std::vector<std::string>{"a", "b"})), Error);
}

TEST_CASE("named objects and families resolve") {
    const char* doc = R"({
      "chart": ["x", "y", "z", "w"],
      "objects": [
        {"name": "th", "kind": "one_form", "expr": "dz - y*dx"},
        {"name": "om", "kind": "family", "expr": "dy - (w + t)*dx"},
        {"name": "Lw", "kind": "vector_field", "expr": "d_w"}
      ],
      "pfaffian": {"theta": "th", "omegas": ["om"]},
      "L": ["Lw"],
      "start": ["0.2", "-0.1", "0.3", "0.5"]
    })";
    auto parsed = parse_document(doc);
    auto resolved = resolve(parsed);
    auto fam = resolved.family();
    auto reference = engel_translation_family();
    CHECK(print(fam.omegas_t()[0]) == print(reference.omegas_t()[0]));
    CHECK(print(fam.theta_t()) == print(reference.theta_t()));
    REQUIRE(resolved.start());
    CHECK((*resolved.start())[1] == -0.1);
    CHECK_THROWS_AS(resolved.pfaffian(), Error);
}

TEST_CASE("subcommands: exit codes and reports") {
    auto fixtures = run("fixtures");
    CHECK(fixtures.exit_code == 0);
    auto fj = json_of("fixtures");
    CHECK(fj["all_match"] == true);
    REQUIRE(fj["fixtures"].size() == 3);
    CHECK(fj["fixtures"][0]["check"]["cauchy_rank"] == 5);
    CHECK(fj["fixtures"][2]["check"]["cauchy_rank"] == 1);
    CHECK(fj["fixtures"][2]["check"]["corank_L_in_D"] == 3);

    auto prolong = run("prolong", "", [] { CommandOptions o; o.n = 1; return o; }());
    REQUIRE(prolong.exit_code == 0);
    auto check = json_of("check", prolong.output);
    CHECK(check["verdict"] == true);
    CHECK(check["growth"] == Json::array({2, 3, 4}));
    CHECK(run("check", prolong.output).exit_code == 0);

    auto empty = run("check", R"({"chart": ["x"], "distribution": []})");
    CHECK(empty.exit_code == 1);
    CHECK(empty.error.find("input") != std::string::npos);

    auto exported = run("fixtures", "", [] { CommandOptions o; o.export_fixture = "b"; return o; }());
    REQUIRE(exported.exit_code == 0);
    CHECK(run("check", exported.output).exit_code == 2);

    auto nf = run("normal-form", "", [] { CommandOptions o; o.l = 1; o.r = 1; return o; }());
    REQUIRE(nf.exit_code == 0);
    CHECK(json_of("pfaffian", nf.output)["verdict"] == true);
    CHECK(json_of("check", nf.output)["verdict"] == true);

    auto bracket = json_of("bracket", kEngelDoc);
    CHECK(bracket["bracket"] == "d_y");
    CHECK(json_of("growth", kEngelDoc)["growth"] == Json::array({2, 3, 4}));

    CHECK(run("nope").exit_code == 1);
    auto bad_expr = run("check", R"({"chart": ["x"], "objects": [{"name": "A", "kind": "vector_field", "expr": "d_x +"}],
                                    "distribution": ["A"]})");
    CHECK(bad_expr.exit_code == 1);
    CHECK(bad_expr.error.find("line 1, column") != std::string::npos);
}

TEST_CASE("cauchy subcommand") {
    const char* doc = R"({"chart": ["x", "y", "z", "w"],
      "objects": [{"name": "th", "kind": "one_form", "expr": "dz - y*dx"}],
      "pfaffian": {"theta": "th"}})";
    auto j = json_of("cauchy", doc);
    CHECK(j["rank"] == 1);
    CHECK(j["first_point"]["basis"] == Json::array({"d_w"}));
    CHECK(run("cauchy", kEngelDoc).exit_code == 2);  // D itself has corank 2
}

TEST_CASE("flow subcommands") {
    CommandOptions o;
    o.family = "translation";
    auto mv = json_of("moser-verify", "", o);
    CHECK(mv["verdict"] == true);
    CHECK(mv["samples"][0]["X"] == "-d_w");
    CHECK(run("moser-verify", "", o).exit_code == 0);

    CommandOptions p;
    p.family = "pipeline";
    p.steps = 200;
    CHECK(run("pipeline", "", p).exit_code == 0);
    p.family = "moving-characteristic";
    auto moving = run("pipeline", "", p);
    CHECK(moving.exit_code == 2);
    CHECK(moving.error.find("even_contact") != std::string::npos);

    CommandOptions both;
    both.family = "translation";
    both.h = 0.01;
    both.steps = 10;
    CHECK(run("moser-verify", "", both).exit_code == 1);
}

TEST_CASE("reports are byte-stable and independent of --parallel") {
    CommandOptions o;
    o.seed = 7;
    o.samples = 30;
    const auto a = run("fixtures", "", o), b = run("fixtures", "", o);
    CHECK(a.output == b.output);
    o.parallel = true;
    CHECK(run("fixtures", "", o).output == a.output);
    o.format = ReportFormat::json;
    CHECK(run("fixtures", "", o).output == run("fixtures", "", o).output);
    CommandOptions m;
    m.family = "quadratic";
    CHECK(run("moser-verify", "", m).output == run("moser-verify", "", m).output);
}
