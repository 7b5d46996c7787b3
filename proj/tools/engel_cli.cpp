#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"

#include "engel/commands.hpp"

namespace {

struct Flags {
    std::string input;
    std::string format = "text";
    std::string points;
    std::optional<std::size_t> samples, steps;
    std::optional<std::uint64_t> seed;
    std::optional<double> h, tolerance;
    std::optional<int> n, l, r;
    std::optional<std::string> export_fixture, family;
    bool parallel = false;
};

void add_sampling(CLI::App* sub, Flags& f) {
    sub->add_option("--points", f.points, "extra sample points, \"a,b;c,d\"");
    sub->add_option("--samples", f.samples, "number of pseudo-random sample points");
    sub->add_option("--seed", f.seed, "seed of the sample generator");
    sub->add_flag("--parallel", f.parallel, "evaluate sample points on worker threads");
}

void add_common(CLI::App* sub, Flags& f, bool takes_input) {
    sub->add_option("--format", f.format, "report format")->check(CLI::IsMember({"text", "json"}));
    if (takes_input) sub->add_option("input", f.input, "input document (default: stdin)");
}

void add_flow(CLI::App* sub, Flags& f) {
    // --h is the step size, so help is long-form only here.
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--steps", f.steps, "integrator steps on [0, 1]");
    sub->add_option("--h", f.h, "integrator step");
    sub->add_option("--tolerance", f.tolerance, "angle bound for the verdict");
    sub->add_option("--family", f.family, "built-in family instead of a document")
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(engel::kBuiltinFamilies),
                                                       std::end(engel::kBuiltinFamilies))));
}

std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path.empty() || path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open '" + path + "'");
        buffer << in.rdbuf();
    }
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for generalized Engel structures and their Moser stability"};
    app.require_subcommand(1);
    Flags f;

    auto* bracket = app.add_subcommand("bracket", "Lie bracket of the two fields named in 'bracket'");
    add_common(bracket, f, true);
    bracket->add_option("--points", f.points, "points at which to evaluate the bracket");

    auto* growth = app.add_subcommand("growth", "growth vector of the distribution");
    auto* cauchy = app.add_subcommand("cauchy", "Cauchy characteristic of a corank-1 distribution or form");
    auto* check = app.add_subcommand("check", "generalized Engel conditions on the flag L, D, D^2, D^3");
    auto* pfaffian = app.add_subcommand("pfaffian", "criteria for a Pfaffian system theta, omega^1..omega^k");
    for (auto* sub : {growth, cauchy, check, pfaffian}) {
        add_common(sub, f, true);
        add_sampling(sub, f);
    }

    auto* prolong = app.add_subcommand("prolong", "emit the Cartan prolongation chart as an input document");
    prolong->add_option("--n", f.n, "contact dimension parameter, n >= 1")->default_val(1);
    auto* nf = app.add_subcommand("normal-form", "emit the normal-form Pfaffian system as an input document");
    nf->add_option("--l", f.l, "l >= 0, so k = 2l+1")->default_val(1);
    nf->add_option("--r", f.r, "number of extra coordinates")->default_val(0);

    auto* fixtures = app.add_subcommand("fixtures", "check the three reference distributions on R^8");
    add_common(fixtures, f, false);
    add_sampling(fixtures, f);
    fixtures->add_option("--export", f.export_fixture, "print fixture a, b or c as an input document")
        ->check(CLI::IsMember({"a", "b", "c"}));

    auto* moser = app.add_subcommand("moser-verify", "exact Moser field samples plus the integrated flow");
    auto* pipeline = app.add_subcommand("pipeline", "two-stage stability flow for a family with varying theta");
    for (auto* sub : {moser, pipeline}) {
        add_common(sub, f, true);
        add_sampling(sub, f);
        add_flow(sub, f);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    engel::CommandOptions opts;
    opts.format = f.format == "json" ? engel::ReportFormat::json : engel::ReportFormat::text;
    opts.points = f.points;
    opts.samples = f.samples;
    opts.seed = f.seed;
    opts.steps = f.steps;
    opts.h = f.h;
    opts.tolerance = f.tolerance;
    opts.n = f.n;
    opts.l = f.l;
    opts.r = f.r;
    opts.export_fixture = f.export_fixture;
    opts.family = f.family;
    opts.parallel = f.parallel;

    const bool needs_document = name == "bracket" || name == "growth" || name == "cauchy" || name == "check" ||
                                name == "pfaffian" || ((name == "moser-verify" || name == "pipeline") && !f.family);
    std::string document;
    if (needs_document) {
        try {
            document = read_input(f.input);
        } catch (const std::exception& e) {
            std::cerr << "engel " << name << ": " << e.what() << "\n";
            return 1;
        }
        if (document.find_first_not_of(" \t\r\n") == std::string::npos) {
            std::cerr << "engel " << name << ": input: empty input document\n";
            return 1;
        }
    }

    const auto result = engel::run_subcommand(name, document, opts);
    std::cout << result.output;
    std::cerr << result.error;
    return result.exit_code;
}
