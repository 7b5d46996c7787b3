// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "engel/commands.hpp"
#include "engel/constructions.hpp"
#include "engel/expression.hpp"
#include "engel/flow.hpp"
#include "engel/moser.hpp"
#include "engel/verify.hpp"
#include "oracle.hpp"

using namespace engel;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

std::vector<RationalPoint> samples(const Chart& c, std::size_t n, std::uint64_t seed = 1) {
    SampleOptions o;
    o.samples = n;
    o.seed = seed;
    return sample_points(c, o);
}

struct TimeSample {
    Rational t;
    RationalPoint p;
};

std::vector<TimeSample> time_samples(const OneParamFamily& fam, std::size_t n, std::uint64_t seed) {
    oracle::Gen g(seed);
    std::vector<TimeSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rational t(g.integer(0, 12), 12);
        t.canonicalize();
        out.push_back({t, g.point(fam.chart())});
    }
    return out;
}

bool subset(const std::vector<RationalVector>& a, const std::vector<RationalVector>& b, std::size_t n) {
    auto r = subspace_compare(a, b, n);
    return r == SubspaceRelation::a_subset_b || r == SubspaceRelation::equal;
}

std::vector<std::string> failed_conditions(const FlagReport& r) {
    const bool passes[] = {r.cond_even_corank, r.cond_E_corank1, r.cond_D3_full, r.cond_L_in_D, r.cond_L_corank1_in_D};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < 5; ++i)
        if (!passes[i]) out.push_back(kFlagConditions[i]);
    return out;
}

const std::vector<double> kP0{0.2, -0.1, 0.3, 0.5};

void fixture_verdicts(Outcome& o) {
    const auto fixtures = reference_fixtures();
    o.require(fixtures.size() == 3, "three fixtures");
    const std::vector<std::string> only_L_in_D{"L_in_D"}, only_corank{"L_corank1_in_D"};
    const std::vector<std::vector<std::string>> expected{only_L_in_D, only_L_in_D, only_corank};
    const int expected_corank[] = {-1, 1, 3};
    for (std::size_t i = 0; i < fixtures.size() && i < 3; ++i) {
        const auto& f = fixtures[i];
        auto r = check_generalized_engel(f.D, samples(f.D.chart(), 25));
        o.require(r.regular, f.name + " regular");
        o.require(failed_conditions(r) == expected[i], f.name + " failed set");
        if (i == 2) o.require(r.cond_even_corank && r.cond_E_corank1 && r.cond_D3_full && r.cond_L_in_D, "(c) conditions 1-3 and L in D");
        o.require(r.corank_L_in_D == expected_corank[i], f.name + " corank of L in D");
        o.require(r.verdict.has_value() && !*r.verdict, f.name + " verdict false");
        if (i == 1) {
            RationalVector dy3(8, Rational(0));
            dy3[*f.D.chart().index_of("y3")] = 1;
            for (const auto& w : r.witnesses) {
                bool found = false;
                for (const auto& v : w.L_outside_D) found = found || v == dy3;
                o.require(found, "(b) witness d_y3");
            }
        }
        o.detail << f.name << ": corank_L_in_D=" << r.corank_L_in_D << " ";
    }
}

void cauchy_ranks(Outcome& o) {
    const auto fixtures = reference_fixtures();
    const std::size_t expected[] = {5, 1};
    const std::size_t which[] = {0, 2};
    for (std::size_t j = 0; j < 2; ++j) {
        const auto& f = fixtures[which[j]];
        auto r = check_generalized_engel(f.D, samples(f.D.chart(), 25));
        o.require(r.witnesses.size() == 25, f.name + " 25 witnesses");
        for (const auto& w : r.witnesses) o.require(w.rank_L == expected[j], f.name + " rank L");
        o.detail << f.name << ": rank " << (r.witnesses.empty() ? 0 : r.witnesses[0].rank_L) << " at "
                 << r.witnesses.size() << " points ";
    }
}

void prolongation(Outcome& o) {
    for (int n = 1; n <= 3; ++n) {
        auto pc = cartan_prolongation(n);
        auto r = check_generalized_engel(pc.D, samples(pc.chart, 25));
        o.require(r.verdict.has_value() && *r.verdict, "n=" + std::to_string(n) + " verdict");
        const std::size_t un = static_cast<std::size_t>(n);
        for (const auto& w : r.witnesses)
            o.require(w.rank_L == 2 * un - 1 && w.rank_D == 2 * un && w.rank_E == 4 * un - 1 && w.rank_D3 == 4 * un,
                      "n=" + std::to_string(n) + " rank vector");
        if (n == 1) o.require(r.growth == std::vector<std::size_t>{2, 3, 4}, "n=1 growth (2,3,4)");
    }
    o.detail << "n=1..3 rank vectors (2n-1, 2n, 4n-1, 4n) at 25 points";
}

void normal_forms(Outcome& o) {
    for (int l = 0; l <= 2; ++l)
        for (int r = 0; r <= 1; ++r) {
            auto nf = normal_form(l, r);
            auto rep = check_pfaffian_criteria(nf.Theta, nf.Omegas, samples(nf.chart, 25));
            const std::string tag = "(l,r)=(" + std::to_string(l) + "," + std::to_string(r) + ")";
            o.require(rep.eta_independent && rep.theta_nondegenerate, tag + " sampled items");
            o.require(rep.omega_theta_vanish && rep.theta_degenerate_next, tag + " symbolic items");
            o.require(rep.verdict, tag + " verdict");
        }
    auto nf = normal_form(0, 0);
    auto pair = engel_pair_swapped();
    const Chart& t = pair.chart;
    std::vector<PolyScalar> images{PolyScalar::variable(t, 0), PolyScalar::variable(t, 1), PolyScalar::variable(t, 2),
                                   -PolyScalar::variable(t, 3)};
    o.require(pullback(nf.Theta, images) == pair.theta && pullback(nf.Omegas[0], images) == pair.omega,
              "l=0 equals the Engel pair under c1 = -w");
    o.detail << "6 systems, l=0 pulls back to dz - y dx, dx - w dy";
}

void check_rank_laws(Outcome& o, const OneParamFamily& fam, const TimeSample& s, const std::string& tag) {
    auto k = kernel_distributions(fam, s.t, s.p);
    const std::size_t n = fam.chart().dim();
    o.require(k.K.size() == fam.k(), tag + " K count");
    for (std::size_t i = 0; i < k.K.size(); ++i) {
        o.require(subset(k.K[i], k.L, n), tag + " K in L");
        o.require(k.K[i].size() + 1 == k.L.size(), tag + " corank K in L");
        o.require(k.J[i].size() == k.W.size() + 1, tag + " rank J");
    }
}

OneParamFamily prolongation_family(int n) {
    auto pc = cartan_prolongation(n);
    auto f = distribution_to_forms(pc.D, samples(pc.chart, 5));
    if (!f.symbolic) throw Error("prolongation forms not symbolic");
    return OneParamFamily::constant(*f.theta, f.omegas);
}

void rank_laws(Outcome& o) {
    auto pro = prolongation_family(2);
    for (const auto& s : time_samples(pro, 10, 501)) check_rank_laws(o, pro, s, "prolongation");
    auto tr = engel_translation_family();
    for (const auto& s : time_samples(tr, 10, 502)) check_rank_laws(o, tr, s, "translation");
    o.detail << "10 samples each on the n=2 prolongation and the translation family";
}

void moser_exactness(Outcome& o) {
    auto fam = engel_translation_family();
    const RationalVector expected{0, 0, 0, -1};
    const Chart& ext = fam.extended_chart();
    auto v = [&](std::size_t i) { return PolyScalar::variable(ext, i); };
    OneParamFamily scaled(fam.chart(), (PolyScalar::constant(ext, 2) + v(0) * v(0) + v(4) * v(4)) * fam.theta_t(),
                          {(PolyScalar::constant(ext, 3) + v(1) * v(1) + v(4)) * fam.omegas_t()[0]});
    scaled.set_fixed_L(*fam.fixed_L());
    for (const auto& s : time_samples(fam, 20, 601)) {
        auto res = moser_field_at(fam, s.t, s.p);
        o.require(res.X == expected, "X = -d_w");
        o.require(res.residual_zero && res.membership_L, "zero residual, X in L");
        o.require(moser_field_at(scaled, s.t, s.p).X == res.X, "invariance under (f theta, A omega)");
    }
    o.detail << "X = -d_w at 20 (t,p), residual 0, rescaled system agrees";
}

void flow_verification(Outcome& o) {
    auto v = integrate_moser_flow(engel_translation_family(), kP0);
    const double w_err = std::abs(v.trajectory.back()[3] + 0.5);
    o.require(!v.truncated, "not truncated");
    o.require(v.max_angle_D <= 1e-6, "D-angle <= 1e-6");
    o.require(w_err <= 1e-8, "w(1) = -0.5 within 1e-8");
    o.require(v.max_angle_L <= 1e-8, "L-angle <= 1e-8");
    // The translation flow is exact up to rounding, so the order is measured off the floor.
    auto quad = engel_quadratic_family();
    std::vector<double> errors;
    for (double h : {0.2, 0.1, 0.05}) {
        FlowOptions fo;
        fo.h = h;
        errors.push_back(integrate_moser_flow(quad, kP0, fo).max_angle_D);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) o.require(errors[i - 1] / errors[i] >= 8.0, "halving h gains >= 8x");
    char buf[256];
    std::snprintf(buf, sizeof buf, "D-angle %.2e, |w+0.5| %.2e, L-angle %.2e; quadratic family ratios %.1f, %.1f",
                  v.max_angle_D, w_err, v.max_angle_L, errors[0] / errors[1], errors[1] / errors[2]);
    o.detail << buf;
}

void pipeline(Outcome& o) {
    auto v = verify_stability_pipeline(pipeline_family(), kP0);
    o.require(v.max_angle_D <= 1e-4, "composed D-angle <= 1e-4");
    auto tr = engel_translation_family();
    auto composed = verify_stability_pipeline(tr, kP0);
    auto direct = integrate_moser_flow(tr, kP0);
    const double dist = trajectory_distance(composed, direct);
    const double angle_gap = std::abs(composed.max_angle_D - direct.max_angle_D);
    o.require(dist <= 1e-10 && angle_gap <= 1e-10, "constant theta reduces to stage 2");
    char buf[200];
    std::snprintf(buf, sizeof buf, "composed D-angle %.2e; constant-theta distance %.2e", v.max_angle_D, dist);
    o.detail << buf;
}

void algebra(Outcome& o) {
    constexpr int kInstances = 120;
    Chart c(std::vector<std::string>{"x", "y", "z", "w"});
    oracle::Gen g(901);
    int counts[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < kInstances; ++i) {
        VectorField X = g.field(c), Y = g.field(c), Z = g.field(c);
        o.require(lie_bracket(X, Y) == -lie_bracket(Y, X), "antisymmetry");
        ++counts[0];
        o.require((lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y)))
                      .is_zero(),
                  "Jacobi");
        ++counts[1];
        ExtForm a = (i % 3 == 0) ? ExtForm::scalar(g.poly(c, 3, 4)) : g.form(c, g.integer(1, 2), 3);
        o.require(exterior_derivative(exterior_derivative(a)).is_zero(), "d o d = 0");
        ++counts[2];
        const int pa = g.integer(0, 2);
        ExtForm p = pa == 0 ? ExtForm::scalar(g.poly(c)) : g.form(c, pa);
        ExtForm q = g.form(c, g.integer(1, 2));
        ExtForm rhs = wedge(exterior_derivative(p), q);
        if (pa % 2 == 0) rhs += wedge(p, exterior_derivative(q));
        else rhs -= wedge(p, exterior_derivative(q));
        o.require(exterior_derivative(wedge(p, q)) == rhs, "Leibniz");
        ++counts[3];
        ExtForm one = g.form(c, 1);
        ExtForm cartan = interior_product(X, exterior_derivative(one)) + exterior_derivative(interior_product(X, one));
        RationalPoint pt = g.point(c);
        RationalVector u = g.vector(4);
        o.require(evaluate(cartan, pt).apply(std::vector<RationalVector>{u}) == oracle::lie_derivative_on(X, one, pt.coords, u),
                  "Cartan");
        ++counts[4];
    }
    o.detail << counts[0] << " instances of each of 5 identities";
}

void cli(Outcome& o) {
    CommandOptions opts;
    opts.format = ReportFormat::json;
    auto fixtures = run_subcommand("fixtures", "", opts);
    o.require(fixtures.exit_code == 0, "fixtures exit 0");
    auto j = Json::parse(fixtures.output);
    o.require(j["all_match"] == true && j["fixtures"].size() == 3, "three matching fixture reports");

    Chart c(std::vector<std::string>{"x", "y", "z", "w", "x1"});
    ParseContext ctx{c, std::nullopt, {}};
    oracle::Gen g(1001);
    int round_trips = 0;
    for (int i = 0; i < 200; ++i) {
        bool ok = false;
        if (i % 3 == 0) {
            auto v = g.field(c, 3);
            ok = parse_vector_field(print(v), ctx) == v;
        } else if (i % 3 == 1) {
            auto p = g.poly(c, 3, 4);
            ok = parse_scalar(print(p), ctx) == p;
        } else {
            const int degree = g.integer(1, 3);
            auto f = g.form(c, degree, 2);
            ok = parse_form(print(f), ctx, degree) == f;
        }
        o.require(ok, "round trip " + std::to_string(i));
        round_trips += ok;
    }

    CommandOptions seeded;
    seeded.seed = 7;
    const auto a = run_subcommand("fixtures", "", seeded).output;
    o.require(a == run_subcommand("fixtures", "", seeded).output, "text report byte-stable");
    seeded.parallel = true;
    o.require(a == run_subcommand("fixtures", "", seeded).output, "parallel report identical");
    seeded.format = ReportFormat::json;
    o.require(run_subcommand("fixtures", "", seeded).output == run_subcommand("fixtures", "", seeded).output,
              "json report byte-stable");
    o.detail << "fixtures exit " << fixtures.exit_code << ", " << round_trips << "/200 round trips";
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"fixture verdicts", fixture_verdicts},
        {"Cauchy ranks", cauchy_ranks},
        {"prolongation flags", prolongation},
        {"normal forms", normal_forms},
        {"rank laws", rank_laws},
        {"Moser exactness", moser_exactness},
        {"flow verification", flow_verification},
        {"pipeline", pipeline},
        {"algebraic properties", algebra},
        {"CLI", cli},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("criterion %d %s: %s (%.2fs) %s\n", index, name, o.pass ? "PASS" : "FAIL", seconds, o.detail.str().c_str());
    }
    return failed == 0 ? 0 : 1;
}
