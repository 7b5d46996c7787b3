#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "engel/constructions.hpp"
#include "engel/verify.hpp"
#include "oracle.hpp"

using namespace engel;

namespace {

std::vector<RationalPoint> samples(const Chart& c, std::size_t n = 25, std::uint64_t seed = 1) {
    SampleOptions o;
    o.samples = n;
    o.seed = seed;
    return sample_points(c, o);
}

std::vector<std::string> failed_conditions(const FlagReport& r) {
    const bool passes[] = {r.cond_even_corank, r.cond_E_corank1, r.cond_D3_full, r.cond_L_in_D,
                           r.cond_L_corank1_in_D};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < 5; ++i)
        if (!passes[i]) out.push_back(kFlagConditions[i]);
    return out;
}

RationalVector unit(const Chart& c, const std::string& name) {
    RationalVector v(c.dim(), Rational(0));
    v[*c.index_of(name)] = 1;
    return v;
}

}  // namespace

TEST_CASE("fixtures fail exactly their expected condition") {
    for (const auto& f : reference_fixtures()) {
        CAPTURE(f.name);
        auto pts = samples(f.D.chart());
        auto r = check_generalized_engel(f.D, pts);
        CHECK(r.regular);
        CHECK(failed_conditions(r) == f.expected_failures);
        CHECK(r.corank_L_in_D == f.expected_corank_L_in_D);
        CHECK(r.growth == std::vector<std::size_t>{4, 7, 8});
        REQUIRE(r.verdict.has_value());
        CHECK_FALSE(*r.verdict);
        for (const auto& w : r.witnesses) CHECK(w.rank_L == f.expected_cauchy_rank);
    }
}

TEST_CASE("fixture (b) witnesses d_y3 outside D") {
    auto f = reference_fixtures()[1];
    auto r = check_generalized_engel(f.D, samples(f.D.chart()));
    const auto dy3 = unit(f.D.chart(), "y3");
    for (const auto& w : r.witnesses) {
        CHECK(std::find(w.L_outside_D.begin(), w.L_outside_D.end(), dy3) != w.L_outside_D.end());
        CHECK_FALSE(in_span(f.D.evaluate(w.point), dy3, 8));
    }
}

TEST_CASE("flag ranks of fixtures match numeric oracle") {
    for (const auto& f : reference_fixtures()) {
        auto pts = samples(f.D.chart(), 5, 3);
        auto r = check_generalized_engel(f.D, pts);
        for (const auto& w : r.witnesses) {
            CHECK(w.rank_D == oracle::numeric_rank(f.D.evaluate(w.point), 8));
            // E from oracle brackets of the generators.
            auto vals = f.D.evaluate(w.point);
            const auto& gens = f.D.generators();
            for (std::size_t a = 0; a < gens.size(); ++a)
                for (std::size_t b = a + 1; b < gens.size(); ++b)
                    vals.push_back(oracle::bracket_at(gens[a], gens[b], w.point.coords));
            CHECK(w.rank_E == oracle::numeric_rank(vals, 8));
        }
    }
}

TEST_CASE("Cartan prolongations are generalized Engel with rank vector (2n-1, 2n, 4n-1, 4n)") {
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        auto pc = cartan_prolongation(n);
        CHECK(pc.chart.dim() == static_cast<std::size_t>(4 * n));
        auto r = check_generalized_engel(pc.D, samples(pc.chart));
        REQUIRE(r.verdict.has_value());
        CHECK(*r.verdict);
        const std::size_t un = static_cast<std::size_t>(n);
        for (const auto& w : r.witnesses) {
            CHECK(w.rank_L == 2 * un - 1);
            CHECK(w.rank_D == 2 * un);
            CHECK(w.rank_E == 4 * un - 1);
            CHECK(w.rank_D3 == 4 * un);
            CHECK(subspace_compare(w.L_basis, pc.L.evaluate(w.point), pc.chart.dim()) == SubspaceRelation::equal);
        }
        if (n == 1) CHECK(r.growth == std::vector<std::size_t>{2, 3, 4});
        // E is the contact kernel.
        for (const auto& x : pc.E.generators()) CHECK(contract(pc.theta, std::vector<VectorField>{x}).is_zero());
    }
    CHECK_THROWS_AS(cartan_prolongation(0), Error);
}

TEST_CASE("normal forms satisfy all four criteria") {
    for (int l = 0; l <= 2; ++l)
        for (int r = 0; r <= 1; ++r) {
            CAPTURE(l);
            CAPTURE(r);
            auto nf = normal_form(l, r);
            CHECK(nf.chart.dim() == static_cast<std::size_t>(4 * l + 4 + r));
            auto rep = check_pfaffian_criteria(nf.Theta, nf.Omegas, samples(nf.chart));
            CHECK(rep.k == 2 * l + 1);
            CHECK(rep.eta_independent);
            CHECK(rep.omega_theta_vanish);
            CHECK(rep.theta_nondegenerate);
            CHECK(rep.theta_degenerate_next);
            CHECK(rep.verdict);
        }
}

TEST_CASE("normal form with l = 0 is the swapped Engel pair after c1 = -w") {
    auto nf = normal_form(0, 0);
    auto pair = engel_pair_swapped();
    const Chart& t = pair.chart;
    std::vector<PolyScalar> images{PolyScalar::variable(t, 0), PolyScalar::variable(t, 1), PolyScalar::variable(t, 2),
                                   -PolyScalar::variable(t, 3)};
    CHECK(pullback(nf.Theta, images) == pair.theta);
    CHECK(pullback(nf.Omegas[0], images) == pair.omega);
    auto standard = engel_pair_standard();
    CHECK(standard.omega != pair.omega);
    for (const auto& p : {standard, pair}) {
        auto rep = check_pfaffian_criteria(p.theta, {p.omega}, samples(p.chart));
        CHECK(rep.verdict);
    }
}

TEST_CASE("normal forms define generalized Engel distributions") {
    for (int l = 0; l <= 1; ++l) {
        auto nf = normal_form(l, 0);
        auto pts = samples(nf.chart, 10);
        auto conv = forms_to_distribution(nf.Theta, nf.Omegas, pts);
        REQUIRE(conv.symbolic);
        auto r = check_generalized_engel(*conv.symbolic, pts);
        REQUIRE(r.verdict.has_value());
        CHECK(*r.verdict);
        for (std::size_t i = 0; i < pts.size(); ++i)
            CHECK(subspace_compare(conv.symbolic->evaluate(pts[i]), conv.pointwise[i], nf.chart.dim()) ==
                  SubspaceRelation::equal);
    }
}

TEST_CASE("distribution to forms round trip on prolongations") {
    for (int n = 1; n <= 2; ++n) {
        auto pc = cartan_prolongation(n);
        auto pts = samples(pc.chart, 10);
        auto forms = distribution_to_forms(pc.D, pts);
        REQUIRE(forms.symbolic);
        REQUIRE(forms.theta);
        CHECK(forms.omegas.size() == static_cast<std::size_t>(2 * n - 1));
        for (const auto& x : pc.D.generators()) {
            CHECK(contract(*forms.theta, std::vector<VectorField>{x}).is_zero());
            for (const auto& w : forms.omegas) CHECK(contract(w, std::vector<VectorField>{x}).is_zero());
        }
        auto rep = check_pfaffian_criteria(*forms.theta, forms.omegas, pts);
        CHECK(rep.verdict);
    }
}

TEST_CASE("Pfaffian criteria detect failures and bad input") {
    auto pair = engel_pair_standard();
    const Chart& c = pair.chart;
    auto dy = ExtForm::differential(c, 1);
    auto rep = check_pfaffian_criteria(pair.theta, {dy}, samples(c));
    CHECK_FALSE(rep.eta_independent);
    CHECK_FALSE(rep.verdict);
    CHECK_THROWS_AS(check_pfaffian_criteria(pair.theta, {pair.omega, dy}, samples(c)), Error);
    // On R^5 a contact form has theta ^ dtheta^2 != 0, so item 4 fails for k = 1.
    Chart c5(std::vector<std::string>{"x", "y", "z", "w", "v"});
    auto contact = ExtForm::differential(c5, 2) - PolyScalar::variable(c5, 1) * ExtForm::differential(c5, 0) -
                   PolyScalar::variable(c5, 3) * ExtForm::differential(c5, 4);
    auto bad = check_pfaffian_criteria(contact, {ExtForm::differential(c5, 0)}, samples(c5));
    CHECK_FALSE(bad.theta_degenerate_next);
    CHECK_FALSE(bad.verdict);
}

TEST_CASE("eta forms of the Engel pair") {
    auto pair = engel_pair_standard();
    auto eta = eta_forms(pair.theta, {pair.omega});
    REQUIRE(eta.size() == 1);
    CHECK(eta[0] == wedge(wedge(pair.omega, pair.theta), exterior_derivative(pair.omega)));
    CHECK_FALSE(eta[0].is_zero());
}

TEST_CASE("check reports undefined L when D^2 has corank two") {
    Chart c(std::vector<std::string>{"x", "y", "z", "w"});
    Distribution d(c, {VectorField::coordinate(c, 0), VectorField::coordinate(c, 1)});
    auto r = check_generalized_engel(d, samples(c, 5));
    CHECK_FALSE(r.cond_E_corank1);
    CHECK_FALSE(r.cond_L_in_D);
    CHECK_FALSE(r.note.empty());
    REQUIRE(r.verdict.has_value());
    CHECK_FALSE(*r.verdict);
}

TEST_CASE("parallel and serial checks agree") {
    auto pc = cartan_prolongation(2);
    auto pts = samples(pc.chart);
    auto a = check_generalized_engel(pc.D, pts, false), b = check_generalized_engel(pc.D, pts, true);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (std::size_t i = 0; i < a.witnesses.size(); ++i) CHECK(a.witnesses[i].L_basis == b.witnesses[i].L_basis);
    CHECK(a.verdict == b.verdict);
}
