#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>

#include "engel/constructions.hpp"
#include "engel/distribution.hpp"
#include "oracle.hpp"

using namespace engel;

namespace {

Chart chart4() { return Chart(std::vector<std::string>{"x", "y", "z", "w"}); }

std::vector<RationalVector> evaluate_all(const std::vector<VectorField>& fs, const RationalPoint& p) {
    std::vector<RationalVector> out;
    for (const auto& f : fs) out.push_back(evaluate(f, p));
    return out;
}

}  // namespace

TEST_CASE("standard Engel structure has growth (2, 3, 4)") {
    Distribution d = standard_engel();
    oracle::Gen g(21);
    for (int i = 0; i < 25; ++i) {
        auto gv = derived_flag(d, g.point(d.chart()), 4);
        CHECK(gv.ranks == std::vector<std::size_t>{2, 3, 4});
    }
}

TEST_CASE("derived flag stops when stationary") {
    Chart c = chart4();
    Distribution d(c, {VectorField::coordinate(c, 0), VectorField::coordinate(c, 1)});
    auto gv = derived_flag(d, RationalPoint::origin(c), 5);
    CHECK(gv.ranks == std::vector<std::size_t>{2});
}

TEST_CASE("property: D^2 rank matches oracle brackets") {
    oracle::Gen g(22);
    Chart c = chart4();
    for (int i = 0; i < 100; ++i) {
        std::vector<VectorField> gens;
        const int m = g.integer(1, 3);
        for (int k = 0; k < m; ++k) gens.push_back(g.field(c, 1));
        Distribution d(c, gens);
        auto levels = derived_flag_generators(d, 2);
        RationalPoint p = g.point(c);
        std::vector<RationalVector> values = evaluate_all(gens, p);
        for (std::size_t a = 0; a < gens.size(); ++a)
            for (std::size_t b = a + 1; b < gens.size(); ++b) values.push_back(oracle::bracket_at(gens[a], gens[b], p.coords));
        CHECK(pointwise_rank(levels[1], p) == oracle::numeric_rank(values, 4));
        CHECK(pointwise_rank(d, p) == oracle::numeric_rank(evaluate_all(gens, p), 4));
    }
}

TEST_CASE("Cauchy characteristic of the Engel D^2 is the w-line") {
    Distribution d = standard_engel();
    auto e = derived_flag_generators(d, 2)[1];
    oracle::Gen g(23);
    for (int i = 0; i < 10; ++i) {
        auto p = g.point(d.chart());
        auto res = cauchy_characteristic(e, p);
        REQUIRE(res.rank() == 1);
        CHECK(res.basis[0] == RationalVector{0, 0, 0, 1});
        const RationalVector theta = res.theta;
        for (const auto& v : e.evaluate(p)) CHECK(dot(theta, v) == 0);
    }
}

TEST_CASE("Cauchy characteristic from generators agrees with the form version") {
    for (int n = 1; n <= 3; ++n) {
        auto pc = cartan_prolongation(n);
        oracle::Gen g(24 + static_cast<std::uint64_t>(n));
        for (int i = 0; i < 5; ++i) {
            auto p = g.point(pc.chart);
            auto a = cauchy_characteristic(pc.E, p);
            auto b = cauchy_characteristic(pc.theta, p);
            CHECK(a.rank() == static_cast<std::size_t>(2 * n - 1));
            CHECK(subspace_compare(a.basis, b.basis, pc.chart.dim()) == SubspaceRelation::equal);
            CHECK(subspace_compare(a.basis, pc.L.evaluate(p), pc.chart.dim()) == SubspaceRelation::equal);
        }
    }
}

TEST_CASE("Cauchy characteristic rejects corank other than one") {
    Distribution d = standard_engel();
    CHECK_THROWS_AS(cauchy_characteristic(d, RationalPoint::origin(d.chart())), HypothesisViolation);
}

TEST_CASE("annihilators: pointwise and symbolic") {
    Distribution d = standard_engel();
    oracle::Gen g(25);
    auto p = g.point(d.chart());
    auto ann = annihilator(d, p);
    REQUIRE(ann.size() == 2);
    for (const auto& c : ann)
        for (const auto& v : d.evaluate(p)) CHECK(dot(c, v) == 0);

    auto sym = symbolic_annihilator(d);
    REQUIRE(sym.system);
    REQUIRE(sym.system->forms().size() == 2);
    for (const auto& f : sym.system->forms())
        for (const auto& x : d.generators()) CHECK(contract(f, std::vector<VectorField>{x}).is_zero());

    auto pair = engel_pair_standard();
    PfaffianSystem s(pair.chart, {pair.theta, pair.omega});
    auto ker = symbolic_kernel(s);
    REQUIRE(ker.distribution);
    for (int i = 0; i < 10; ++i) {
        auto q = g.point(pair.chart);
        CHECK(subspace_compare(ker.distribution->evaluate(q), s.kernel_at(q), 4) == SubspaceRelation::equal);
        CHECK(subspace_compare(ker.distribution->evaluate(q), d.evaluate(q), 4) == SubspaceRelation::equal);
    }
}

TEST_CASE("subspace comparison") {
    std::vector<RationalVector> a{{1, 0, 0}}, b{{1, 0, 0}, {0, 1, 0}}, c{{0, 0, 1}}, b2{{1, 1, 0}, {1, -1, 0}};
    CHECK(subspace_compare(a, b, 3) == SubspaceRelation::a_subset_b);
    CHECK(subspace_compare(b, a, 3) == SubspaceRelation::b_subset_a);
    CHECK(subspace_compare(b, b2, 3) == SubspaceRelation::equal);
    CHECK(subspace_compare(a, c, 3) == SubspaceRelation::incomparable);
    CHECK(to_string(SubspaceRelation::a_subset_b) == "A_subset_B");
}

TEST_CASE("sampling is deterministic, bounded and puts user points first") {
    Chart c = chart4();
    SampleOptions o;
    auto a = sample_points(c, o), b = sample_points(c, o);
    REQUIRE(a.size() == 25);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coords == b[i].coords);
    for (const auto& p : a)
        for (const auto& x : p.coords) {
            CHECK(abs(x) <= 3);
            CHECK(x.get_den() <= 3);
        }
    o.seed = 2;
    auto other = sample_points(c, o);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].coords != other[i].coords;
    CHECK(differs);
    std::vector<RationalPoint> user{RationalPoint(c, {7, 7, 7, 7})};
    auto with_user = sample_points(c, o, user);
    CHECK(with_user.size() == 26);
    CHECK(with_user[0].coords == user[0].coords);
}

TEST_CASE("regularity reports singular witnesses") {
    Chart c(std::vector<std::string>{"x", "y"});
    Distribution d(c, {VectorField(c, {PolyScalar::variable(c, 0), PolyScalar(c)})});
    std::vector<RationalPoint> pts{RationalPoint(c, {1, 0}), RationalPoint(c, {0, 5}), RationalPoint(c, {2, 2})};
    auto r = check_regularity(d, pts);
    CHECK_FALSE(r.regular);
    CHECK(r.majority_rank == 1);
    REQUIRE(r.singular_witnesses.size() == 1);
    CHECK(r.singular_witnesses[0].coords == RationalVector{0, 5});
    auto tie = regularity_from_ranks(std::vector<RationalPoint>{pts[0], pts[1]}, {1, 2});
    CHECK(tie.majority_rank == 2);
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), true, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
}
