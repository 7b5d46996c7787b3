#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "engel/constructions.hpp"
#include "engel/flow.hpp"
#include "engel/moser.hpp"
#include "engel/verify.hpp"
#include "oracle.hpp"

using namespace engel;

namespace {

const std::vector<double> kP0{0.2, -0.1, 0.3, 0.5};

struct Sample {
    Rational t;
    RationalPoint p;
};

std::vector<Sample> time_samples(const OneParamFamily& fam, std::size_t n, std::uint64_t seed) {
    oracle::Gen g(seed);
    std::vector<Sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rational t(g.integer(0, 6), 6);
        t.canonicalize();
        out.push_back({t, g.point(fam.chart())});
    }
    return out;
}

/// Coefficient-wise d/dt of a family form, by interpolation in the t direction.
Rational omega_dot_on(const ExtForm& form_t, const Sample& s, const RationalVector& v) {
    RationalVector q = s.p.coords;
    q.push_back(s.t);
    RationalVector vt = v;
    vt.push_back(0);
    oracle::PointFn g = [&](const RationalVector& x) { return oracle::form_on(form_t, x, {vt}); };
    return oracle::directional_derivative(g, q, oracle::basis_vector(q.size(), q.size() - 1),
                                          oracle::form_degree_bound(form_t));
}

bool subset(const std::vector<RationalVector>& a, const std::vector<RationalVector>& b, std::size_t n) {
    auto r = subspace_compare(a, b, n);
    return r == SubspaceRelation::a_subset_b || r == SubspaceRelation::equal;
}

void check_rank_laws(const OneParamFamily& fam, const Sample& s) {
    auto k = kernel_distributions(fam, s.t, s.p);
    const std::size_t n = fam.chart().dim();
    REQUIRE(k.K.size() == fam.k());
    for (std::size_t i = 0; i < k.K.size(); ++i) {
        CHECK(subset(k.K[i], k.L, n));
        CHECK(k.K[i].size() + 1 == k.L.size());
        CHECK(k.J[i].size() == k.W.size() + 1);
        CHECK(subset(k.J[i], k.L, n));
    }
}

OneParamFamily prolongation_family(int n) {
    auto pc = cartan_prolongation(n);
    SampleOptions o;
    o.samples = 5;
    auto forms = distribution_to_forms(pc.D, sample_points(pc.chart, o));
    REQUIRE(forms.symbolic);
    return OneParamFamily::constant(*forms.theta, forms.omegas);
}

}  // namespace

TEST_CASE("translation family: X = -d_w exactly, checked against an independent residual") {
    auto fam = engel_translation_family();
    const RationalVector expected{0, 0, 0, -1};
    for (const auto& s : time_samples(fam, 20, 41)) {
        auto res = moser_field_at(fam, s.t, s.p);
        CHECK(res.X == expected);
        CHECK(res.residual_zero);
        CHECK(res.membership_L);
        // d omega(X, Y) + omega_dot(Y) = 0 on D, with D from the exact frame.
        auto frame = instant_frame(fam, s.t, s.p);
        const ExtForm omega = fam.omegas_at(s.t)[0];
        for (const auto& y : frame.D) {
            const Rational lhs = oracle::d_on(omega, s.p.coords, {res.X, y});
            CHECK(lhs + omega_dot_on(fam.omegas_t()[0], s, y) == 0);
        }
    }
}

TEST_CASE("form-choice independence: (f theta, A omega) gives the same field") {
    auto fam = engel_translation_family();
    const Chart& ext = fam.extended_chart();
    auto v = [&](std::size_t i) { return PolyScalar::variable(ext, i); };
    const PolyScalar f = PolyScalar::constant(ext, 2) + v(0) * v(0) + v(4) * v(4);
    const PolyScalar a = PolyScalar::constant(ext, 3) + v(1) * v(1) + v(4);
    OneParamFamily scaled(fam.chart(), f * fam.theta_t(), {a * fam.omegas_t()[0]});
    scaled.set_fixed_L(*fam.fixed_L());
    for (const auto& s : time_samples(fam, 20, 42))
        CHECK(moser_field_at(scaled, s.t, s.p).X == moser_field_at(fam, s.t, s.p).X);

    auto pro = prolongation_family(2);
    const Chart& pext = pro.extended_chart();
    const auto& w = pro.omegas_t();
    REQUIRE(w.size() == 3);
    // Unit upper triangular, so invertible everywhere.
    std::vector<ExtForm> mixed{w[0] + PolyScalar::variable(pext, 0) * w[1],
                               w[1] + PolyScalar::variable(pext, pext.dim() - 1) * w[2], w[2]};
    OneParamFamily pro2(pro.chart(), pro.theta_t(), mixed);
    for (const auto& s : time_samples(pro, 5, 43))
        CHECK(moser_field_at(pro2, s.t, s.p).X == moser_field_at(pro, s.t, s.p).X);
}

TEST_CASE("rank laws on the translation family and the n = 2 prolongation") {
    auto fam = engel_translation_family();
    for (const auto& s : time_samples(fam, 10, 44)) check_rank_laws(fam, s);
    auto pro = prolongation_family(2);
    for (const auto& s : time_samples(pro, 10, 45)) {
        check_rank_laws(pro, s);
        auto res = moser_field_at(pro, s.t, s.p);
        CHECK(is_zero(res.X));  // constant family
        CHECK(res.residual_zero);
    }
}

TEST_CASE("even contact stage: pipeline family gives X1 = -d_y") {
    auto fam = pipeline_family();
    for (const auto& s : time_samples(fam, 10, 46)) {
        auto x1 = even_contact_moser_field_at(fam, s.t, s.p);
        CHECK(x1 == RationalVector{0, -1, 0, 0});
    }
    auto translation = engel_translation_family();
    auto zero = even_contact_moser_field_at(translation, Rational(1, 2), RationalPoint::origin(translation.chart()));
    CHECK(is_zero(zero));
}

TEST_CASE("hypothesis violations are rejected") {
    auto moving = moving_characteristic_family();
    CHECK_THROWS_AS(even_contact_moser_field_at(moving, Rational(1, 3), RationalPoint::origin(moving.chart())),
                    HypothesisViolation);
    // theta varies on E, so stage 2 alone is not applicable.
    auto pipe = pipeline_family();
    CHECK_THROWS_AS(moser_field_at(pipe, Rational(0), RationalPoint::origin(pipe.chart())), HypothesisViolation);
    Chart spatial(std::vector<std::string>{"x", "y", "z", "w"});
    CHECK_THROWS_AS(OneParamFamily(spatial, ExtForm::differential(spatial, 0), {}), Error);
}

TEST_CASE("principal angles") {
    using M = std::vector<std::vector<double>>;
    M a{{1, 0, 0}}, b{{0, 1, 0}}, c{{1, 1, 0}};
    CHECK(principal_angles(a, a)[0] == doctest::Approx(0.0));
    CHECK(principal_angles(a, b)[0] == doctest::Approx(M_PI / 2));
    CHECK(principal_angles(a, c)[0] == doctest::Approx(M_PI / 4));
    M plane{{1, 0, 0}, {0, 1, 0}}, tilted{{1, 0, 0}, {0, 1, 1}};
    auto ang = principal_angles(plane, tilted);
    REQUIRE(ang.size() == 2);
    CHECK(ang[0] == doctest::Approx(0.0));
    CHECK(ang[1] == doctest::Approx(M_PI / 4));
}

TEST_CASE("translation flow matches the closed form") {
    auto fam = engel_translation_family();
    auto v = integrate_moser_flow(fam, kP0);
    CHECK_FALSE(v.truncated);
    CHECK(v.steps == 1000);
    CHECK(v.max_angle_D <= 1e-6);
    CHECK(v.max_angle_L <= 1e-8);
    for (std::size_t i = 0; i < v.t_grid.size(); ++i) {
        CHECK(v.trajectory[i][3] == doctest::Approx(0.5 - v.t_grid[i]).epsilon(1e-12));
        CHECK(v.trajectory[i][0] == 0.2);
    }
    CHECK(std::abs(v.trajectory.back()[3] + 0.5) <= 1e-8);
}

TEST_CASE("quadratic flow: closed form and fourth order convergence") {
    auto fam = engel_quadratic_family();
    auto v = integrate_moser_flow(fam, kP0);
    const double expected = (std::sqrt(3.0) - 1.0) / 2.0;  // w + w^2 = 1/2 at t = 1
    CHECK(std::abs(v.trajectory.back()[3] - expected) <= 1e-9);
    double previous = 0;
    for (double h : {0.2, 0.1, 0.05}) {
        FlowOptions o;
        o.h = h;
        const double err = integrate_moser_flow(fam, kP0, o).max_angle_D;
        if (previous > 0) CHECK(previous / err >= 8.0);
        previous = err;
    }
}

TEST_CASE("pipeline: composed angles and reduction to stage 2") {
    auto fam = pipeline_family();
    auto v = verify_stability_pipeline(fam, kP0);
    CHECK(v.stage == "pipeline");
    CHECK(v.max_angle_D <= 1e-4);
    CHECK(v.max_angle_E <= 1e-4);
    const std::vector<double> end{0.2, -1.1, 0.3, -0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(v.trajectory.back()[i] - end[i]) <= 1e-8);

    auto translation = engel_translation_family();
    auto composed = verify_stability_pipeline(translation, kP0);
    auto direct = integrate_moser_flow(translation, kP0);
    CHECK(trajectory_distance(composed, direct) <= 1e-10);
    CHECK(std::abs(composed.max_angle_D - direct.max_angle_D) <= 1e-10);
}

TEST_CASE("flows leaving the chart box are truncated; checkpoints re-solve exactly") {
    Chart spatial(std::vector<std::string>{"x", "y", "z", "w"});
    Chart ext = spatial.extended("t");
    auto var = [&](std::size_t i) { return PolyScalar::variable(ext, i); };
    auto d = [&](std::size_t i) { return ExtForm::differential(ext, i); };
    OneParamFamily fast(spatial, d(2) - var(1) * d(0), {d(1) - (var(3) + Rational(100) * var(4)) * d(0)});
    fast.set_fixed_L({VectorField::coordinate(spatial, 3)});
    auto v = integrate_moser_flow(fast, kP0);
    CHECK(v.truncated);
    CHECK(v.truncated_at < 1.0);
    CHECK_FALSE(v.truncation_reason.empty());

    FlowOptions o;
    o.checkpoints = 4;
    auto c = integrate_moser_flow(engel_quadratic_family(), kP0, o);
    CHECK(c.checkpoints_run == 4);
    CHECK(c.max_checkpoint_deviation <= 1e-9);
}

TEST_CASE("flows are deterministic") {
    auto fam = engel_quadratic_family();
    auto a = integrate_moser_flow(fam, kP0), b = integrate_moser_flow(fam, kP0);
    CHECK(a.trajectory == b.trajectory);
    CHECK(a.angles_D == b.angles_D);
}
