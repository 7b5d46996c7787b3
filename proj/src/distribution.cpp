#include "engel/distribution.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace engel {

Distribution::Distribution(Chart chart, std::vector<VectorField> generators)
    : chart_(std::move(chart)), generators_(std::move(generators)) {
    if (generators_.empty()) throw Error("a distribution needs at least one generator");
    for (const auto& g : generators_) require_same_chart(chart_, g.chart());
}

std::vector<RationalVector> Distribution::evaluate(const RationalPoint& p) const {
    require_same_chart(chart_, p.chart);
    std::vector<RationalVector> out;
    out.reserve(generators_.size());
    for (const auto& g : generators_) out.push_back(g.evaluate(p));
    return out;
}

PfaffianSystem::PfaffianSystem(Chart chart, std::vector<ExtForm> forms)
    : chart_(std::move(chart)), forms_(std::move(forms)) {
    if (forms_.empty()) throw Error("a Pfaffian system needs at least one form");
    for (const auto& f : forms_) {
        require_same_chart(chart_, f.chart());
        if (f.degree() != 1) throw Error("Pfaffian systems consist of 1-forms");
    }
}

std::vector<RationalVector> PfaffianSystem::evaluate(const RationalPoint& p) const {
    std::vector<RationalVector> out;
    out.reserve(forms_.size());
    for (const auto& f : forms_) out.push_back(evaluate_covector(f, p));
    return out;
}

std::vector<RationalVector> PfaffianSystem::kernel_at(const RationalPoint& p) const {
    return common_kernel(evaluate(p), chart_.dim());
}

std::size_t pointwise_rank(std::span<const VectorField> fields, const RationalPoint& p) {
    if (fields.empty()) throw Error("pointwise_rank needs at least one vector");
    std::vector<RationalVector> vals;
    for (const auto& f : fields) vals.push_back(f.evaluate(p));
    return span_rank(vals, p.chart.dim());
}

std::size_t pointwise_rank(const Distribution& d, const RationalPoint& p) {
    return span_rank(d.evaluate(p), d.chart().dim());
}

std::size_t pointwise_rank(const PfaffianSystem& s, const RationalPoint& p) {
    return span_rank(s.evaluate(p), s.chart().dim());
}

namespace {

bool contains_up_to_sign(const std::vector<VectorField>& list, const VectorField& v) {
    VectorField neg = -v;
    return std::any_of(list.begin(), list.end(), [&](const VectorField& g) { return g == v || g == neg; });
}

}  // namespace

std::vector<Distribution> derived_flag_generators(const Distribution& d, int depth) {
    if (depth < 1) throw Error("derived flag depth must be >= 1");
    std::vector<Distribution> levels{d};
    std::vector<VectorField> all = d.generators();
    std::vector<VectorField> fresh = d.generators();
    const auto& base = d.generators();
    for (int level = 2; level <= depth; ++level) {
        std::vector<VectorField> added;
        for (std::size_t a = 0; a < base.size(); ++a) {
            for (std::size_t b = 0; b < fresh.size(); ++b) {
                // At level 2 fresh == base, so the lower triangle repeats up to sign.
                if (level == 2 && b <= a) continue;
                VectorField br = lie_bracket(base[a], fresh[b]);
                if (br.is_zero() || contains_up_to_sign(all, br) || contains_up_to_sign(added, br)) continue;
                added.push_back(std::move(br));
            }
        }
        all.insert(all.end(), added.begin(), added.end());
        levels.emplace_back(d.chart(), all);
        fresh = std::move(added);
        if (fresh.empty()) {
            // Stationary symbolically: every further level is the same list.
            while (static_cast<int>(levels.size()) < depth) levels.emplace_back(d.chart(), all);
            break;
        }
    }
    return levels;
}

GrowthVector derived_flag(const Distribution& d, const RationalPoint& p, int max_depth) {
    if (max_depth < 1) throw Error("max_depth must be >= 1");
    require_same_chart(d.chart(), p.chart);
    GrowthVector out{p, {}};
    const std::size_t n = d.chart().dim();
    std::vector<VectorField> all = d.generators();
    std::vector<VectorField> fresh = d.generators();
    const auto& base = d.generators();
    out.ranks.push_back(pointwise_rank(d, p));
    for (int level = 2; level <= max_depth && out.ranks.back() < n; ++level) {
        std::vector<VectorField> added;
        for (std::size_t a = 0; a < base.size(); ++a)
            for (std::size_t b = 0; b < fresh.size(); ++b) {
                if (level == 2 && b <= a) continue;
                VectorField br = lie_bracket(base[a], fresh[b]);
                if (br.is_zero() || contains_up_to_sign(all, br) || contains_up_to_sign(added, br)) continue;
                added.push_back(std::move(br));
            }
        all.insert(all.end(), added.begin(), added.end());
        fresh = std::move(added);
        std::size_t q = pointwise_rank(all, p);
        if (q == out.ranks.back()) break;
        out.ranks.push_back(q);
    }
    return out;
}

std::vector<RationalVector> annihilator(const Distribution& d, const RationalPoint& p) {
    return common_kernel(d.evaluate(p), d.chart().dim());
}

namespace {

std::vector<std::vector<PolyScalar>> field_rows(const std::vector<VectorField>& fields) {
    std::vector<std::vector<PolyScalar>> rows;
    for (const auto& f : fields) rows.push_back(f.components());
    return rows;
}

}  // namespace

SymbolicAnnihilator symbolic_annihilator(const Distribution& d, std::span<const RationalPoint> check_points) {
    SymbolicAnnihilator out;
    const Chart& chart = d.chart();
    const std::size_t n = chart.dim();
    try {
        auto kernel = polynomial_kernel(field_rows(d.generators()), chart);
        out.vanishing_locus = kernel.pivots;
        if (kernel.basis.empty()) {
            out.failure = "distribution spans the tangent space; annihilator is zero";
            return out;
        }
        std::vector<ExtForm> forms;
        for (const auto& v : kernel.basis) {
            ExtForm f(chart, 1);
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t idx[] = {i};
                if (!v[i].is_zero()) f.add_term(idx, v[i]);
            }
            forms.push_back(std::move(f));
        }
        PfaffianSystem system(chart, std::move(forms));
        for (const auto& p : check_points) {
            if (pointwise_rank(system, p) != n - pointwise_rank(d, p)) {
                out.failure = "no polynomial annihilator basis found on this chart (degenerates at " +
                              p.to_string() + ")";
                return out;
            }
        }
        out.system = std::move(system);
    } catch (const DegreeOverflow& e) {
        out.failure = std::string("no polynomial annihilator basis found on this chart: ") + e.what();
    }
    return out;
}

SymbolicKernel symbolic_kernel(const PfaffianSystem& s, std::span<const RationalPoint> check_points) {
    SymbolicKernel out;
    const Chart& chart = s.chart();
    const std::size_t n = chart.dim();
    try {
        std::vector<std::vector<PolyScalar>> rows;
        for (const auto& f : s.forms()) rows.push_back(f.one_form_coefficients());
        auto kernel = polynomial_kernel(rows, chart);
        out.vanishing_locus = kernel.pivots;
        if (kernel.basis.empty()) {
            out.failure = "forms span the cotangent space; kernel is zero";
            return out;
        }
        std::vector<VectorField> fields;
        for (auto& v : kernel.basis) fields.emplace_back(chart, std::move(v));
        Distribution dist(chart, std::move(fields));
        for (const auto& p : check_points) {
            if (pointwise_rank(dist, p) != n - pointwise_rank(s, p)) {
                out.failure = "no polynomial kernel basis found on this chart (degenerates at " + p.to_string() + ")";
                return out;
            }
        }
        out.distribution = std::move(dist);
    } catch (const DegreeOverflow& e) {
        out.failure = std::string("no polynomial kernel basis found on this chart: ") + e.what();
    }
    return out;
}

// ------------------------------------------------------------------ Cauchy

CauchyCharacteristic::CauchyCharacteristic(Distribution e) : e_(std::move(e)) {
    const auto& g = e_.generators();
    brackets_.resize(g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b) brackets_[a].push_back(lie_bracket(g[a], g[b]));
}

CauchyResult CauchyCharacteristic::at(const RationalPoint& p) const {
    const std::size_t n = e_.chart().dim();
    auto values = e_.evaluate(p);
    auto theta = common_kernel(values, n);
    if (theta.size() != 1)
        throw HypothesisViolation("cauchy", "distribution has corank " + std::to_string(theta.size()) +
                                                " at " + p.to_string() + ", expected 1");
    const std::size_t m = values.size();
    // Row b, column a: theta([V_a, V_b]) = -d theta(V_a, V_b).
    RationalMatrix pairing(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            Rational v = dot(theta[0], brackets_[a][b - a - 1].evaluate(p));
            pairing(b, a) = v;
            pairing(a, b) = -v;
        }
    std::vector<RationalVector> images;
    for (const auto& c : nullspace(pairing)) {
        RationalVector v(n, Rational(0));
        for (std::size_t a = 0; a < m; ++a)
            if (c[a] != 0)
                for (std::size_t i = 0; i < n; ++i) v[i] += c[a] * values[a][i];
        images.push_back(std::move(v));
    }
    return CauchyResult{span_basis(images, n), theta[0]};
}

CauchyResult cauchy_characteristic(const Distribution& e, const RationalPoint& p) {
    return CauchyCharacteristic(e).at(p);
}

CauchyResult cauchy_characteristic(const ExtForm& theta, const RationalPoint& p) {
    if (theta.degree() != 1) throw Error("cauchy_characteristic needs a 1-form");
    const std::size_t n = theta.chart().dim();
    auto covector = evaluate_covector(theta, p);
    if (is_zero(covector)) throw HypothesisViolation("cauchy", "defining form vanishes at " + p.to_string());
    RationalVector covs[] = {covector};
    auto kernel = common_kernel(covs, n);
    auto dtheta = evaluate_bilinear(exterior_derivative(theta), p);
    const std::size_t m = kernel.size();
    RationalMatrix pairing(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        RationalVector bj(n, Rational(0));
        for (std::size_t r = 0; r < n; ++r) bj[r] = dot(dtheta[r], kernel[j]);
        for (std::size_t a = 0; a < m; ++a) pairing(j, a) = dot(kernel[a], bj);
    }
    std::vector<RationalVector> images;
    for (const auto& c : nullspace(pairing)) {
        RationalVector v(n, Rational(0));
        for (std::size_t a = 0; a < m; ++a)
            if (c[a] != 0)
                for (std::size_t i = 0; i < n; ++i) v[i] += c[a] * kernel[a][i];
        images.push_back(std::move(v));
    }
    return CauchyResult{span_basis(images, n), covector};
}

CauchyResult cauchy_characteristic(const PfaffianSystem& e, const RationalPoint& p) {
    if (e.forms().size() != 1)
        throw HypothesisViolation("cauchy", "expected a single defining form, got " +
                                                std::to_string(e.forms().size()));
    return cauchy_characteristic(e.forms().front(), p);
}

SubspaceRelation subspace_compare(std::span<const RationalVector> a, std::span<const RationalVector> b,
                                  std::size_t dim) {
    std::size_t ra = span_rank(a, dim), rb = span_rank(b, dim);
    std::vector<RationalVector> both(a.begin(), a.end());
    both.insert(both.end(), b.begin(), b.end());
    std::size_t rab = span_rank(both, dim);
    if (rab == ra && rab == rb) return SubspaceRelation::equal;
    if (rab == rb) return SubspaceRelation::a_subset_b;
    if (rab == ra) return SubspaceRelation::b_subset_a;
    return SubspaceRelation::incomparable;
}

std::string to_string(SubspaceRelation r) {
    switch (r) {
        case SubspaceRelation::equal: return "equal";
        case SubspaceRelation::a_subset_b: return "A_subset_B";
        case SubspaceRelation::b_subset_a: return "B_subset_A";
        case SubspaceRelation::incomparable: return "incomparable";
    }
    return "incomparable";
}

// ------------------------------------------------------------------ sampling

std::vector<RationalPoint> sample_points(const Chart& chart, const SampleOptions& options,
                                         std::span<const RationalPoint> user_points) {
    if (options.numerator_bound < 0 || options.max_denominator < 1) throw Error("invalid sample box");
    std::vector<RationalPoint> out(user_points.begin(), user_points.end());
    for (const auto& p : out) require_same_chart(chart, p.chart);
    // mt19937_64 output is fixed by the standard; the reductions below are ours,
    // so the sequence is identical on every platform.
    std::mt19937_64 rng(options.seed);
    const auto span = static_cast<std::uint64_t>(2 * options.numerator_bound + 1);
    const auto dens = static_cast<std::uint64_t>(options.max_denominator);
    for (std::size_t s = 0; s < options.samples; ++s) {
        RationalVector x(chart.dim());
        for (auto& q : x) {
            long num = static_cast<long>(rng() % span) - options.numerator_bound;
            long den = static_cast<long>(rng() % dens) + 1;
            q = Rational(num, den);
            q.canonicalize();
        }
        out.emplace_back(chart, std::move(x));
    }
    return out;
}

RegularityReport regularity_from_ranks(std::span<const RationalPoint> points, std::vector<std::size_t> ranks) {
    RegularityReport out;
    out.ranks = std::move(ranks);
    if (out.ranks.empty()) return out;
    std::map<std::size_t, std::size_t> counts;
    for (auto r : out.ranks) ++counts[r];
    // Ties resolve to the larger rank (the generic one).
    std::size_t best = 0, best_count = 0;
    for (auto [rank, count] : counts)
        if (count >= best_count) {
            best = rank;
            best_count = count;
        }
    out.majority_rank = best;
    for (std::size_t i = 0; i < out.ranks.size(); ++i)
        if (out.ranks[i] != best) out.singular_witnesses.push_back(points[i]);
    out.regular = out.singular_witnesses.empty();
    return out;
}

RegularityReport check_regularity(const Distribution& d, std::span<const RationalPoint> points) {
    std::vector<std::size_t> ranks(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) ranks[i] = pointwise_rank(d, points[i]);
    return regularity_from_ranks(points, std::move(ranks));
}

void parallel_for(std::size_t n, bool parallel, const std::function<void(std::size_t)>& fn) {
    unsigned workers = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

VectorField constant_field(const Chart& chart, std::span<const Rational> v) {
    std::vector<PolyScalar> comps;
    for (const auto& q : v) comps.push_back(PolyScalar::constant(chart, q));
    return VectorField(chart, std::move(comps));
}

ExtForm constant_form(const Chart& chart, std::span<const Rational> c) {
    ExtForm out(chart, 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::size_t idx[] = {i};
        if (c[i] != 0) out.add_term(idx, PolyScalar::constant(chart, c[i]));
    }
    return out;
}

}  // namespace engel
