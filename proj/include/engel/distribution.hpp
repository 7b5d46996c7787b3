#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "engel/exterior.hpp"
#include "engel/linalg.hpp"

namespace engel {

/// A distribution given by a (possibly redundant) list of generating fields.
/// Ranks are always computed pointwise.
class Distribution {
public:
    Distribution(Chart chart, std::vector<VectorField> generators);

    const Chart& chart() const noexcept { return chart_; }
    const std::vector<VectorField>& generators() const noexcept { return generators_; }
    /// Generator values at p (one vector per generator, zeros included).
    std::vector<RationalVector> evaluate(const RationalPoint& p) const;

private:
    Chart chart_;
    std::vector<VectorField> generators_;
};

/// A distribution given dually by annihilating 1-forms.
class PfaffianSystem {
public:
    PfaffianSystem(Chart chart, std::vector<ExtForm> forms);

    const Chart& chart() const noexcept { return chart_; }
    const std::vector<ExtForm>& forms() const noexcept { return forms_; }
    std::vector<RationalVector> evaluate(const RationalPoint& p) const;
    /// Common kernel at p.
    std::vector<RationalVector> kernel_at(const RationalPoint& p) const;

private:
    Chart chart_;
    std::vector<ExtForm> forms_;
};

struct GrowthVector {
    RationalPoint point;
    std::vector<std::size_t> ranks;
};

std::size_t pointwise_rank(std::span<const VectorField> fields, const RationalPoint& p);
std::size_t pointwise_rank(const Distribution& d, const RationalPoint& p);
std::size_t pointwise_rank(const PfaffianSystem& s, const RationalPoint& p);

/// Generator lists of D^1, ..., D^depth with D^{i+1} = D^i + [D, D^i].
/// Zero brackets and repeated generators (up to sign) are dropped.
std::vector<Distribution> derived_flag_generators(const Distribution& d, int depth);

/// Pointwise growth vector; stops when the rank is stationary, reaches the
/// chart dimension, or after max_depth levels.
GrowthVector derived_flag(const Distribution& d, const RationalPoint& p, int max_depth);

/// Exact basis of the covectors vanishing on D_p. Never fails.
std::vector<RationalVector> annihilator(const Distribution& d, const RationalPoint& p);

struct SymbolicAnnihilator {
    std::optional<PfaffianSystem> system;
    /// Forms are valid where none of these polynomials vanish.
    std::vector<PolyScalar> vanishing_locus;
    std::string failure;
};

/// Polynomial annihilator basis by fraction-free elimination. Fails when the
/// result degenerates at one of `check_points` or the degree cap is hit.
SymbolicAnnihilator symbolic_annihilator(const Distribution& d, std::span<const RationalPoint> check_points = {});

/// Polynomial kernel fields of a Pfaffian system, same conventions.
struct SymbolicKernel {
    std::optional<Distribution> distribution;
    std::vector<PolyScalar> vanishing_locus;
    std::string failure;
};
SymbolicKernel symbolic_kernel(const PfaffianSystem& s, std::span<const RationalPoint> check_points = {});

struct CauchyResult {
    std::vector<RationalVector> basis;  // canonical basis of L_p
    RationalVector theta;               // annihilator of E_p used
    std::size_t rank() const noexcept { return basis.size(); }
};

/// Cauchy characteristic of a corank-1 distribution given by generators.
/// Brackets are precomputed once so repeated evaluation is cheap.
class CauchyCharacteristic {
public:
    explicit CauchyCharacteristic(Distribution e);
    /// Throws HypothesisViolation when E_p does not have corank 1.
    CauchyResult at(const RationalPoint& p) const;

private:
    Distribution e_;
    std::vector<std::vector<VectorField>> brackets_;  // upper triangle
};

CauchyResult cauchy_characteristic(const Distribution& e, const RationalPoint& p);
/// From a defining 1-form: {v in ker theta_p : d theta_p(v, w) = 0 for w in ker theta_p}.
CauchyResult cauchy_characteristic(const ExtForm& theta, const RationalPoint& p);
CauchyResult cauchy_characteristic(const PfaffianSystem& e, const RationalPoint& p);

enum class SubspaceRelation { equal, a_subset_b, b_subset_a, incomparable };
SubspaceRelation subspace_compare(std::span<const RationalVector> a, std::span<const RationalVector> b,
                                  std::size_t dim);
std::string to_string(SubspaceRelation r);

/// Point-sampling policy for probabilistic regularity certificates.
struct SampleOptions {
    std::size_t samples = 25;
    std::uint64_t seed = 1;
    int numerator_bound = 3;  // numerators in [-bound, bound]
    int max_denominator = 3;  // denominators in [1, max]
    bool parallel = false;
};

/// User points first, then `samples` pseudo-random rational points.
std::vector<RationalPoint> sample_points(const Chart& chart, const SampleOptions& options,
                                         std::span<const RationalPoint> user_points = {});

struct RegularityReport {
    bool regular = true;
    std::size_t majority_rank = 0;
    std::vector<std::size_t> ranks;  // per sample point
    std::vector<RationalPoint> singular_witnesses;
};

/// Majority rank over samples; deviating points are singular-locus witnesses.
RegularityReport regularity_from_ranks(std::span<const RationalPoint> points, std::vector<std::size_t> ranks);
RegularityReport check_regularity(const Distribution& d, std::span<const RationalPoint> points);

/// Runs fn(i) for i in [0, n), on worker threads when `parallel` is set.
/// Results must be written to slots owned by i so order never matters.
void parallel_for(std::size_t n, bool parallel, const std::function<void(std::size_t)>& fn);

/// Constant vector as a vector field (for printing witnesses).
VectorField constant_field(const Chart& chart, std::span<const Rational> v);
/// Constant covector as a 1-form.
ExtForm constant_form(const Chart& chart, std::span<const Rational> c);

}  // namespace engel
