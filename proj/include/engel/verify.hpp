#pragma once

#include <optional>
#include <string>
#include <vector>

#include "engel/distribution.hpp"

namespace engel {

/// Pointwise evaluation of the flag L ⊂ D ⊂ E ⊂ D³ at one sample point.
struct FlagWitness {
    explicit FlagWitness(RationalPoint p) : point(std::move(p)) {}
    RationalPoint point;
    std::size_t rank_D = 0, rank_E = 0, rank_D3 = 0, rank_L = 0, rank_L_cap_D = 0;
    bool even_corank = false, E_corank1 = false, D3_full = false, L_in_D = false, L_corank1_in_D = false;
    std::vector<RationalVector> L_basis;
    /// Canonical basis vectors of L_p that are not in D_p.
    std::vector<RationalVector> L_outside_D;
};

struct FlagReport {
    std::size_t dim = 0;
    std::vector<std::size_t> growth;  // growth vector at the first sample point
    int corank_D = 0;
    int corank_E = 0;
    /// rank D - rank L. Equals the corank of L in D whenever L ⊂ D.
    int corank_L_in_D = 0;
    bool cond_even_corank = false;
    bool cond_E_corank1 = false;
    bool cond_D3_full = false;
    bool cond_L_in_D = false;
    bool cond_L_corank1_in_D = false;
    bool regular = true;
    std::vector<RationalPoint> singular_witnesses;
    std::vector<FlagWitness> witnesses;
    /// Conjunction of the five flags; empty when the sample is not regular.
    std::optional<bool> verdict;
    /// First failure of the E = D² corank-1 requirement that made L undefined.
    std::string note;
};

inline constexpr const char* kFlagConditions[] = {"even_corank", "E_corank1", "D3_full", "L_in_D",
                                                   "L_corank1_in_D"};

FlagReport check_generalized_engel(const Distribution& d, std::span<const RationalPoint> points,
                                   bool parallel = false);

struct PfaffianWitness {
    explicit PfaffianWitness(RationalPoint p) : point(std::move(p)) {}
    RationalPoint point;
    std::size_t eta_rank = 0;
    bool eta_independent = false;
    bool theta_nondegenerate = false;
};

struct PfaffianReport {
    int k = 0;
    int l = 0;
    bool eta_independent = false;
    bool omega_theta_vanish = false;   // symbolic
    bool theta_nondegenerate = false;
    bool theta_degenerate_next = false;  // symbolic
    /// Indices i with omega^i ^ theta ^ dtheta^(l+1) not identically zero.
    std::vector<std::size_t> omega_theta_failures;
    std::vector<PfaffianWitness> witnesses;
    bool verdict = false;
};

inline constexpr const char* kPfaffianConditions[] = {"eta_independent", "omega_theta_vanish",
                                                      "theta_nondegenerate", "theta_degenerate_next"};

/// Throws Error when k is even or the chart is too small for the wedge degrees.
PfaffianReport check_pfaffian_criteria(const ExtForm& theta, const std::vector<ExtForm>& omegas,
                                       std::span<const RationalPoint> points, bool parallel = false);

/// eta^i = omega^1 ^ ... ^ omega^k ^ theta ^ d omega^i.
std::vector<ExtForm> eta_forms(const ExtForm& theta, const std::vector<ExtForm>& omegas);

struct FormsToDistribution {
    std::optional<Distribution> symbolic;  // polynomial kernel fields when available
    std::string symbolic_failure;
    std::vector<std::vector<RationalVector>> pointwise;  // kernel basis per point
};

/// Throws HypothesisViolation when the forms are dependent at a sample point.
FormsToDistribution forms_to_distribution(const ExtForm& theta, const std::vector<ExtForm>& omegas,
                                          std::span<const RationalPoint> points);

struct PointCovectors {
    RationalVector theta;
    std::vector<RationalVector> omegas;
};

struct DistributionToForms {
    bool symbolic = false;  // false: only the per-point covectors are valid
    std::optional<ExtForm> theta;
    std::vector<ExtForm> omegas;
    std::vector<PointCovectors> pointwise;
    std::string note;
};

/// theta annihilates E = D², the omegas complete it to an annihilator of D.
/// Throws HypothesisViolation when D² does not have corank 1 at a sample point.
DistributionToForms distribution_to_forms(const Distribution& d, std::span<const RationalPoint> points);

}  // namespace engel
