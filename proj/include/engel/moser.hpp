#pragma once

#include <vector>

#include "engel/distribution.hpp"
#include "engel/family.hpp"

namespace engel {

/// Exact pointwise data of the instantaneous system (theta_t, omega_t) at p.
struct InstantFrame {
    RationalPoint point;
    Rational t;
    RationalVector theta;                          // covector
    std::vector<RationalVector> omegas;            // covectors
    std::vector<RationalVector> D, E, L;           // bases
    std::vector<RationalVector> dtheta;            // bilinear matrix
    std::vector<std::vector<RationalVector>> domegas;
};

/// Throws HypothesisViolation when the forms are dependent at (t, p) or
/// D_t^2 is not ker theta_t there.
InstantFrame instant_frame(const OneParamFamily& fam, const Rational& t, const RationalPoint& p);

struct KernelDistributions {
    std::vector<RationalVector> D, L, W;
    std::vector<std::vector<RationalVector>> K, J;
};

/// K^i = ker d omega^i|_D, J^i = L ∩ (∩_{j≠i} K^j), W = ∩_j K^j.
KernelDistributions kernel_distributions(const OneParamFamily& fam, const Rational& t, const RationalPoint& p);

struct MoserSolveResult {
    RationalPoint point;
    Rational t;
    RationalVector X;
    bool residual_zero = false;
    bool membership_L = false;
};

/// Minimum-norm X in L_p with d omega^i(X, Y) = -(d/dt omega^i)(Y) for Y in D_p.
MoserSolveResult moser_field_at(const OneParamFamily& fam, const Rational& t, const RationalPoint& p);

/// X in V = (L^perp within E_t) with d theta_t(X, .)|_V = -(d/dt theta_t)|_V.
/// Only theta of the family is used.
RationalVector even_contact_moser_field_at(const OneParamFamily& fam, const Rational& t, const RationalPoint& p);

/// Value of a bilinear matrix on two vectors.
Rational bilinear(const std::vector<RationalVector>& b, std::span<const Rational> u, std::span<const Rational> v);

}  // namespace engel
