#pragma once

#include <span>
#include <string>
#include <vector>

#include "engel/family.hpp"

namespace engel {

struct FlowOptions {
    double h = 1e-3;                 // integrator step on [0, t_end]
    double t_end = 1.0;
    double fd_step = 1e-6;           // central differences for dX/dp
    double inner_fd_step = 1e-4;     // pipeline: gradient of omega(X1)
    double box = 10.0;               // chart box |x_i| <= box
    std::size_t checkpoints = 0;     // exact re-solves along the flow
};

struct FlowVerification {
    std::string stage;               // "moser" or "pipeline"
    std::string metric = "euclidean";
    double h = 0;
    std::size_t steps = 0;
    std::vector<double> t_grid;
    std::vector<std::vector<double>> trajectory;
    std::vector<std::vector<double>> jacobians;  // row-major n x n
    // Largest principal angle between the pushed and the actual subspace.
    std::vector<double> angles_D, angles_E, angles_L;
    double max_angle_D = 0, max_angle_E = 0, max_angle_L = 0;
    bool truncated = false;
    double truncated_at = 0;
    std::string truncation_reason;
    std::size_t checkpoints_run = 0;
    double max_checkpoint_deviation = 0;  // |X_numeric - X_exact|_inf
};

/// Integrates dp/dt = X_t(p) with RK4 together with the variational equation.
/// Throws HypothesisViolation("moser", ...) when the solve fails mid-flow.
FlowVerification integrate_moser_flow(const OneParamFamily& fam, std::span<const double> p0,
                                      const FlowOptions& options = {});

/// Flow of X1 + Z where X1 normalizes E_t and Z in L corrects D_t along it.
/// Errors carry the stage tag "even_contact" or "moser".
FlowVerification verify_stability_pipeline(const OneParamFamily& fam, std::span<const double> p0,
                                           const FlowOptions& options = {});

/// Principal angles (ascending) between column spans; columns need not be orthonormal.
std::vector<double> principal_angles(const std::vector<std::vector<double>>& a,
                                     const std::vector<std::vector<double>>& b);

/// sup-norm distance between two trajectories of equal length.
double trajectory_distance(const FlowVerification& a, const FlowVerification& b);

}  // namespace engel
