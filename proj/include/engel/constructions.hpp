#pragma once

#include <string>
#include <vector>

#include "engel/distribution.hpp"

namespace engel {

/// Affine chart of the Cartan prolongation of the standard contact structure
/// on R^(2n+1), normalized so the line has P_n-component 1.
/// Coordinates: x1..xn, y1..yn, z, a1..an, b1..b(n-1).
struct ProlongationChart {
    int n = 0;
    Chart chart;
    std::vector<VectorField> P;  // P_i = d_x_i + y_i d_z
    VectorField Z;
    Distribution L, D, E;
    ExtForm theta;
};

ProlongationChart cartan_prolongation(int n);

/// Normal-form Pfaffian system on (x1..x(l+1), y1..y(l+1), z, c1..ck, q1..qr), k = 2l+1.
struct NormalFormSystem {
    int l = 0, r = 0, k = 0;
    Chart chart;
    ExtForm Theta;
    std::vector<ExtForm> Omegas;
};

NormalFormSystem normal_form(int l, int r);

/// One of the two Engel Pfaffian pairs on (x, y, z, w).
struct EngelPair {
    std::string name;
    Chart chart;
    ExtForm theta;
    ExtForm omega;
};

/// dz - y dx, dy - w dx.
EngelPair engel_pair_standard();
/// dz - y dx, dx - w dy: the roles of dx and dy in omega are exchanged.
EngelPair engel_pair_swapped();

/// D = <d_w, d_x + y d_z + w d_y> on (x, y, z, w).
Distribution standard_engel();

struct Fixture {
    std::string name;
    std::string description;
    Distribution D;
    std::vector<std::string> expected_failures;  // names from kFlagConditions
    std::size_t expected_cauchy_rank = 0;
    int expected_corank_L_in_D = 0;
};

/// The three reference distributions on R^8, generators in their fixed order.
std::vector<Fixture> reference_fixtures();

}  // namespace engel
