#pragma once

#include <Eigen/Dense>

#include "hillwave/potential.hpp"

namespace hillwave {

/// Plane-wave matrix of -d^2/dx^2 + P on the fiber with quasimomentum k:
/// rows/columns m = -M..M, diagonal (2 pi m + k)^2, off-diagonal P^(m - m').
Eigen::MatrixXcd hill_matrix(const PeriodicPotential& P, double k, int M);

/// Ascending eigenvalues of hill_matrix(P, k, M).
Eigen::VectorXd hill_eigenvalues(const PeriodicPotential& P, double k, int M);

}  // namespace hillwave
