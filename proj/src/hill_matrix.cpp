#include "hillwave/hill_matrix.hpp"

#include <numbers>

#include "hillwave/errors.hpp"

namespace hillwave {

Eigen::MatrixXcd hill_matrix(const PeriodicPotential& P, double k, int M) {
  if (M < 1) throw ValidationError("hill_matrix: M must be positive");
  const int n = 2 * M + 1;
  const int L = P.max_harmonic();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double q = 2.0 * std::numbers::pi * (i - M) + k;
    H(i, i) = q * q + P.mean();
    for (int l = 1; l <= L && i + l < n; ++l) {
      H(i + l, i) = P.fourier(l);
      H(i, i + l) = P.fourier(-l);
    }
  }
  return H;
}

Eigen::VectorXd hill_eigenvalues(const PeriodicPotential& P, double k, int M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hill_matrix(P, k, M), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hill_eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

}  // namespace hillwave
