#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace hillwave::quad {

struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule with n points on [-1, 1] (cached per n, thread-safe).
const Rule& gauss_legendre(int n);

/// Chebyshev points of the first kind on [-1, 1], ascending, with Fejer weights.
const Rule& chebyshev_fejer(int n);

/// Chebyshev-Lobatto points cos(pi j/(n-1)) on [-1, 1], ascending.
Eigen::VectorXd chebyshev_lobatto(int n);

/// Barycentric weights for arbitrary distinct nodes.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// Interpolates values given at `nodes` (with barycentric weights `bw`) at x.
template <typename Vec>
auto barycentric(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bw, const Vec& values, double x) {
  using T = std::decay_t<decltype(values[0])>;
  T num = T(0);
  double den = 0.0;
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const double d = x - nodes[j];
    if (d == 0.0) return T(values[j]);
    const double c = bw[j] / d;
    num += c * values[j];
    den += c;
  }
  return T(num / den);
}

/// Matrix S with (S f)_i = int_{-1}^{x_i} p(s) ds, p the interpolant of f at `nodes`.
Eigen::MatrixXd cumulative_integration(const Eigen::VectorXd& nodes);

/// Adaptive Gauss-Kronrod integration on [a, b]; `error` receives the estimate.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double* error = nullptr);

/// Tanh-sinh integration, for integrands with endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol,
                          double* error = nullptr);

/// Integral over [a, inf).
double integrate_to_infinity(const std::function<double(double)>& f, double a, double tol,
                             double* error = nullptr);

}  // namespace hillwave::quad
