#include "hillwave/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "hillwave/errors.hpp"

namespace hillwave::quad {

namespace {

std::mutex cache_mutex;

Rule make_gauss_legendre(int n) {
  const auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative half
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  int i = 0;
  auto weight = [n](double x) {
    const double p = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * p * p);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it, ++i) {
    r.nodes[i] = -*it;
    r.weights[i] = weight(*it);
  }
  // odd n: zero appears once
  const std::size_t start = (n % 2 == 1) ? 1 : 0;
  for (std::size_t j = start; j < zeros.size(); ++j, ++i) {
    r.nodes[i] = zeros[j];
    r.weights[i] = weight(zeros[j]);
  }
  return r;
}

Rule make_fejer(int n) {
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double pi = std::numbers::pi;
  for (int k = 0; k < n; ++k) {
    const double th = pi * (2.0 * (n - 1 - k) + 1.0) / (2.0 * n);
    r.nodes[k] = std::cos(th);
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) s += std::cos(2.0 * j * th) / (4.0 * j * j - 1.0);
    r.weights[k] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: n must be positive");
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

const Rule& chebyshev_fejer(int n) {
  if (n < 2) throw ValidationError("chebyshev_fejer: n must be at least 2");
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_fejer(n)).first;
  return it->second;
}

Eigen::VectorXd chebyshev_lobatto(int n) {
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x[j] = -std::cos(std::numbers::pi * j / (n - 1));
  return x;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  // scale by 4/(b-a) to avoid overflow for large n
  const double scale = 4.0 / (nodes.maxCoeff() - nodes.minCoeff());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != j) w[j] /= scale * (nodes[j] - nodes[k]);
  return w;
}

Eigen::MatrixXd cumulative_integration(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  const Eigen::VectorXd bw = barycentric_weights(nodes);
  const Rule& g = gauss_legendre(static_cast<int>(n));
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double half = 0.5 * (nodes[i] + 1.0);
    if (half == 0.0) continue;
    for (Eigen::Index q = 0; q < g.nodes.size(); ++q) {
      const double s = -1.0 + half * (g.nodes[q] + 1.0);
      for (Eigen::Index j = 0; j < n; ++j) {
        unit.setZero();
        unit[j] = 1.0;
        S(i, j) += half * g.weights[q] * barycentric(nodes, bw, unit, s);
      }
    }
  }
  return S;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol, double* error) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 30, tol, &err);
  if (error) *error = err;
  return v;
}

double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol,
                          double* error) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  const double v = ts.integrate(f, a, b, tol, &err);
  if (error) *error = err;
  return v;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double tol, double* error) {
  boost::math::quadrature::exp_sinh<double> es;
  double err = 0.0;
  const double v = es.integrate([&](double s) { return f(a + s); }, 0.0,
                                std::numeric_limits<double>::infinity(), tol, &err);
  if (error) *error = err;
  return v;
}

}  // namespace hillwave::quad
