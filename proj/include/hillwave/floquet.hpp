#pragma once

#include <array>
#include <memory>
#include <vector>

#include "hillwave/potential.hpp"
#include "hillwave/scalar.hpp"

namespace hillwave {

/// Potential coefficients converted to the working scalar, ready for Taylor stepping.
template <typename Scalar>
struct HillProblem {
  std::vector<Scalar> cos_c;  // index l >= 1; entry 0 unused
  std::vector<Scalar> sin_c;  // index l >= 1; entry 0 unused
  Scalar mean = Scalar(0);    // constant term, shift included
  int harmonics = 0;
  double size_bound = 0.0;  // sum of coefficient magnitudes
};

/// Uses the coefficients of P together with `shift` (P.shift is ignored).
template <typename Scalar>
HillProblem<Scalar> make_problem(const PeriodicPotential& P, const Scalar& shift);

/// Uses P.shift.
template <typename Scalar>
HillProblem<Scalar> make_problem(const PeriodicPotential& P) {
  return make_problem<Scalar>(P, Scalar(P.shift));
}

/// Piecewise Taylor representation of theta and phi on [0, 1].
template <typename Scalar>
struct DenseSolution {
  int steps = 0;
  int order = 0;
  Scalar h;
  std::vector<Scalar> theta;  // steps * (order + 1), scaled so the local variable runs over [0, 1]
  std::vector<Scalar> phi;

  /// {theta, theta', phi, phi'} at x in [0, 1].
  std::array<Scalar, 4> operator()(const Scalar& x) const;
};

struct SolveOptions {
  int e_order = 0;     // number of E-derivatives to carry (0..3)
  bool grams = false;  // integrals of theta^2, theta*phi, phi^2 over [0, 1]
  bool dense = false;  // keep the Taylor pieces for evaluation inside [0, 1]
  double tol = 0.0;    // truncation target; 0 selects the scalar epsilon
};

/// Values at x = 1 of the fundamental solutions and their E-derivatives.
///   theta[d] = d^d theta(1, E) / dE^d, likewise theta_p, phi, phi_p.
template <typename Scalar>
struct PeriodMap {
  Scalar E;
  int e_order = 0;
  std::array<Scalar, 4> theta{}, theta_p{}, phi{}, phi_p{};
  Scalar gram_tt = Scalar(0), gram_tp = Scalar(0), gram_pp = Scalar(0);
  std::shared_ptr<const DenseSolution<Scalar>> dense;

  /// d-th E-derivative of the discriminant.
  Scalar disc(int d = 0) const { return (theta[d] + phi_p[d]) / 2; }
  /// phi(1) N^2 in the Weyl gauge; real for real E.
  Scalar phi_n2() const { return phi[0] * gram_tt + (phi_p[0] - theta[0]) * gram_tp - theta_p[0] * gram_pp; }
};

template <typename Scalar>
PeriodMap<Scalar> solve_period(const HillProblem<Scalar>& hp, const Scalar& E, const SolveOptions& opt = {});

/// Discriminant and its first three w-derivatives (E = w^2).
template <typename Scalar>
struct DiscJet {
  Scalar w, d, dw, dww, dwww;
};

template <typename Scalar>
DiscJet<Scalar> disc_jet(const PeriodMap<Scalar>& pm, const Scalar& w);

template <typename Scalar>
DiscJet<Scalar> disc_jet(const HillProblem<Scalar>& hp, const Scalar& w, int order) {
  SolveOptions opt;
  opt.e_order = order;
  return disc_jet(solve_period(hp, w * w, opt), w);
}

// ---------------------------------------------------------------------------
// double-precision front end

struct FundamentalPair {
  double w = 0.0;
  double theta_1 = 0.0, phi_1 = 0.0, theta_prime_1 = 0.0, phi_prime_1 = 0.0;
  std::vector<double> x;
  std::vector<std::array<double, 4>> trace;  // (theta, phi, theta', phi') at x
  double wronskian_defect = 0.0;             // |theta phi' - theta' phi - 1| at x = 1
};

/// Solves -u'' + P u = w^2 u on [0, 1] for the fundamental pair.
FundamentalPair fundamental_pair(const PeriodicPotential& P, double w, const std::vector<double>& x_grid = {},
                                 double tol = 1e-13);

struct DiscriminantValue {
  double w = 0.0;
  double d = 0.0;
  double d_prime = 0.0;
};

DiscriminantValue discriminant(const PeriodicPotential& P, double w);

struct PicardResult {
  double theta_partial = 0.0;
  double phi_partial = 0.0;
  double bound = 0.0;            // (1/|k|) exp((x/|k|)(|P|_inf + |k^2 - E|))
  double theta_remainder = 0.0;  // sum_{j >= n} (x M/|k|)^j / j!
  double phi_remainder = 0.0;    // theta_remainder / |k|
};

/// Partial sums of the iterated-kernel series
///   theta = cos(kx) + (1/k) int_0^x sin(k(x-s)) (P(s) - E + k^2) theta(s) ds
/// and the analogue for phi starting from sin(kx)/k.
PicardResult picard_series(const PeriodicPotential& P, double k, double E, int n_terms, double x);

}  // namespace hillwave
