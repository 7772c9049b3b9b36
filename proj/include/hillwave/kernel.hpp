#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hillwave/chart.hpp"

namespace hillwave {

struct OscillatoryResult {
  cplx value;
  double error = 0.0;  // quadrature (halving) plus chart interpolation estimate
  int pieces = 0;
};

/// int over band n (k >= 0) of exp(i (t E(k) - a k)) A(k) dk, with A given at every chart node
/// (indexed like chart.nodes) and interpolated on each panel. Pieces carry at most 2 pi of
/// phase and 20 Gauss points; stationary points of the phase are piece boundaries.
OscillatoryResult oscillatory_band(const Chart& chart, int n, double t, double a, const std::vector<cplx>& amp,
                                   bool estimate_error = true);

struct KernelOptions {
  bool estimate_error = true;
};

struct BandContribution {
  int n = 0;  // n >= 0: k in [n pi, (n+1) pi]; n < 0: k in [-(|n|) pi, -(|n|-1) pi]
  cplx value;
  double error = 0.0;
};

struct KernelSample {
  double t = 0.0, x = 0.0, y = 0.0;
  cplx value;
  std::vector<BandContribution> per_band;
  cplx tail;                 // analytic contribution of |k| > k_max with E ~ k^2 + 2 Q_0, m^0 ~ 1
  double tail_bound = 0.0;   // bound on the error of that approximation
  double error_estimate = 0.0;
};

/// K^n(t, x, y), including the 1/(2 pi) of the spectral measure; negative n as in BandContribution.
BandContribution band_kernel(const Chart& chart, int n, double t, double x, double y, const KernelOptions& opt = {});

/// K(t, x, y) = sum over charted bands of both signs plus the high-energy tail.
KernelSample full_kernel(const BandStructure<double>& bs, const Chart& chart, double t, double x, double y,
                         const KernelOptions& opt = {});

/// x = x0 + v t, y fixed; v = E'(k) puts the stationary point at k.
struct DecaySample {
  double x0 = 0.0, y = 0.0, v = 0.0;
};

struct DecayReport {
  std::vector<double> t_grid;
  std::vector<DecaySample> samples;
  std::vector<double> sup_abs;      // per t
  std::vector<double> ratio;        // sup_abs / max(t^-1/2, t^-1/3)
  std::vector<std::size_t> argmax;  // sample attaining the sup
  double fitted_C = 0.0;
  double slope = 0.0;               // least-squares slope of log ratio against log t
};

/// Velocities at the located inflection points (and just below them), small edge velocities, and 0.
std::vector<DecaySample> default_decay_samples(const Chart& chart);

DecayReport decay_report(const BandStructure<double>& bs, const Chart& chart, const std::vector<double>& t_grid,
                         const std::vector<DecaySample>& samples, const KernelOptions& opt = {});

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Oscillatory-integral bound  C_m (c_m mu)^{-1/m} (min(|psi(a)|, |psi(b)|) + int |psi'|).
struct VdCBoundRequest {
  int m = 1;
  double c_m = 1.0;
  double mu = 1.0;
  double psi_endpoint_min = 0.0;
  double psi_derivative_l1 = 0.0;
};

double vdc_constant(int m);
double van_der_corput_bound(const VdCBoundRequest& req);

struct VdCInstance {
  int m = 1;
  double mu = 0.0;
  double integral = 0.0;  // |int_0^1 e^{i mu phi} psi|
  double bound = 0.0;
};

struct VdCReport {
  std::vector<VdCInstance> instances;
  int violations = 0;
  double worst_ratio = 0.0;  // max integral / bound
};

/// Random polynomial phases with |phi^(m)| >= c_m on [0, 1] (phi' increasing for m = 1) and
/// random trigonometric amplitudes; each instance is evaluated at every mu.
VdCReport vdc_verify(unsigned seed, int phases, const std::vector<double>& mu_list);

struct ReferenceResult {
  std::vector<cplx> values;
  int M = 0;               // plane waves per fiber: 2 M + 1
  int nk = 0;              // fibers
  double change = 0.0;     // last relative change when doubling M or nk
  bool converged = false;
};

/// e^{itH} g from plane-wave matrices on a uniform fiber grid of [-pi, pi); g is given through its
/// Fourier transform ghat(xi) = int g(x) e^{-i xi x} dx. P must already carry the spectral shift.
ReferenceResult reference_propagator(const PeriodicPotential& P, const std::function<cplx(double)>& ghat, double t,
                                     const std::vector<double>& x, double tol = 1e-6);

}  // namespace hillwave
