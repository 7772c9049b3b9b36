#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "hillwave/quasimomentum.hpp"

namespace hillwave {

using cplx = std::complex<double>;

struct WeylPair {
  double w = 0.0, k = 0.0;
  cplx m_plus, m_minus;
};

/// Weyl functions at w on a band. Throws DomainError when phi(1, w) is too small
/// (an edge or a Dirichlet point); use bloch_state there.
WeylPair weyl_m(const BandStructure<double>& bs, double w, int band = -1);

/// Normalized Bloch solution psi = c_theta theta + c_phi phi with
///   psi(x + 1) = e^{ik} psi(x),  int_0^1 |psi|^2 = 1,  c_theta real and >= 0.
/// Off the edges psi = (theta + m_+ phi) / N. Works at band edges too.
struct BlochState {
  int band = 0;
  double w = 0.0, k = 0.0, E = 0.0;
  cplx rho;  // e^{ik}
  cplx c_theta, c_phi;
  std::shared_ptr<const DenseSolution<double>> dense;

  /// psi(x) for any real x.
  cplx operator()(double x) const;
  cplx derivative(double x) const;
  /// e^{-ikx} psi(x), period 1.
  cplx periodic(double x) const { return std::polar(1.0, -k * x) * (*this)(x); }
};

/// pm must carry grams and the dense solution. negative_k selects the e^{-ik} eigenvector,
/// i.e. the state at -k.
BlochState bloch_state(const PeriodMap<double>& pm, const BandPoint<double>& bp, bool negative_k = false);
BlochState bloch_state(const BandStructure<double>& bs, double w, int band = -1);

struct BlochEvaluation {
  double w = 0.0, k = 0.0;
  bool weyl_available = false;  // false near edges, where m_+- and N^2 are not formed
  cplx m_plus, m_minus;
  double n_squared = 0.0;             // N^2 from the Gram integrals (NaN on the edge path)
  double n_squared_quadrature = 0.0;  // trapezoid rule of |phi_+|^2 on the final grid
  int quadrature_points = 0;
  std::vector<double> x;
  // on the edge path bloch_plus holds psi itself
  std::vector<cplx> bloch_plus, bloch_minus, m0_plus, m0_minus;
  double quasi_defect = 0.0;   // |phi_+(1) - e^{ik} phi_+(0)| + |phi_+'(1) - e^{ik} phi_+'(0)|, relative
  double period_defect = 0.0;  // |xi_+(1) - xi_+(0)| / max |xi_+|
  BlochState state;
};

/// x_grid empty selects a uniform grid of 1025 points on [0, 1].
BlochEvaluation bloch_pair(const BandStructure<double>& bs, double w, const std::vector<double>& x_grid = {},
                           int band = -1);

struct FourierCoefficients {
  int L = 0;
  std::vector<cplx> plus, minus;  // index l + L
  cplx plus_at(int l) const { return plus[l + L]; }
  cplx minus_at(int l) const { return minus[l + L]; }
};

/// Trapezoid-rule coefficients of m_+-^0 for |l| <= L.
FourierCoefficients fourier_coeffs(const BlochEvaluation& ev, int L);

struct IdentityRow {
  double w = 0.0, k = 0.0;
  int band = 0;
  double edot_residual = 0.0;          // |Edot phi(1) N^2 / (2 sin k) - 1|
  double dprime_literal = 0.0;         // |D' + 4 w phi(1) N^2| / |D'|
  double dprime_corrected = 0.0;       // |D' + w phi(1) N^2| / |D'|
  double cos_residual = 0.0;           // |cos k - D|
  double normalization_residual = 0.0; // |int m_+^0 m_-^0 - 1|
  // k^2 times the Lemma-type large-k residuals of int theta^2, k^2 int phi^2, 2k int theta phi
  double theta2_scaled = 0.0, phi2_scaled = 0.0, thetaphi_scaled = 0.0;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  IdentityRow worst;  // componentwise maxima
};

IdentityReport identity_suite(const BandStructure<double>& bs, const std::vector<double>& w_samples);

/// m_-^0(x, k) m_+^0(y, k) = e^{ik(x - y)} conj(psi(x)) psi(y); both states at the same w.
cplx product_kernel_factor(const BlochState& at_x, double x, const BlochState& at_y, double y);

}  // namespace hillwave
