#include "hillwave/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hillwave/errors.hpp"

namespace hillwave {

namespace {

constexpr double kEdgeThreshold = 1e-8;

SolveOptions full_options() {
  SolveOptions opt;
  opt.e_order = 1;
  opt.grams = true;
  opt.dense = true;
  return opt;
}

struct Evaluated {
  PeriodMap<double> pm;
  BandPoint<double> bp;
};

Evaluated evaluate(const BandStructure<double>& bs, double w, int band) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("w must be finite and nonnegative");
  Evaluated e{solve_period(bs.problem, w * w, full_options()), {}};
  e.bp = band_point(bs, disc_jet(e.pm, w), 1, band);
  return e;
}

bool weyl_ok(const PeriodMap<double>& pm) {
  const double num = std::abs(pm.phi_p[0] - pm.theta[0]) / 2;
  return std::abs(pm.phi[0]) >= kEdgeThreshold * (1.0 + num);
}

WeylPair weyl_from(const PeriodMap<double>& pm, const BandPoint<double>& bp) {
  if (!weyl_ok(pm)) {
    std::ostringstream os;
    os << "weyl_m: |phi(1, w)| = " << std::abs(pm.phi[0]) << " at w = " << bp.w
       << " is below the edge threshold; use the normalized Bloch state instead";
    throw DomainError(os.str());
  }
  const double re = (pm.phi_p[0] - pm.theta[0]) / (2 * pm.phi[0]);
  const double im = bp.sin_k / pm.phi[0];
  return {bp.w, bp.k, {re, im}, {re, -im}};
}

double trapezoid_norm(const BlochState& st, int G) {
  double s = 0.0;
  for (int j = 0; j < G; ++j) s += std::norm(st(static_cast<double>(j) / G));
  return s / G;
}

}  // namespace

WeylPair weyl_m(const BandStructure<double>& bs, double w, int band) {
  SolveOptions opt;
  opt.e_order = 1;
  const auto pm = solve_period(bs.problem, w * w, opt);
  const auto bp = band_point(bs, disc_jet(pm, w), 1, band);
  return weyl_from(pm, bp);
}

cplx BlochState::operator()(double x) const {
  const double j = std::floor(x);
  const auto v = (*dense)(x - j);
  cplx r = c_theta * v[0] + c_phi * v[2];
  if (j != 0.0) r *= std::pow(rho, static_cast<int>(j));
  return r;
}

cplx BlochState::derivative(double x) const {
  const double j = std::floor(x);
  const auto v = (*dense)(x - j);
  cplx r = c_theta * v[1] + c_phi * v[3];
  if (j != 0.0) r *= std::pow(rho, static_cast<int>(j));
  return r;
}

BlochState bloch_state(const PeriodMap<double>& pm, const BandPoint<double>& bp, bool negative_k) {
  if (!pm.dense) throw ValidationError("bloch_state: period map carries no dense solution");
  BlochState st;
  st.band = bp.band;
  st.w = bp.w;
  st.k = negative_k ? -bp.k : bp.k;
  st.E = bp.E;
  st.rho = {bp.D, negative_k ? -bp.sin_k : bp.sin_k};
  st.dense = pm.dense;
  // eigenvector of the monodromy matrix for e^{ik}; take the better conditioned row
  const cplx a1 = pm.phi[0], b1 = st.rho - pm.theta[0];
  const cplx a2 = st.rho - pm.phi_p[0], b2 = pm.theta_p[0];
  cplx a, b;
  if (std::norm(a1) + std::norm(b1) >= std::norm(a2) + std::norm(b2)) {
    a = a1;
    b = b1;
  } else {
    a = a2;
    b = b2;
  }
  if (std::norm(a) + std::norm(b) == 0.0) a = 1.0;  // monodromy = +-identity
  const double n2 = std::norm(a) * pm.gram_tt + 2 * std::real(std::conj(a) * b) * pm.gram_tp +
                    std::norm(b) * pm.gram_pp;
  if (!(n2 > 0.0)) throw NumericalError("bloch_state: nonpositive Bloch norm");
  cplx scale = 1.0 / std::sqrt(n2);
  if (std::abs(a) > 0.0) scale *= std::conj(a) / std::abs(a);
  st.c_theta = a * scale;
  st.c_phi = b * scale;
  st.c_theta = {std::max(0.0, st.c_theta.real()), 0.0};
  return st;
}

BlochState bloch_state(const BandStructure<double>& bs, double w, int band) {
  const auto e = evaluate(bs, w, band);
  return bloch_state(e.pm, e.bp);
}

BlochEvaluation bloch_pair(const BandStructure<double>& bs, double w, const std::vector<double>& x_grid, int band) {
  const auto e = evaluate(bs, w, band);
  BlochEvaluation ev;
  ev.w = w;
  ev.k = e.bp.k;
  ev.state = bloch_state(e.pm, e.bp);
  const auto& st = ev.state;
  ev.weyl_available = weyl_ok(e.pm);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double N = 1.0;
  if (ev.weyl_available) {
    const auto m = weyl_from(e.pm, e.bp);
    ev.m_plus = m.m_plus;
    ev.m_minus = m.m_minus;
    ev.n_squared = e.pm.phi_n2() / e.pm.phi[0];
    if (!(ev.n_squared > 0.0)) throw NumericalError("bloch_pair: N^2 is not positive on the band");
    N = std::sqrt(ev.n_squared);
  } else {
    ev.m_plus = ev.m_minus = {nan, nan};
    ev.n_squared = nan;
  }

  // trapezoid N^2 (|psi|^2 integrates to 1, so N^2 = N^2 * that)
  int G = 1024;
  double prev = trapezoid_norm(st, G);
  for (; G < (1 << 16); G *= 2) {
    const double next = trapezoid_norm(st, 2 * G);
    const bool done = std::abs(next - prev) <= 1e-10 * next;
    prev = next;
    if (done) {
      G *= 2;
      break;
    }
  }
  ev.quadrature_points = G;
  ev.n_squared_quadrature = prev * N * N;

  if (x_grid.empty()) {
    for (int j = 0; j <= 1024; ++j) ev.x.push_back(j / 1024.0);
  } else {
    ev.x = x_grid;
  }
  double xi_max = 0.0;
  for (double x : ev.x) {
    const cplx psi = st(x);
    const cplx p = psi * N;
    ev.bloch_plus.push_back(p);
    ev.bloch_minus.push_back(std::conj(p));
    const cplx m0 = std::polar(1.0, -ev.k * x) * psi;
    ev.m0_plus.push_back(m0);
    ev.m0_minus.push_back(std::conj(m0));
    xi_max = std::max(xi_max, std::abs(p));
  }

  const cplx f0 = st(0.0) * N, d0 = st.derivative(0.0) * N;
  const auto v1 = (*st.dense)(1.0);
  const cplx f1 = (st.c_theta * v1[0] + st.c_phi * v1[2]) * N;
  const cplx d1 = (st.c_theta * v1[1] + st.c_phi * v1[3]) * N;
  ev.quasi_defect = (std::abs(f1 - st.rho * f0) + std::abs(d1 - st.rho * d0)) / (std::abs(f0) + std::abs(d0));
  const cplx xi1 = std::polar(1.0, -ev.k) * f1;
  ev.period_defect = std::abs(xi1 - f0) / std::max(xi_max, std::abs(f0));
  return ev;
}

FourierCoefficients fourier_coeffs(const BlochEvaluation& ev, int L) {
  if (L < 0) throw ValidationError("fourier_coeffs: L must be nonnegative");
  int G = 64;
  while (G < std::max<int>(8 * L, static_cast<int>(ev.x.size()))) G *= 2;
  std::vector<cplx> samples(G);
  for (int j = 0; j < G; ++j) samples[j] = ev.state.periodic(static_cast<double>(j) / G);
  FourierCoefficients fc;
  fc.L = L;
  fc.plus.resize(2 * L + 1);
  fc.minus.resize(2 * L + 1);
  for (int l = -L; l <= L; ++l) {
    cplx s = 0.0;
    for (int j = 0; j < G; ++j) s += samples[j] * std::polar(1.0, -2 * std::numbers::pi * l * j / G);
    fc.plus[l + L] = s / static_cast<double>(G);
  }
  // m_-^0 = conj(m_+^0) on real bands
  for (int l = -L; l <= L; ++l) fc.minus[l + L] = std::conj(fc.plus[-l + L]);
  return fc;
}

IdentityReport identity_suite(const BandStructure<double>& bs, const std::vector<double>& w_samples) {
  IdentityReport rep;
  for (double w : w_samples) {
    SolveOptions opt = full_options();
    opt.e_order = 2;
    const auto pm = solve_period(bs.problem, w * w, opt);
    const auto jet = disc_jet(pm, w);
    const auto bp = band_point(bs, jet, 2);
    IdentityRow r;
    r.w = w;
    r.k = bp.k;
    r.band = bp.band;
    const double G = pm.phi_n2();
    r.edot_residual = std::abs(bp.Edot * G / (2 * bp.sin_k) - 1.0);
    r.dprime_literal = std::abs(jet.dw + 4 * w * G) / std::abs(jet.dw);
    r.dprime_corrected = std::abs(jet.dw + w * G) / std::abs(jet.dw);
    r.cos_residual = std::abs(std::cos(bp.k) - jet.d);

    // int m_+^0 m_-^0 from the Weyl-gauge Bloch solution sampled on a grid, normalized by the Gram N^2
    if (weyl_ok(pm)) {
      const auto m = weyl_from(pm, bp);
      const double n2 = G / pm.phi[0];
      const int M = 2048;
      double s = 0.0;
      for (int j = 0; j < M; ++j) {
        const auto v = (*pm.dense)(static_cast<double>(j) / M);
        s += std::norm(v[0] + m.m_plus * v[2]);
      }
      r.normalization_residual = std::abs(s / M / n2 - 1.0);
    } else {
      r.normalization_residual = std::numeric_limits<double>::quiet_NaN();
    }

    const double k = bp.k, k2 = k * k;
    r.theta2_scaled = std::abs(pm.gram_tt - 0.5 - std::sin(2 * k) / (4 * k)) * k2;
    r.phi2_scaled = std::abs(k2 * pm.gram_pp - 0.5 + std::sin(2 * k) / (4 * k)) * k2;
    r.thetaphi_scaled = std::abs(2 * k * pm.gram_tp - (1 - std::cos(2 * k)) / (2 * k)) * k2;
    rep.rows.push_back(r);

    auto& W = rep.worst;
    W.edot_residual = std::max(W.edot_residual, r.edot_residual);
    W.dprime_literal = std::max(W.dprime_literal, r.dprime_literal);
    W.dprime_corrected = std::max(W.dprime_corrected, r.dprime_corrected);
    W.cos_residual = std::max(W.cos_residual, r.cos_residual);
    if (!std::isnan(r.normalization_residual))
      W.normalization_residual = std::max(W.normalization_residual, r.normalization_residual);
    W.theta2_scaled = std::max(W.theta2_scaled, r.theta2_scaled);
    W.phi2_scaled = std::max(W.phi2_scaled, r.phi2_scaled);
    W.thetaphi_scaled = std::max(W.thetaphi_scaled, r.thetaphi_scaled);
  }
  return rep;
}

cplx product_kernel_factor(const BlochState& at_x, double x, const BlochState& at_y, double y) {
  if (at_x.w != at_y.w) throw ValidationError("product_kernel_factor: states at different w");
  return std::polar(1.0, at_x.k * (x - y)) * std::conj(at_x(x)) * at_y(y);
}

}  // namespace hillwave
