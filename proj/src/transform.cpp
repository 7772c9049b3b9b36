#include "hillwave/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hillwave/errors.hpp"
#include "hillwave/parallel.hpp"
#include "hillwave/quadrature.hpp"

namespace hillwave {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2 * kPi);

void validate(const InputFunction& f) {
  if (!f.f) throw ValidationError("transform: input function missing");
  if (!(f.support_hi > f.support_lo) || !std::isfinite(f.support_lo) || !std::isfinite(f.support_hi))
    throw ValidationError("transform: input support [lo, hi] must be provided");
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

InputFunction gaussian_input(const BandStructure<double>& bs, const GaussianPacket& g) {
  if (!(g.sigma > 0.0)) throw ValidationError("gaussian: sigma must be positive");
  InputFunction in;
  const double s2 = g.sigma * g.sigma;
  auto f = [g, s2](double x) {
    const double X = x - g.y0;
    return std::exp(-X * X / (2 * s2)) * std::polar(1.0, g.k0 * x);
  };
  in.f = f;
  in.support_lo = g.y0 - 12 * g.sigma;
  in.support_hi = g.y0 + 12 * g.sigma;
  const PeriodicPotential P = bs.potential;
  in.h0f = [g, s2, f, P](double x) {
    const cplx d = cplx(-(x - g.y0) / s2, g.k0);
    const cplx f2 = (d * d - 1.0 / s2) * f(x);
    return -f2 + eval(P, x) * f(x);
  };
  in.fourier = [g, s2](double xi) {
    const double e = xi - g.k0;
    return g.sigma * std::sqrt(2 * kPi) * std::exp(-s2 * e * e / 2) * std::polar(1.0, -e * g.y0);
  };
  return in;
}

cplx free_gaussian_evolution(const GaussianPacket& g, double t, double x) {
  const double s2 = g.sigma * g.sigma;
  const cplx den(s2, -2 * t);
  const double B = x - g.y0 + 2 * t * g.k0;
  return g.sigma / std::sqrt(den) * std::exp(-B * B / (2.0 * den)) * std::polar(1.0, t * g.k0 * g.k0 + g.k0 * x);
}

SpectralCoefficients forward(const Chart& chart, const InputFunction& in, bool direct_negative) {
  validate(in);
  const int j0 = static_cast<int>(std::floor(in.support_lo));
  const int j1 = static_cast<int>(std::ceil(in.support_hi));
  const int cells = std::max(1, j1 - j0);
  const int Q = std::max(48, static_cast<int>(std::ceil(1.2 * chart.k_max())) + 40);
  const auto& g = quad::gauss_legendre(Q);
  std::vector<double> s(Q), w(Q);
  for (int q = 0; q < Q; ++q) {
    s[q] = 0.5 * (g.nodes[q] + 1.0);
    w[q] = 0.5 * g.weights[q];
  }
  // F[c][q] = f(s_q + j0 + c)
  std::vector<std::vector<cplx>> F(cells, std::vector<cplx>(Q));
  SpectralCoefficients out;
  for (int c = 0; c < cells; ++c)
    for (int q = 0; q < Q; ++q) {
      F[c][q] = in.f(s[q] + j0 + c);
      out.f_norm2 += w[q] * std::norm(F[c][q]);
    }

  const std::size_t N = chart.nodes.size();
  out.plus.assign(N, 0.0);
  out.minus.assign(N, 0.0);
  std::vector<double> mirror(N, 0.0);
  auto project = [&](const BlochState& st, bool conjugate) {
    const cplx rho = conjugate ? std::conj(st.rho) : st.rho;
    cplx sum = 0.0;
    for (int q = 0; q < Q; ++q) {
      // sum_c rho^{j0 + c} f(s_q + j0 + c) by Horner from the last cell
      cplx G = 0.0;
      for (int c = cells - 1; c >= 0; --c) G = G * rho + F[c][q];
      const cplx p = st(s[q]);
      sum += w[q] * (conjugate ? std::conj(p) : p) * G;
    }
    return sum * std::pow(rho, j0) * kInvSqrt2Pi;
  };
  parallel_for(N, [&](std::size_t i) {
    const auto& nd = chart.nodes[i];
    out.plus[i] = project(nd.bloch, false);
    out.minus[i] = project(nd.bloch, true);
    if (direct_negative) {
      const cplx direct = project(nd.bloch_minus, false);
      mirror[i] = std::abs(direct - out.minus[i]);
      out.minus[i] = direct;
    }
  });
  double tail = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    out.hat_norm2 += chart.nodes[i].weight * (std::norm(out.plus[i]) + std::norm(out.minus[i]));
    out.mirror_defect = std::max(out.mirror_defect, mirror[i]);
  }
  for (std::size_t id : chart.band_panels(chart.bands))
    for (int j = 0; j < Chart::order; ++j) {
      const std::size_t i = chart.panels[id].first + j;
      tail = std::max({tail, std::norm(out.plus[i]), std::norm(out.minus[i])});
    }
  out.tail_indicator = tail * kPi;
  out.parseval_defect = std::abs(out.f_norm2 - out.hat_norm2) / out.f_norm2;
  return out;
}

std::vector<cplx> inverse(const Chart& chart, const SpectralCoefficients& c, const std::vector<double>& x) {
  if (c.plus.size() != chart.nodes.size()) throw ValidationError("inverse: coefficients do not match the chart");
  std::vector<cplx> f(x.size());
  parallel_for(x.size(), [&](std::size_t q) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < chart.nodes.size(); ++i) {
      const cplx p = chart.nodes[i].bloch(x[q]);
      s += chart.nodes[i].weight * (std::conj(p) * c.plus[i] + p * c.minus[i]);
    }
    f[q] = s * kInvSqrt2Pi;
  });
  return f;
}

double diagonalization_check(const Chart& chart, const InputFunction& f) {
  validate(f);
  if (!f.h0f) throw ValidationError("diagonalization_check: input carries no H_0 f");
  const auto a = forward(chart, f);
  InputFunction h = f;
  h.f = f.h0f;
  const auto b = forward(chart, h);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < chart.nodes.size(); ++i) {
    const double E = chart.nodes[i].point.E, wt = chart.nodes[i].weight;
    num += wt * (std::norm(b.plus[i] - E * a.plus[i]) + std::norm(b.minus[i] - E * a.minus[i]));
    den += wt * (std::norm(b.plus[i]) + std::norm(b.minus[i]));
  }
  return std::sqrt(num / den);
}

EvolveResult evolve(const Chart& chart, const SpectralCoefficients& c, double t, const std::vector<double>& x) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("evolve: t must be nonnegative");
  if (c.plus.size() != chart.nodes.size()) throw ValidationError("evolve: coefficients do not match the chart");
  EvolveResult res;
  res.x = x;
  res.u.assign(x.size(), 0.0);
  std::vector<double> err(x.size(), 0.0);
  const std::size_t N = chart.nodes.size();
  parallel_for(x.size(), [&](std::size_t q) {
    const double fx = frac(x[q]);
    std::vector<cplx> ap(N), am(N);
    for (std::size_t i = 0; i < N; ++i) {
      const cplx m0 = chart.nodes[i].bloch.periodic(fx);
      ap[i] = std::conj(m0) * c.plus[i] * kInvSqrt2Pi;
      am[i] = m0 * c.minus[i] * kInvSqrt2Pi;
    }
    // conj psi_k(x) = e^{-ikx} conj m0(x), psi_k(x) = e^{ikx} m0(x)
    for (int n = 0; n <= chart.bands; ++n) {
      const auto r1 = oscillatory_band(chart, n, t, x[q], ap);
      const auto r2 = oscillatory_band(chart, n, t, -x[q], am);
      res.u[q] += r1.value + r2.value;
      err[q] += r1.error + r2.error;
    }
  });
  res.error_estimate = x.empty() ? 0.0 : *std::max_element(err.begin(), err.end());
  return res;
}

}  // namespace hillwave
