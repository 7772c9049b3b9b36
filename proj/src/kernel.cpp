#include "hillwave/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "hillwave/errors.hpp"
#include "hillwave/hill_matrix.hpp"
#include "hillwave/parallel.hpp"
#include "hillwave/quadrature.hpp"

namespace hillwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kOrder = Chart::order;
constexpr int kSamples = 33;  // phase samples per panel
constexpr int kGauss = 20;

using Row = std::array<double, kOrder>;

const std::vector<Row>& sample_rows(const Chart& ch) {
  static const std::vector<Row> rows = [&] {
    std::vector<Row> r;
    for (int i = 0; i < kSamples; ++i) r.push_back(ch.interpolation_row(-1.0 + 2.0 * i / (kSamples - 1)));
    return r;
  }();
  return rows;
}

template <typename T>
T apply(const Row& row, const T* v) {
  T s = T(0);
  for (int j = 0; j < kOrder; ++j) s += row[j] * v[j];
  return s;
}

class PanelIntegrator {
 public:
  PanelIntegrator(const Chart& ch, const ChartPanel& p, double t, double a, const cplx* amp)
      : ch_(ch), p_(p), t_(t), a_(a), amp_(amp) {
    for (int j = 0; j < kOrder; ++j) {
      const auto& nd = ch.nodes[p.first + j];
      E_[j] = nd.point.E;
      Ed_[j] = nd.point.Edot;
    }
    mid_ = (p.k0 + p.k1) / 2;
    half_ = (p.k1 - p.k0) / 2;
  }

  double phase(const Row& row, double s) const { return t_ * apply(row, E_.data()) - a_ * (mid_ + half_ * s); }
  double dphase(const Row& row) const { return t_ * apply(row, Ed_.data()) - a_; }

  OscillatoryResult run(bool estimate_error) {
    const auto& rows = sample_rows(ch_);
    std::array<double, kSamples> ph{}, dph{}, ss{};
    for (int i = 0; i < kSamples; ++i) {
      ss[i] = -1.0 + 2.0 * i / (kSamples - 1);
      ph[i] = phase(rows[i], ss[i]);
      dph[i] = dphase(rows[i]);
    }
    std::vector<double> breaks{-1.0};
    for (int i = 0; i + 1 < kSamples; ++i) {
      if ((dph[i] < 0 && dph[i + 1] > 0) || (dph[i] > 0 && dph[i + 1] < 0)) {
        double lo = ss[i], hi = ss[i + 1];
        const bool rising = dph[i] < 0;
        for (int it = 0; it < 50 && hi - lo > 1e-15; ++it) {
          const double m = (lo + hi) / 2;
          const double d = dphase(ch_.interpolation_row(m));
          if ((d < 0) == rising) lo = m; else hi = m;
        }
        breaks.push_back((lo + hi) / 2);
      }
    }
    breaks.push_back(1.0);

    OscillatoryResult res;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double sa = breaks[b], sb = breaks[b + 1];
      if (sb <= sa) continue;
      // total variation of the phase across [sa, sb] from the samples
      double prev = phase(ch_.interpolation_row(sa), sa), V = 0.0;
      for (int i = 0; i < kSamples; ++i) {
        if (ss[i] <= sa || ss[i] >= sb) continue;
        V += std::abs(ph[i] - prev);
        prev = ph[i];
      }
      V += std::abs(phase(ch_.interpolation_row(sb), sb) - prev);
      const int m = std::max(1, static_cast<int>(std::ceil(V / (2 * kPi))));
      const cplx coarse = gauss(sa, sb, m);
      res.pieces += m;
      if (estimate_error) {
        const cplx fine = gauss(sa, sb, 2 * m);
        res.error += std::abs(fine - coarse);
        res.value += fine;
      } else {
        res.value += coarse;
      }
    }
    double amax = 0.0, emax = 0.0;
    for (int j = 0; j < kOrder; ++j) {
      amax = std::max(amax, std::abs(amp_[j]));
      emax = std::max(emax, E_[j]);
    }
    res.error += p_.error * (p_.k1 - p_.k0) * amax * (10.0 + t_ * (1.0 + emax));
    return res;
  }

 private:
  cplx gauss(double sa, double sb, int m) const {
    const auto& g = quad::gauss_legendre(kGauss);
    const double w = (sb - sa) / m;
    cplx sum = 0.0;
    for (int j = 0; j < m; ++j) {
      const double c = sa + w * (j + 0.5);
      for (int q = 0; q < kGauss; ++q) {
        const double s = c + 0.5 * w * g.nodes[q];
        const auto row = ch_.interpolation_row(s);
        const double ph = phase(row, s);
        sum += g.weights[q] * std::polar(1.0, ph) * apply(row, amp_);
      }
    }
    return sum * (0.5 * w * half_);
  }

  const Chart& ch_;
  const ChartPanel& p_;
  double t_, a_;
  const cplx* amp_;
  std::array<double, kOrder> E_{}, Ed_{};
  double mid_ = 0.0, half_ = 0.0;
};

double frac(double x) { return x - std::floor(x); }

// B(k) = e^{ik(fx - fy)} conj psi_k(fx) psi_k(fy) at every node
std::vector<cplx> bloch_products(const Chart& ch, double x, double y) {
  const double fx = frac(x), fy = frac(y);
  std::vector<cplx> B(ch.nodes.size());
  for (std::size_t i = 0; i < ch.nodes.size(); ++i) {
    const auto& st = ch.nodes[i].bloch;
    B[i] = std::conj(st.periodic(fx)) * st.periodic(fy);
  }
  return B;
}

// int_{s0}^inf e^{i t s^2} ds
cplx fresnel_tail(double t, double s0) {
  const cplx eipi4 = std::polar(1.0, kPi / 4);
  if (s0 < 0) return std::sqrt(kPi / t) * eipi4 - fresnel_tail(t, -s0);
  // rotated contour s = s0 + e^{i pi/4} r
  const double b = std::sqrt(2.0) * t * s0;
  const double R = (-b + std::sqrt(b * b + 4 * t * 60.0)) / (2 * t);
  const int pieces = std::max(32, static_cast<int>(std::ceil(b * R)));
  const auto& g = quad::gauss_legendre(kGauss);
  cplx sum = 0.0;
  const double w = R / pieces;
  for (int j = 0; j < pieces; ++j)
    for (int q = 0; q < kGauss; ++q) {
      const double r = w * (j + 0.5 + 0.5 * g.nodes[q]);
      sum += g.weights[q] * std::exp(-t * r * r - b * r) * std::polar(1.0, b * r);
    }
  return eipi4 * std::polar(1.0, t * s0 * s0) * sum * (0.5 * w);
}

}  // namespace

OscillatoryResult oscillatory_band(const Chart& chart, int n, double t, double a, const std::vector<cplx>& amp,
                                   bool estimate_error) {
  if (n < 0 || n > chart.bands) throw ValidationError("oscillatory_band: band index out of range");
  if (amp.size() != chart.nodes.size()) throw ValidationError("oscillatory_band: one amplitude per chart node");
  OscillatoryResult total;
  for (std::size_t id : chart.band_panels(n)) {
    const auto& p = chart.panels[id];
    const auto r = PanelIntegrator(chart, p, t, a, amp.data() + p.first).run(estimate_error);
    total.value += r.value;
    total.error += r.error;
    total.pieces += r.pieces;
  }
  return total;
}

namespace {

BandContribution band_kernel_from(const Chart& ch, int n, double t, double a, const std::vector<cplx>& B,
                                  const std::vector<cplx>& Bc, const KernelOptions& opt) {
  const bool positive = n >= 0;
  const int band = positive ? n : -n - 1;
  const auto r = oscillatory_band(ch, band, t, positive ? a : -a, positive ? B : Bc, opt.estimate_error);
  return {n, r.value / (2 * kPi), r.error / (2 * kPi)};
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("kernel: t must be positive and finite");
}

}  // namespace

BandContribution band_kernel(const Chart& chart, int n, double t, double x, double y, const KernelOptions& opt) {
  check_t(t);
  const auto B = bloch_products(chart, x, y);
  std::vector<cplx> Bc(B.size());
  std::transform(B.begin(), B.end(), Bc.begin(), [](cplx z) { return std::conj(z); });
  return band_kernel_from(chart, n, t, x - y, B, Bc, opt);
}

KernelSample full_kernel(const BandStructure<double>& bs, const Chart& chart, double t, double x, double y,
                         const KernelOptions& opt) {
  check_t(t);
  if (!std::isfinite(x) || !std::isfinite(y)) throw ValidationError("kernel: x and y must be finite");
  KernelSample ks;
  ks.t = t;
  ks.x = x;
  ks.y = y;
  const double a = x - y;
  const auto B = bloch_products(chart, x, y);
  std::vector<cplx> Bc(B.size());
  std::transform(B.begin(), B.end(), Bc.begin(), [](cplx z) { return std::conj(z); });

  for (int n = 0; n <= chart.bands; ++n)
    for (int side : {n, -n - 1}) {
      auto c = band_kernel_from(chart, side, t, a, B, Bc, opt);
      ks.value += c.value;
      ks.error_estimate += c.error;
      ks.per_band.push_back(c);
    }

  const double L = chart.k_max();
  const double Q0 = moment_q0(bs.potential);
  ks.tail = std::polar(1.0, 2 * t * Q0 - a * a / (4 * t)) *
            (fresnel_tail(t, L - a / (2 * t)) + fresnel_tail(t, L + a / (2 * t))) / (2 * kPi);
  ks.value += ks.tail;

  // deviations from the free model measured on the last charted band
  double CB = 0.0, CE = 0.0;
  for (std::size_t id : chart.band_panels(chart.bands)) {
    const auto& p = chart.panels[id];
    for (int j = 0; j < kOrder; ++j) {
      const auto& nd = chart.nodes[p.first + j];
      CB = std::max(CB, std::abs(B[p.first + j] - 1.0) * nd.k);
      CE = std::max(CE, std::abs(nd.point.E - nd.k * nd.k - 2 * Q0) * nd.k * nd.k);
    }
  }
  const double slope = 2 * t * L - std::abs(a);
  ks.tail_bound = slope > 0 ? 2.0 / (2 * kPi) * 3.0 * (CB / L + std::min(2.0, t * CE / (L * L))) / slope
                            : std::numeric_limits<double>::infinity();
  return ks;
}

std::vector<DecaySample> default_decay_samples(const Chart& chart) {
  std::vector<DecaySample> out;
  std::vector<double> v{0.0};
  bool any = false;
  for (int n = 0; n <= chart.bands; ++n) {
    const double kn = chart.inflection_k[n];
    if (std::isnan(kn)) continue;
    any = true;
    const double e = chart.Edot(kn);
    v.push_back(e);
    v.push_back(0.97 * e);
  }
  if (any) {
    for (int n = 1; n <= std::min(chart.bands, 3); ++n) v.push_back(chart.Edot(n * kPi - 0.05));
  } else {
    v.push_back(1.0);
    v.push_back(4.0);
  }
  for (double y : {0.0, 0.37})
    for (double vv : v) out.push_back({y, y, vv});
  out.push_back({0.5, 0.0, 0.0});
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("log_log_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayReport decay_report(const BandStructure<double>& bs, const Chart& chart, const std::vector<double>& t_grid,
                         const std::vector<DecaySample>& samples, const KernelOptions& opt) {
  if (t_grid.empty() || samples.empty()) throw ValidationError("decay_report: empty t grid or sample set");
  for (double t : t_grid) check_t(t);
  DecayReport rep;
  rep.t_grid = t_grid;
  rep.samples = samples;
  const std::size_t S = samples.size();
  std::vector<double> mag(t_grid.size() * S);
  parallel_for(mag.size(), [&](std::size_t idx) {
    const double t = t_grid[idx / S];
    const auto& s = samples[idx % S];
    mag[idx] = std::abs(full_kernel(bs, chart, t, s.x0 + s.v * t, s.y, opt).value);
  });
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto first = mag.begin() + static_cast<std::ptrdiff_t>(i * S);
    const auto it = std::max_element(first, first + static_cast<std::ptrdiff_t>(S));
    const double t = t_grid[i];
    rep.sup_abs.push_back(*it);
    rep.argmax.push_back(static_cast<std::size_t>(it - first));
    rep.ratio.push_back(*it / std::max(std::pow(t, -0.5), std::pow(t, -1.0 / 3.0)));
    rep.fitted_C = std::max(rep.fitted_C, rep.ratio.back());
  }
  rep.slope = t_grid.size() >= 2 ? log_log_slope(t_grid, rep.ratio) : 0.0;
  return rep;
}

double vdc_constant(int m) {
  if (m < 1) throw ValidationError("van der Corput: m must be at least 1");
  return 5.0 * std::pow(2.0, m - 1) - 2.0;
}

double van_der_corput_bound(const VdCBoundRequest& req) {
  const double Cm = vdc_constant(req.m);
  if (!(req.c_m > 0.0) || !(req.mu > 0.0)) throw ValidationError("van der Corput: c_m and mu must be positive");
  if (req.psi_endpoint_min < 0.0 || req.psi_derivative_l1 < 0.0)
    throw ValidationError("van der Corput: amplitude data must be nonnegative");
  return Cm * std::pow(req.c_m * req.mu, -1.0 / req.m) * (req.psi_endpoint_min + req.psi_derivative_l1);
}

VdCReport vdc_verify(unsigned seed, int phases, const std::vector<double>& mu_list) {
  if (phases < 1 || mu_list.empty()) throw ValidationError("vdc_verify: need phases and mu values");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto unif = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
  VdCReport rep;
  const auto& g = quad::gauss_legendre(kGauss);
  for (int i = 0; i < phases; ++i) {
    const int m = 1 + i % 3;
    const double c = unif(0.5, 2.0), beta = unif(0.0, 3.0);
    const double a1 = unif(-2.0, 2.0), a2 = unif(-2.0, 2.0);
    const double sign = U(rng) < 0.5 ? -1.0 : 1.0;
    // phi^(m) = c + beta x >= c on [0, 1]
    auto dphi = [&](double x) {
      switch (m) {
        case 1: return c + beta * x;
        case 2: return c * x + beta * x * x / 2 + a1;
        default: return c * x * x / 2 + beta * x * x * x / 6 + a2 * x + a1;
      }
    };
    auto phi = [&](double x) {
      switch (m) {
        case 1: return c * x + beta * x * x / 2;
        case 2: return c * x * x / 2 + beta * x * x * x / 6 + a1 * x;
        default: return c * x * x * x / 6 + beta * x * x * x * x / 24 + a2 * x * x / 2 + a1 * x;
      }
    };
    std::array<double, 3> A{}, w{}, th{};
    for (int j = 0; j < 3; ++j) {
      A[j] = unif(-1.0, 1.0);
      w[j] = unif(0.0, 6.0);
      th[j] = unif(0.0, 2 * kPi);
    }
    auto psi = [&](double x) {
      double s = 0;
      for (int j = 0; j < 3; ++j) s += A[j] * std::cos(w[j] * x + th[j]);
      return s;
    };
    auto dpsi = [&](double x) {
      double s = 0;
      for (int j = 0; j < 3; ++j) s -= A[j] * w[j] * std::sin(w[j] * x + th[j]);
      return s;
    };
    // int |psi'| is the total variation: sum of |psi(b) - psi(a)| over the monotone pieces
    double l1 = 0.0, prev = 0.0;
    {
      constexpr int kGrid = 400;
      double xa = 0.0, da = dpsi(0.0);
      for (int q = 1; q <= kGrid; ++q) {
        const double xb = static_cast<double>(q) / kGrid, db = dpsi(xb);
        if (da * db < 0.0) {
          double lo = xa, hi = xb;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (dpsi(lo) * dpsi(mid) <= 0.0 ? hi : lo) = mid;
          }
          const double z = 0.5 * (lo + hi);
          l1 += std::abs(psi(z) - psi(prev));
          prev = z;
        }
        xa = xb;
        da = db;
      }
      l1 += std::abs(psi(1.0) - psi(prev));
    }
    double dmax = 0.0;
    for (int q = 0; q <= 200; ++q) dmax = std::max(dmax, std::abs(dphi(q / 200.0)));

    for (double mu : mu_list) {
      const int pieces = std::max(8, static_cast<int>(std::ceil(mu * dmax / kPi)));
      cplx sum = 0.0;
      const double h = 1.0 / pieces;
      for (int j = 0; j < pieces; ++j)
        for (int q = 0; q < kGauss; ++q) {
          const double x = h * (j + 0.5 + 0.5 * g.nodes[q]);
          sum += g.weights[q] * std::polar(1.0, sign * mu * phi(x)) * psi(x);
        }
      VdCInstance inst;
      inst.m = m;
      inst.mu = mu;
      inst.integral = std::abs(sum * (0.5 * h));
      inst.bound = van_der_corput_bound({m, c, mu, std::min(std::abs(psi(0.0)), std::abs(psi(1.0))), l1});
      if (inst.integral > inst.bound) ++rep.violations;
      if (inst.bound > 0) rep.worst_ratio = std::max(rep.worst_ratio, inst.integral / inst.bound);
      rep.instances.push_back(inst);
    }
  }
  return rep;
}

namespace {

std::vector<cplx> fiber_synthesis(const PeriodicPotential& P, const std::function<cplx(double)>& ghat, double t,
                                  const std::vector<double>& x, int M, int nk) {
  std::vector<cplx> u(x.size(), 0.0);
  const int dim = 2 * M + 1;
  for (int j = 0; j < nk; ++j) {
    const double k = -kPi + 2 * kPi * j / nk;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hill_matrix(P, k, M));
    Eigen::VectorXcd c(dim);
    for (int i = 0; i < dim; ++i) c[i] = ghat(k + 2 * kPi * (i - M));
    Eigen::VectorXcd d = es.eigenvectors().adjoint() * c;
    for (int i = 0; i < dim; ++i) d[i] *= std::polar(1.0, t * es.eigenvalues()[i]);
    const Eigen::VectorXcd v = es.eigenvectors() * d;
    for (std::size_t q = 0; q < x.size(); ++q) {
      cplx s = 0.0;
      const cplx step = std::polar(1.0, 2 * kPi * x[q]);
      cplx e = std::polar(1.0, (k - 2 * kPi * M) * x[q]);
      for (int i = 0; i < dim; ++i) {
        s += v[i] * e;
        e *= step;
      }
      u[q] += s;
    }
  }
  for (auto& z : u) z /= static_cast<double>(nk);
  return u;
}

double relative_change(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0, m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    m = std::max(m, std::abs(b[i]));
  }
  return m > 0 ? d / m : d;
}

}  // namespace

ReferenceResult reference_propagator(const PeriodicPotential& P, const std::function<cplx(double)>& ghat, double t,
                                     const std::vector<double>& x, double tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("reference_propagator: t must be nonnegative");
  if (x.empty()) throw ValidationError("reference_propagator: empty x grid");
  if (!(tol > 0.0)) throw ValidationError("reference_propagator: tol must be positive");
  ReferenceResult res;
  int M = 16, nk = 64;
  auto u = fiber_synthesis(P, ghat, t, x, M, nk);
  for (int iter = 0; iter < 6; ++iter) {
    const auto uM = fiber_synthesis(P, ghat, t, x, 2 * M, nk);
    const auto uK = fiber_synthesis(P, ghat, t, x, M, 2 * nk);
    const double cM = relative_change(uM, u), cK = relative_change(uK, u);
    res.change = std::max(cM, cK);
    if (res.change < tol) {
      res.converged = true;
      break;
    }
    if (cM >= tol) M *= 2;
    if (cK >= tol) nk *= 2;
    u = fiber_synthesis(P, ghat, t, x, M, nk);
  }
  res.values = u;
  res.M = M;
  res.nk = nk;
  return res;
}

}  // namespace hillwave
