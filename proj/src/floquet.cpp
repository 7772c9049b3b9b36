#include "hillwave/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hillwave/errors.hpp"
#include "hillwave/quadrature.hpp"

namespace hillwave {

template <typename Scalar>
HillProblem<Scalar> make_problem(const PeriodicPotential& P, const Scalar& shift) {
  HillProblem<Scalar> hp;
  hp.harmonics = P.max_harmonic();
  hp.cos_c.assign(hp.harmonics + 1, Scalar(0));
  hp.sin_c.assign(hp.harmonics + 1, Scalar(0));
  for (int l = 1; l <= hp.harmonics; ++l) {
    if (static_cast<std::size_t>(l) < P.cosine.size()) hp.cos_c[l] = Scalar(P.cosine[l]);
    if (static_cast<std::size_t>(l - 1) < P.sine.size()) hp.sin_c[l] = Scalar(P.sine[l - 1]);
  }
  hp.mean = Scalar(P.cosine.empty() ? 0.0 : P.cosine[0]) + shift;
  hp.size_bound = std::abs(to_double(hp.mean));
  for (int l = 1; l <= hp.harmonics; ++l)
    hp.size_bound += std::abs(to_double(hp.cos_c[l])) + std::abs(to_double(hp.sin_c[l]));
  return hp;
}

template <typename Scalar>
std::array<Scalar, 4> DenseSolution<Scalar>::operator()(const Scalar& x) const {
  const double xd = to_double(x);
  int i = static_cast<int>(std::floor(xd * steps));
  i = std::clamp(i, 0, steps - 1);
  const Scalar tau = (x - h * i) / h;
  const std::size_t off = static_cast<std::size_t>(i) * (order + 1);
  Scalar t = Scalar(0), tp = Scalar(0), p = Scalar(0), pp = Scalar(0);
  for (int j = order; j >= 0; --j) {
    tp = tp * tau + t;
    t = t * tau + theta[off + j];
    pp = pp * tau + p;
    p = p * tau + phi[off + j];
  }
  return {t, tp / h, p, pp / h};
}

namespace {

template <typename Scalar>
int digits10() {
  return std::numeric_limits<Scalar>::digits10;
}

}  // namespace

template <typename Scalar>
PeriodMap<Scalar> solve_period(const HillProblem<Scalar>& hp, const Scalar& E, const SolveOptions& opt) {
  using std::cos;
  using std::sin;
  if (opt.e_order < 0 || opt.e_order > 3) throw ValidationError("solve_period: e_order must be in 0..3");
  const int nd = opt.e_order + 1;

  // step size and Taylor order from a crude bound on the local frequency
  const double omega = std::sqrt(std::abs(to_double(E)) + hp.size_bound) +
                       2.0 * std::numbers::pi * hp.harmonics + 1.0;
  const bool high = digits10<Scalar>() > 20;
  const double target = high ? 6.0 : 3.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(omega / target)));
  const double oh = omega / steps;
  const double eps = opt.tol > 0.0 ? opt.tol : to_double(epsilon<Scalar>());
  int N = 4;
  {
    double term = oh * oh * oh * oh / 24.0;
    while (N < 8 || term > eps * 1e-3) {
      ++N;
      term *= oh / N;
      if (N > 400) throw NumericalError("solve_period: Taylor order exceeded limit");
    }
  }

  const Scalar h = Scalar(1) / steps;
  const Scalar two_pi = 2 * pi<Scalar>();

  // val[f][d], der[f][d]: f = 0 theta, f = 1 phi; d = normalized E-derivative order
  std::vector<Scalar> val(2 * nd, Scalar(0)), der(2 * nd, Scalar(0));
  val[0] = Scalar(1);   // theta(0) = 1
  der[nd] = Scalar(1);  // phi'(0) = 1

  std::vector<Scalar> Pc(N + 1), C(static_cast<std::size_t>(2 * nd) * (N + 1));
  auto dense = opt.dense ? std::make_shared<DenseSolution<Scalar>>() : nullptr;
  if (dense) {
    dense->steps = steps;
    dense->order = N;
    dense->h = h;
    dense->theta.resize(static_cast<std::size_t>(steps) * (N + 1));
    dense->phi.resize(static_cast<std::size_t>(steps) * (N + 1));
  }
  Scalar g_tt = Scalar(0), g_tp = Scalar(0), g_pp = Scalar(0);
  const Scalar h2 = h * h;

  for (int s = 0; s < steps; ++s) {
    const Scalar x0 = h * s;
    // scaled Taylor coefficients of P about x0
    std::fill(Pc.begin(), Pc.end(), Scalar(0));
    Pc[0] = hp.mean;
    for (int l = 1; l <= hp.harmonics; ++l) {
      if (hp.cos_c[l] == 0 && hp.sin_c[l] == 0) continue;
      const Scalar arg = two_pi * l * x0;
      const Scalar c = cos(arg), sn = sin(arg);
      const Scalar wh = two_pi * l * h;
      Scalar f = Scalar(1);
      for (int i = 0; i <= N; ++i) {
        // d^i/dy^i cos(y) = cos(y + i pi/2), likewise sin
        Scalar tc, ts;
        switch (i % 4) {
          case 0: tc = c; ts = sn; break;
          case 1: tc = -sn; ts = c; break;
          case 2: tc = -c; ts = -sn; break;
          default: tc = sn; ts = -c; break;
        }
        Pc[i] += f * (hp.cos_c[l] * tc + hp.sin_c[l] * ts);
        f = f * wh / (i + 1);
      }
    }
    for (int f = 0; f < 2; ++f) {
      for (int d = 0; d < nd; ++d) {
        Scalar* c = &C[static_cast<std::size_t>(f * nd + d) * (N + 1)];
        const Scalar* prev = d > 0 ? &C[static_cast<std::size_t>(f * nd + d - 1) * (N + 1)] : nullptr;
        c[0] = val[f * nd + d];
        c[1] = der[f * nd + d] * h;
        for (int j = 0; j + 2 <= N; ++j) {
          Scalar acc = -E * c[j];
          for (int i = 0; i <= j; ++i) acc += Pc[i] * c[j - i];
          if (prev) acc -= prev[j];
          c[j + 2] = acc * h2 / ((j + 1) * (j + 2));
        }
        Scalar v = Scalar(0), dv = Scalar(0);
        for (int j = N; j >= 1; --j) {
          v += c[j];
          dv += j * c[j];
        }
        v += c[0];
        val[f * nd + d] = v;
        der[f * nd + d] = dv / h;
      }
    }
    const Scalar* ct = &C[0];
    const Scalar* cp = &C[static_cast<std::size_t>(nd) * (N + 1)];
    if (dense) {
      std::copy(ct, ct + N + 1, dense->theta.begin() + static_cast<std::ptrdiff_t>(s) * (N + 1));
      std::copy(cp, cp + N + 1, dense->phi.begin() + static_cast<std::ptrdiff_t>(s) * (N + 1));
    }
    if (opt.grams) {
      // int_0^1 A(tau) B(tau) dtau = sum_{i,j} A_i B_j / (i + j + 1)
      Scalar tt = Scalar(0), tp = Scalar(0), pp = Scalar(0);
      for (int m = 0; m <= 2 * N; ++m) {
        Scalar a = Scalar(0), b = Scalar(0), e = Scalar(0);
        const int lo = std::max(0, m - N), hi = std::min(m, N);
        for (int i = lo; i <= hi; ++i) {
          a += ct[i] * ct[m - i];
          b += ct[i] * cp[m - i];
          e += cp[i] * cp[m - i];
        }
        tt += a / (m + 1);
        tp += b / (m + 1);
        pp += e / (m + 1);
      }
      g_tt += tt * h;
      g_tp += tp * h;
      g_pp += pp * h;
    }
  }

  PeriodMap<Scalar> pm;
  pm.E = E;
  pm.e_order = opt.e_order;
  Scalar fact = Scalar(1);
  for (int d = 0; d < nd; ++d) {
    if (d > 0) fact *= d;
    pm.theta[d] = val[d] * fact;
    pm.theta_p[d] = der[d] * fact;
    pm.phi[d] = val[nd + d] * fact;
    pm.phi_p[d] = der[nd + d] * fact;
  }
  pm.gram_tt = g_tt;
  pm.gram_tp = g_tp;
  pm.gram_pp = g_pp;
  pm.dense = dense;
  return pm;
}

template <typename Scalar>
DiscJet<Scalar> disc_jet(const PeriodMap<Scalar>& pm, const Scalar& w) {
  DiscJet<Scalar> j{w, pm.disc(0), Scalar(0), Scalar(0), Scalar(0)};
  const Scalar d1 = pm.e_order >= 1 ? pm.disc(1) : Scalar(0);
  const Scalar d2 = pm.e_order >= 2 ? pm.disc(2) : Scalar(0);
  const Scalar d3 = pm.e_order >= 3 ? pm.disc(3) : Scalar(0);
  j.dw = 2 * w * d1;
  j.dww = 2 * d1 + 4 * w * w * d2;
  j.dwww = 12 * w * d2 + 8 * w * w * w * d3;
  return j;
}

template struct DenseSolution<double>;
template struct DenseSolution<HighPrecision>;
template HillProblem<double> make_problem<double>(const PeriodicPotential&, const double&);
template HillProblem<HighPrecision> make_problem<HighPrecision>(const PeriodicPotential&, const HighPrecision&);
template PeriodMap<double> solve_period<double>(const HillProblem<double>&, const double&, const SolveOptions&);
template PeriodMap<HighPrecision> solve_period<HighPrecision>(const HillProblem<HighPrecision>&,
                                                              const HighPrecision&, const SolveOptions&);
template DiscJet<double> disc_jet<double>(const PeriodMap<double>&, const double&);
template DiscJet<HighPrecision> disc_jet<HighPrecision>(const PeriodMap<HighPrecision>&, const HighPrecision&);

// ---------------------------------------------------------------------------

FundamentalPair fundamental_pair(const PeriodicPotential& P, double w, const std::vector<double>& x_grid,
                                 double tol) {
  if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("fundamental_pair: w must be positive and finite");
  if (!(tol > 0.0 && tol <= 1e-6)) throw ValidationError("fundamental_pair: tol must lie in (0, 1e-6]");
  for (double x : x_grid)
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("fundamental_pair: x_grid must lie in [0, 1]");
  const auto hp = make_problem<double>(P);
  SolveOptions opt;
  opt.dense = !x_grid.empty();
  opt.tol = std::max(tol, 1e-16);
  const auto pm = solve_period(hp, w * w, opt);
  FundamentalPair fp;
  fp.w = w;
  fp.theta_1 = pm.theta[0];
  fp.phi_1 = pm.phi[0];
  fp.theta_prime_1 = pm.theta_p[0];
  fp.phi_prime_1 = pm.phi_p[0];
  fp.wronskian_defect = std::abs(fp.theta_1 * fp.phi_prime_1 - fp.theta_prime_1 * fp.phi_1 - 1.0);
  if (!std::isfinite(fp.wronskian_defect)) throw NumericalError("fundamental_pair: integration failed");
  fp.x = x_grid;
  for (double x : x_grid) {
    const auto v = (*pm.dense)(x);
    fp.trace.push_back({v[0], v[2], v[1], v[3]});
  }
  return fp;
}

DiscriminantValue discriminant(const PeriodicPotential& P, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("discriminant: w must be positive and finite");
  const auto j = disc_jet(make_problem<double>(P), w, 1);
  return {w, j.d, j.dw};
}

PicardResult picard_series(const PeriodicPotential& P, double k, double E, int n_terms, double x) {
  if (k == 0.0 || !std::isfinite(k)) throw ValidationError("picard_series: k must be nonzero");
  if (n_terms < 1) throw ValidationError("picard_series: n_terms must be at least 1");
  if (!(x >= 0.0)) throw ValidationError("picard_series: x must be nonnegative");

  const double ak = std::abs(k);
  const double M = sup_norm(P) + std::abs(k * k - E);
  PicardResult r;
  r.bound = std::exp(x / ak * M) / ak;
  {
    const double a = x * M / ak;
    double term = 1.0, tail = 0.0;
    for (int j = 1; j <= n_terms; ++j) term *= a / j;
    for (int j = n_terms; term > 1e-300 && j < n_terms + 400; ++j) {
      tail += term;
      term *= a / (j + 1);
    }
    r.theta_remainder = tail;
    r.phi_remainder = tail / ak;
  }

  if (x == 0.0) {
    r.theta_partial = 1.0;
    r.phi_partial = 0.0;
    return r;
  }

  constexpr int m = 16;
  const Eigen::VectorXd ref = quad::chebyshev_lobatto(m);
  static const Eigen::MatrixXd S = quad::cumulative_integration(quad::chebyshev_lobatto(m));
  const double freq = ak + 2.0 * std::numbers::pi * P.max_harmonic() + M;
  const int panels = std::max(1, static_cast<int>(std::ceil(x * freq / 2.0)));
  const double width = x / panels;
  const int n = panels * m;
  Eigen::VectorXd xs(n), V(n), cs(n), sn(n);
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < m; ++i) xs[p * m + i] = p * width + 0.5 * width * (ref[i] + 1.0);
  for (int i = 0; i < n; ++i) {
    V[i] = eval(P, xs[i]) - E + k * k;
    cs[i] = std::cos(k * xs[i]);
    sn[i] = std::sin(k * xs[i]);
  }
  auto cumint = [&](const Eigen::VectorXd& f) {
    Eigen::VectorXd out(n);
    double carry = 0.0;
    for (int p = 0; p < panels; ++p) {
      const Eigen::VectorXd seg = 0.5 * width * (S * f.segment(p * m, m));
      out.segment(p * m, m) = seg.array() + carry;
      carry += seg[m - 1];
    }
    return out;
  };
  auto iterate = [&](Eigen::VectorXd term) {
    Eigen::VectorXd sum = term;
    for (int j = 1; j < n_terms; ++j) {
      const Eigen::VectorXd g = V.cwiseProduct(term);
      const Eigen::VectorXd ic = cumint(cs.cwiseProduct(g));
      const Eigen::VectorXd is = cumint(sn.cwiseProduct(g));
      term = (sn.cwiseProduct(ic) - cs.cwiseProduct(is)) / k;
      sum += term;
    }
    return sum[n - 1];
  };
  r.theta_partial = iterate(cs);
  r.phi_partial = iterate(sn / k);
  return r;
}

}  // namespace hillwave
