#include "hillwave/quasimomentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hillwave/errors.hpp"
#include "hillwave/quadrature.hpp"

namespace hillwave {

template <>
double clamp_tol<double>() {
  return 1e-12;
}

template <>
HighPrecision clamp_tol<HighPrecision>() {
  return HighPrecision("1e-60");
}

namespace {

template <typename Scalar>
[[noreturn]] void in_gap(const BandStructure<Scalar>& bs, int n, const Scalar& w) {
  std::ostringstream os;
  os << "w = " << to_double(w) << " lies inside gap " << n;
  if (n >= 1 && n <= bs.n_max())
    os << " (" << to_double(bs.gap(n).a_minus) << ", " << to_double(bs.gap(n).a_plus) << ")";
  throw DomainError(os.str());
}

// band index for w, tolerating points that sit in a gap only by rounding
template <typename Scalar>
int locate(const BandStructure<Scalar>& bs, const Scalar& w, const Scalar& D) {
  using std::abs;
  if (w < 0) throw DomainError("w must be nonnegative");
  for (int n = 1; n <= bs.n_max(); ++n) {
    const auto& g = bs.gaps[n - 1];
    if (w <= g.a_minus) return n - 1;
    if (w < g.a_plus) {
      if (g.empty) return w < g.center ? n - 1 : n;
      const int sgn = n % 2 == 0 ? 1 : -1;
      if (sgn * D - 1 > clamp_tol<Scalar>()) in_gap(bs, n, w);
      return (w - g.a_minus) < (g.a_plus - w) ? n - 1 : n;
    }
  }
  std::ostringstream os;
  os << "w = " << to_double(w) << " lies beyond the last computed band (n_max = " << bs.n_max() << ")";
  throw DomainError(os.str());
}

}  // namespace

template <typename Scalar>
BandPoint<Scalar> band_point(const BandStructure<Scalar>& bs, const Scalar& w, int order, int band) {
  if (order < 1 || order > 3) throw ValidationError("band_point: order must be 1..3");
  return band_point(bs, disc_jet(bs.problem, w, order), order, band);
}

template <typename Scalar>
BandPoint<Scalar> band_point(const BandStructure<Scalar>& bs, const DiscJet<Scalar>& j, int order, int band) {
  using std::atan2;
  using std::sqrt;
  if (order < 1 || order > 3) throw ValidationError("band_point: order must be 1..3");
  const Scalar& w = j.w;
  const int n = band >= 0 ? band : locate(bs, w, j.d);
  const int sgn = n % 2 == 0 ? 1 : -1;
  Scalar x = sgn * j.d;
  if (x > 1) {
    if (x - 1 > clamp_tol<Scalar>()) in_gap(bs, n, w);
    x = Scalar(1);
  } else if (x < -1) {
    if (-1 - x > clamp_tol<Scalar>()) in_gap(bs, n + 1, w);
    x = Scalar(-1);
  }
  BandPoint<Scalar> p;
  p.band = n;
  p.w = w;
  const Scalar s_abs = sqrt((1 - x) * (1 + x));
  p.k = pi<Scalar>() * n + atan2(s_abs, x);
  p.D = sgn * x;
  const Scalar s = sgn * s_abs, c = p.D;
  p.sin_k = s;
  const Scalar a = j.dw, b = j.dww, d3 = j.dwww;
  p.E = w * w;
  p.edge_limited = s_abs == 0;
  if (a == 0) {
    // w = 0 or the touching point of a closed gap: derivatives are not available from D
    p.edge_limited = true;
    p.dk_dw = Scalar(0);
    p.Edot = p.Eddot = p.Edddot = Scalar(0);
    return p;
  }
  p.dk_dw = s_abs == 0 ? Scalar(0) : Scalar(-a / s);
  // w', w'', w''' in k, written so that nothing divides by sin k
  const Scalar a2 = a * a, s2 = s * s;
  const Scalar w1 = -s / a;
  const Scalar w2 = -(b * s2 + c * a2) / (a2 * a);
  const Scalar w3 = s * (a * d3 * s2 + a2 * a2 - 3 * a2 * b * c - 3 * b * b * s2) / (a2 * a2 * a);
  p.Edot = 2 * w * w1;
  p.Eddot = 2 * w1 * w1 + 2 * w * w2;
  p.Edddot = 6 * w1 * w2 + 2 * w * w3;
  return p;
}

template <typename Scalar>
Scalar k_of_w(const BandStructure<Scalar>& bs, const Scalar& w) {
  return band_point(bs, w, 1).k;
}

template <typename Scalar>
Scalar w_of_k(const BandStructure<Scalar>& bs, const Scalar& k) {
  using std::abs;
  using std::cos;
  using std::floor;
  using std::sin;
  if (k < 0) return -w_of_k(bs, Scalar(-k));
  const Scalar pi_s = pi<Scalar>();
  int n = static_cast<int>(to_double(floor(k / pi_s)));
  if (n == bs.n_max() && k == pi_s * n) --n;  // right end of the last band
  if (n >= bs.n_max()) {
    std::ostringstream os;
    os << "k = " << to_double(k) << " lies beyond the last computed band (n_max = " << bs.n_max() << ")";
    throw DomainError(os.str());
  }
  const Scalar kappa = k - pi_s * n;
  const Scalar lo0 = bs.band_lo(n), hi0 = bs.band_hi(n);
  if (kappa <= 0) return lo0;
  if (kappa >= pi_s) return hi0;
  const int sgn = n % 2 == 0 ? 1 : -1;
  const bool near_lo = kappa < pi_s / 2;
  const Scalar sh = sin(kappa / 2), ch = cos(kappa / 2);
  // increasing in w on the band
  auto g = [&](const Scalar& w, Scalar* dg) {
    const auto j = disc_jet(bs.problem, w, 1);
    if (dg) *dg = -sgn * j.dw;
    return near_lo ? (1 - sgn * j.d) - 2 * sh * sh : 2 * ch * ch - (1 + sgn * j.d);
  };
  Scalar lo = lo0, hi = hi0;
  Scalar w = lo + (hi - lo) * (kappa / pi_s);
  const Scalar tol = epsilon<Scalar>() * 4 * (1 + hi0);
  for (int it = 0; it < 300; ++it) {
    Scalar dg;
    const Scalar gw = g(w, &dg);
    if (gw == 0) return w;
    if (gw < 0) lo = w; else hi = w;
    Scalar next = w - gw / dg;
    if (!(dg > 0) || next <= lo || next >= hi) next = (lo + hi) / 2;
    if (abs(next - w) <= tol || hi - lo <= tol) return next;
    w = next;
  }
  throw NumericalError("w_of_k: iteration did not converge at k = " + std::to_string(to_double(k)));
}

template <typename Scalar>
BandPoint<Scalar> band_function(const BandStructure<Scalar>& bs, const Scalar& k, int order) {
  using std::abs;
  using std::floor;
  const Scalar ak = abs(k);
  const Scalar w = w_of_k(bs, ak);
  int n = static_cast<int>(to_double(floor(ak / pi<Scalar>())));
  if (n >= bs.n_max()) n = bs.n_max() - 1;
  auto p = band_point(bs, w, order, n);
  p.k = k;
  if (k < 0) {
    p.w = -p.w;
    p.Edot = -p.Edot;
    p.Edddot = -p.Edddot;
    p.sin_k = -p.sin_k;
  }
  return p;
}

template <typename Scalar>
Inflection<Scalar> inflection_point(const BandStructure<Scalar>& bs, int n) {
  using std::abs;
  using std::sqrt;
  Inflection<Scalar> res;
  if (n < 0 || n + 1 > bs.n_max()) throw ValidationError("inflection_point: band index out of range");
  const bool left_open = n == 0 || !bs.gap(n).empty;
  const bool right_open = !bs.gap(n + 1).empty;
  if (!left_open || !right_open) return res;

  const Scalar lo = bs.band_lo(n), hi = bs.band_hi(n), W = hi - lo;
  const Scalar g_lo = n == 0 ? W * Scalar(1e-9) : bs.gap(n).length;
  const Scalar g_hi = bs.gap(n + 1).length;
  std::vector<Scalar> ws;
  constexpr int interior = 16;
  for (int i = 0; i < interior; ++i) ws.push_back(lo + W * (i + Scalar(0.5)) / interior);
  for (Scalar d = W / (2 * interior); d > g_lo / 1000; d /= 4) ws.push_back(lo + d);
  for (Scalar d = W / (2 * interior); d > g_hi / 1000; d /= 4) ws.push_back(hi - d);
  std::sort(ws.begin(), ws.end());

  auto eddot = [&](const Scalar& w) { return band_point(bs, w, 2, n).Eddot; };
  std::vector<Scalar> ev;
  for (const auto& w : ws) ev.push_back(eddot(w));
  res.sample_w = ws;
  res.sample_eddot = ev;

  int first = -1;
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    if ((ev[i] > 0 && ev[i + 1] < 0) || (ev[i] < 0 && ev[i + 1] > 0)) {
      ++res.sign_changes;
      if (first < 0) first = static_cast<int>(i);
    }
  }
  if (first < 0) return res;

  // Illinois iteration on the bracketing pair
  Scalar a = ws[first], b = ws[first + 1], fa = ev[first], fb = ev[first + 1];
  const Scalar dist = std::min(b - lo, hi - a);
  const Scalar wtol = std::max(Scalar(dist * Scalar(1e-12)), Scalar(epsilon<Scalar>() * 64 * hi));
  int side = 0;
  Scalar c = a;
  for (int it = 0; it < 300 && b - a > wtol; ++it) {
    c = (a * fb - b * fa) / (fb - fa);
    if (!(c > a && c < b)) c = (a + b) / 2;
    const Scalar fc = eddot(c);
    if (fc == 0) {
      a = b = c;
      break;
    }
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
      if (side == -1) fb /= 2;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa /= 2;
      side = 1;
    }
  }
  const Scalar wstar = (a + b) / 2;
  const auto p = band_point(bs, wstar, 3, n);
  res.found = true;
  res.w = wstar;
  res.k = p.k;
  res.Edddot = p.Edddot;
  res.edddot_nonzero = abs(p.Edddot) > sqrt(epsilon<Scalar>()) * (1 + p.E);
  return res;
}

#define HILLWAVE_INSTANTIATE(S)                                                                   \
  template BandPoint<S> band_point<S>(const BandStructure<S>&, const S&, int, int);             \
  template BandPoint<S> band_point<S>(const BandStructure<S>&, const DiscJet<S>&, int, int);      \
  template S k_of_w<S>(const BandStructure<S>&, const S&);                                      \
  template S w_of_k<S>(const BandStructure<S>&, const S&);                                      \
  template BandPoint<S> band_function<S>(const BandStructure<S>&, const S&, int);               \
  template Inflection<S> inflection_point<S>(const BandStructure<S>&, int);
HILLWAVE_INSTANTIATE(double)
HILLWAVE_INSTANTIATE(HighPrecision)
#undef HILLWAVE_INSTANTIATE

// ---------------------------------------------------------------------------

namespace {

constexpr int density_nodes = 24;

double min_band_length(const BandStructure<double>& bs) {
  double m = bs.n_max() >= 1 ? 2.0 * bs.gap(1).a_minus : 1.0;
  for (int n = 1; n + 1 <= bs.n_max(); ++n) m = std::min(m, bs.band_hi(n) - bs.band_lo(n));
  return m;
}

double q_direct(const BandStructure<double>& bs, double u) {
  const double d = std::abs(disc_jet(bs.problem, u, 0).d);
  return acosh1p(std::max(d - 1.0, 0.0));
}

// int_a^b q(t) f(t) dt with t = c - h cos(theta)
template <typename F>
double gap_integral(const GapDensity& g, F f, double split_t = std::numeric_limits<double>::quiet_NaN()) {
  const double c = 0.5 * (g.a_minus + g.a_plus), h = 0.5 * (g.a_plus - g.a_minus);
  auto integrand = [&](double th) {
    const double t = c - h * std::cos(th);
    const double s = std::sin(th);
    const double r = quad::barycentric(g.nodes, g.bary, g.r, (t - c) / h);
    return h * h * s * s * r * f(t);
  };
  const double pi = std::numbers::pi;
  if (std::isfinite(split_t) && split_t > g.a_minus && split_t < g.a_plus) {
    const double ths = std::acos(std::clamp((c - split_t) / h, -1.0, 1.0));
    return quad::integrate(integrand, 0.0, ths, 1e-12) + quad::integrate(integrand, ths, pi, 1e-12);
  }
  return quad::integrate(integrand, 0.0, pi, 1e-12);
}

}  // namespace

double GapDensity::operator()(double t) const {
  if (empty() || t <= a_minus || t >= a_plus) return 0.0;
  const double c = 0.5 * (a_minus + a_plus), h = 0.5 * (a_plus - a_minus);
  return std::sqrt((t - a_minus) * (a_plus - t)) * quad::barycentric(nodes, bary, r, (t - c) / h);
}

GapDensity gap_density(const BandStructure<double>& bs, int n, const std::vector<double>& u_grid) {
  const auto& g = bs.gap(n);
  GapDensity d;
  d.n = n;
  if (g.empty) return d;
  d.a_minus = g.a_minus;
  d.a_plus = g.a_plus;
  d.C0 = 1.0 + moment_q0(bs.potential) / min_band_length(bs);
  const auto& rule = quad::chebyshev_fejer(density_nodes);
  d.nodes = rule.nodes;
  d.bary = quad::barycentric_weights(rule.nodes);
  d.r.resize(density_nodes);
  const double c = 0.5 * (g.a_minus + g.a_plus), h = 0.5 * g.length;
  for (int j = 0; j < density_nodes; ++j) {
    const double t = c + h * rule.nodes[j];
    d.r[j] = q_direct(bs, t) / std::sqrt((t - g.a_minus) * (g.a_plus - t));
  }
  for (double u : u_grid) {
    if (u < g.a_minus || u > g.a_plus) throw ValidationError("gap_density: u outside the gap");
    const double q = q_direct(bs, u);
    const double lo = std::sqrt(std::max((u - g.a_minus) * (g.a_plus - u), 0.0));
    d.u.push_back(u);
    d.q.push_back(q);
    d.lower.push_back(lo);
    d.upper.push_back(d.C0 * lo);
    const double slack = 1e-9 * h + 1e-14;
    if (q < lo * (1 - 1e-6) - slack || q > d.C0 * lo * (1 + 1e-6) + slack) d.bounds_hold = false;
  }
  return d;
}

std::vector<GapDensity> all_gap_densities(const BandStructure<double>& bs) {
  std::vector<GapDensity> out;
  for (int n = 1; n <= bs.n_max(); ++n)
    if (!bs.gap(n).empty) out.push_back(gap_density(bs, n));
  return out;
}

PoissonValue poisson_extension(const std::vector<GapDensity>& densities, double u, double v) {
  if (!(v >= 0.0)) throw ValidationError("poisson_extension: v must be nonnegative");
  const double pi = std::numbers::pi;
  PoissonValue out;
  out.I.assign(densities.size(), 0.0);
  if (v == 0.0) {
    for (std::size_t i = 0; i < densities.size(); ++i) {
      const auto& g = densities[i];
      const double au = std::abs(u);
      if (!g.empty() && au > g.a_minus && au < g.a_plus) {
        out.I[i] = g(au);
        out.q = out.I[i];
      }
    }
    return out;
  }
  out.q = v;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const auto& g = densities[i];
    if (g.empty()) continue;
    out.I[i] = v / pi * gap_integral(g, [&](double t) { return 1.0 / ((t - u) * (t - u) + v * v); }, u);
    const double mirror =
        v / pi * gap_integral(g, [&](double t) { return 1.0 / ((t + u) * (t + u) + v * v); }, -u);
    out.q += out.I[i] + mirror;
  }
  // gaps past the last density: extrapolate lengths geometrically, int q <= C0 pi |g|^2 / 8
  if (densities.size() >= 2) {
    const auto& g1 = densities[densities.size() - 2];
    const auto& g2 = densities.back();
    const double l1 = g1.a_plus - g1.a_minus, l2 = g2.a_plus - g2.a_minus;
    const double ratio = l2 / l1;
    if (ratio < 1.0) {
      double len = l2, tail = 0.0;
      for (int m = 1; m <= 60; ++m) {
        len *= ratio;
        const double t = g2.a_plus + m * pi;
        const double dist = std::max(std::abs(t - std::abs(u)) - pi / 2, 0.0);
        tail += 2.0 * g2.C0 * pi * len * len / 8.0 / (dist * dist + v * v);
      }
      out.tail_bound = v / pi * tail;
    } else {
      out.tail_bound = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

std::vector<AsymptoticResidual> asymptotic_residual(const BandStructure<double>& bs, int N,
                                                    const std::vector<double>& w_list) {
  if (N < 0 || N > 3) throw ValidationError("asymptotic_residual: N must be 0..3");
  const double Q0 = moment_q0(bs.potential), Q2 = moment_q2(bs.potential);
  std::vector<AsymptoticResidual> out;
  for (double w : w_list) {
    AsymptoticResidual r;
    r.w = w;
    r.k = k_of_w(bs, w);
    r.r = w - r.k - Q0 / w - (N >= 2 ? Q2 / (w * w * w) : 0.0);
    r.scaled = std::abs(r.r) * std::pow(w, N + 1);
    r.scaled_next = std::abs(r.r) * std::pow(w, N + 2);
    out.push_back(r);
  }
  return out;
}

double exact_gap_integral(double a, double b, double u, int power) {
  if (!(a < b)) throw ValidationError("exact_gap_integral: need a < b");
  if (power != 3 && power != 4) throw ValidationError("exact_gap_integral: power must be 3 or 4");
  if (u >= a && u <= b) throw DomainError("exact_gap_integral: u lies in [a, b]");
  const double pi = std::numbers::pi;
  const double da = std::abs(u - a), db = std::abs(u - b);
  const double base = (b - a) * (b - a) / (std::pow(da, 1.5) * std::pow(db, 1.5));
  if (power == 3) {
    // (t - u)^3 has the sign of a - u throughout the gap
    const double sign = u < a ? 1.0 : -1.0;
    return sign * pi / 8.0 * base;
  }
  return pi / 16.0 * base * (1.0 / da + 1.0 / db);
}

double p_prime_series(const BandStructure<double>& bs, const std::vector<GapDensity>& densities, double u,
                      double c) {
  if (!(u > 0.0)) throw ValidationError("p_prime_series: u must be positive");
  if (!(c > 0.0)) throw ValidationError("p_prime_series: c must be positive");
  bs.band_of(u);
  for (const auto& g : densities) {
    if (g.empty()) continue;
    const double len = g.a_plus - g.a_minus;
    if (std::min(std::abs(u - g.a_minus), std::abs(u - g.a_plus)) < c * len) {
      std::ostringstream os;
      os << "p_prime_series: u = " << u << " is within " << c << "|g| of gap " << g.n;
      throw DomainError(os.str());
    }
  }
  double s = 0.0;
  for (const auto& g : densities) {
    if (g.empty()) continue;
    s += gap_integral(g, [&](double t) { return 1.0 / ((t - u) * (t - u)) + 1.0 / ((t + u) * (t + u)); });
  }
  return 1.0 + s / std::numbers::pi;
}

}  // namespace hillwave
