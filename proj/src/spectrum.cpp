#include "hillwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hillwave/errors.hpp"
#include "hillwave/hill_matrix.hpp"

namespace hillwave {

template <typename Scalar>
const Gap<Scalar>& BandStructure<Scalar>::gap(int n) const {
  if (n < 1 || n > n_max()) throw ValidationError("gap index " + std::to_string(n) + " outside 1.." + std::to_string(n_max()));
  return gaps[n - 1];
}

template <typename Scalar>
Scalar BandStructure<Scalar>::band_lo(int n) const {
  if (n == 0) return Scalar(0);
  return gap(n).a_plus;
}

template <typename Scalar>
Scalar BandStructure<Scalar>::band_hi(int n) const {
  if (n < 0 || n + 1 > n_max()) throw ValidationError("band index " + std::to_string(n) + " has no computed upper edge");
  return gap(n + 1).a_minus;
}

template <typename Scalar>
int BandStructure<Scalar>::band_of(const Scalar& w) const {
  if (w < 0) throw DomainError("w must be nonnegative");
  for (int n = 1; n <= n_max(); ++n) {
    const auto& g = gaps[n - 1];
    if (w <= g.a_minus) return n - 1;
    if (w < g.a_plus) {
      if (g.empty) return w < g.center ? n - 1 : n;
      std::ostringstream os;
      os << "w = " << to_double(w) << " lies inside gap " << n << " (" << to_double(g.a_minus) << ", "
         << to_double(g.a_plus) << ")";
      throw DomainError(os.str());
    }
  }
  std::ostringstream os;
  os << "w = " << to_double(w) << " lies beyond the last computed band (n_max = " << n_max() << ")";
  throw DomainError(os.str());
}

template <>
double default_empty_tol<double>() {
  return 1e-12;
}

template <>
HighPrecision default_empty_tol<HighPrecision>() {
  return HighPrecision("1e-40");
}

namespace {

template <typename Scalar>
Scalar excess_floor() {
  return epsilon<Scalar>() * 1000;
}

template <typename Scalar>
Scalar step_tol(const Scalar& x) {
  using std::abs;
  return epsilon<Scalar>() * 16 * (1 + abs(x));
}

template <typename Scalar>
DiscJet<Scalar> jet(const HillProblem<Scalar>& hp, const Scalar& w, int order) {
  return disc_jet(hp, w, order);
}

template <typename Scalar>
std::string diagnostic(const HillProblem<Scalar>& hp, double lo, double hi) {
  std::ostringstream os;
  os << " D samples:";
  for (int i = 0; i <= 4; ++i) {
    const double w = lo + (hi - lo) * i / 4.0;
    if (w <= 0) continue;
    os << " D(" << w << ")=" << to_double(jet(hp, Scalar(w), 0).d);
  }
  return os.str();
}

// root of sgn*D(w) - 1 between `inner` (where it is positive) and the outward direction dir
template <typename Scalar>
Scalar solve_edge(const HillProblem<Scalar>& hp, const Scalar& inner, const Scalar& guess, int sgn, int dir,
                  int n) {
  using std::abs;
  auto f = [&](const Scalar& w, Scalar* df) {
    const auto j = jet(hp, w, 1);
    if (df) *df = sgn * j.dw;
    return sgn * j.d - 1;
  };
  Scalar in = inner, out = guess;
  Scalar span = abs(guess - inner) * 2;
  if (span == 0) span = Scalar(1e-6);
  // march outward until the sign flips
  for (int it = 0;; ++it) {
    out = inner + dir * span;
    if (out <= 0) out = inner / 2;
    if (f(out, nullptr) < 0) break;
    in = out;
    span *= 2;
    if (it > 60 || span > 2) throw NumericalError("band_edges: cannot bracket edge of gap " + std::to_string(n));
  }
  Scalar w = guess;
  if ((w - in) * (w - out) > 0) w = (in + out) / 2;
  for (int it = 0; it < 200; ++it) {
    Scalar df;
    const Scalar fw = f(w, &df);
    if (fw == 0) return w;
    if (fw > 0) in = w; else out = w;
    Scalar next = w - fw / df;
    if (!(df != 0) || (next - in) * (next - out) >= 0) next = (in + out) / 2;
    if (abs(next - w) <= step_tol(w) || abs(in - out) <= step_tol(w)) return next;
    w = next;
  }
  throw NumericalError("band_edges: edge iteration did not converge for gap " + std::to_string(n));
}

}  // namespace

template <typename Scalar>
BandStructure<Scalar> band_edges(const PeriodicPotential& P_in, int n_max, double tol) {
  using std::abs;
  using std::sqrt;
  if (n_max < 1) throw ValidationError("band_edges: n_max must be at least 1");
  PeriodicPotential P = P_in;
  if (P.cosine.empty()) P.cosine.push_back(0.0);
  P.cosine[0] += P.shift;
  P.shift = 0.0;

  const int M = n_max / 2 + 20;
  const Eigen::VectorXd lam = hill_eigenvalues(P, 0.0, M);
  const Eigen::VectorXd mu = hill_eigenvalues(P, std::numbers::pi, M);

  // bottom of the spectrum: D(E) = 1 below lambda_0 ... refine from the plane-wave value
  const auto base = make_problem<Scalar>(P, Scalar(0));
  Scalar e0 = Scalar(lam[0]);
  for (int it = 0; it < 100; ++it) {
    SolveOptions opt;
    opt.e_order = 1;
    const auto pm = solve_period(base, e0, opt);
    const Scalar step = (pm.disc(0) - 1) / pm.disc(1);
    e0 -= step;
    if (abs(step) <= step_tol(e0)) break;
    if (it == 99) throw NumericalError("band_edges: bottom of spectrum did not converge");
  }

  BandStructure<Scalar> bs;
  bs.shift = -e0;
  bs.problem = make_problem<Scalar>(P, bs.shift);
  bs.potential = with_shift(P, to_double(bs.shift));
  bs.empty_tol = default_empty_tol<Scalar>();
  const Scalar edge_tol = tol > 0 ? Scalar(tol) : Scalar(epsilon<Scalar>() * 10000);
  const Scalar floor = excess_floor<Scalar>();
  const Scalar pi_s = pi<Scalar>();
  const double e0d = to_double(e0);

  for (int n = 1; n <= n_max; ++n) {
    const double lo = (n % 2 == 1 ? mu[n - 1] : lam[n - 1]) - e0d;
    const double hi = (n % 2 == 1 ? mu[n] : lam[n]) - e0d;
    const double wc = std::sqrt(std::max(0.5 * (lo + hi), 1e-12));
    const double wlo = std::sqrt(std::max(lo, 0.0)), whi = std::sqrt(std::max(hi, 0.0));
    const double guard = std::max(0.5, 2.0 * (whi - wlo));
    // extremum of D inside the gap
    Scalar u = Scalar(wc);
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      const auto j = jet(bs.problem, u, 2);
      const Scalar step = j.dw / j.dww;
      u -= step;
      if (abs(to_double(u) - wc) > guard) break;
      if (abs(step) <= step_tol(u)) {
        ok = true;
        break;
      }
    }
    if (!ok)
      throw NumericalError("band_edges: bracket failure at gap " + std::to_string(n) +
                           diagnostic(bs.problem, wlo - guard, whi + guard));
    const int sgn = n % 2 == 0 ? 1 : -1;
    const auto j = jet(bs.problem, u, 2);
    const Scalar excess = sgn * j.d - 1;

    Gap<Scalar> g;
    g.n = n;
    g.center = u;
    g.ell = static_cast<int>(std::lround(to_double(u / pi_s)));
    if (excess <= floor) {
      g.empty = true;
    } else {
      const Scalar delta = sqrt(2 * excess / abs(j.dww));
      if (2 * delta < bs.empty_tol) g.empty = true;
      else {
        g.a_minus = solve_edge(bs.problem, u, u - delta, sgn, -1, n);
        g.a_plus = solve_edge(bs.problem, u, u + delta, sgn, +1, n);
        for (const Scalar& a : {g.a_minus, g.a_plus}) {
          const Scalar r = abs(sgn * jet(bs.problem, a, 0).d - 1);
          if (r > edge_tol)
            throw NumericalError("band_edges: edge residual " + std::to_string(to_double(r)) + " at gap " +
                                 std::to_string(n));
        }
        g.length = g.a_plus - g.a_minus;
        if (g.length < bs.empty_tol) g.empty = true;
      }
    }
    if (g.empty) {
      g.a_minus = g.a_plus = u;
      g.length = Scalar(0);
      g.height = Scalar(0);
    } else {
      g.height = acosh1p(excess);
    }
    bs.gaps.push_back(g);
  }

  // interlacing
  Scalar prev = Scalar(0);
  for (const auto& g : bs.gaps) {
    if (!(g.a_minus > prev) || g.a_plus < g.a_minus)
      throw NumericalError("band_edges: edges out of order at gap " + std::to_string(g.n));
    prev = g.a_plus;
  }
  return bs;
}

template <typename Scalar>
Scalar gap_height(const BandStructure<Scalar>& bs, int n) {
  using std::abs;
  using std::sqrt;
  const auto& g = bs.gap(n);
  if (g.empty) return Scalar(0);
  auto q = [&](const Scalar& u) {
    Scalar e = abs(jet(bs.problem, u, 0).d) - 1;
    if (e < 0) e = Scalar(0);
    return acosh1p(e);
  };
  const Scalar r = (sqrt(Scalar(5)) - 1) / 2;
  Scalar a = g.a_minus, b = g.a_plus;
  Scalar c = b - r * (b - a), d = a + r * (b - a);
  Scalar fc = q(c), fd = q(d);
  for (int it = 0; it < 48; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = q(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = q(d);
    }
  }
  return fc > fd ? fc : fd;
}

template struct BandStructure<double>;
template struct BandStructure<HighPrecision>;
template BandStructure<double> band_edges<double>(const PeriodicPotential&, int, double);
template BandStructure<HighPrecision> band_edges<HighPrecision>(const PeriodicPotential&, int, double);
template double gap_height<double>(const BandStructure<double>&, int);
template HighPrecision gap_height<HighPrecision>(const BandStructure<HighPrecision>&, int);

}  // namespace hillwave
