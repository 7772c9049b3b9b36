// Acceptance run: one line per criterion, "criterion N: PASS|FAIL ...".
// Usage: acceptance [N ...]   (no argument runs all twelve)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hillwave/kernel.hpp"
#include "hillwave/quadrature.hpp"
#include "hillwave/transform.hpp"

using namespace hillwave;

namespace {

constexpr double kPi = std::numbers::pi;

// tolerances
constexpr double kFreeModulusTol = 1e-4;
constexpr double kFreePhaseTol = 1e-3;
constexpr double kCosTol = 1e-10;
constexpr double kDprimeTol = 1e-6;
constexpr double kEdotTol = 1e-6;
constexpr double kGapIntegralTol = 1e-8;
constexpr double kGrowthTol = 1.5;  // tail-window max over head-window max
constexpr double kEdgeBand = 10.0;
constexpr double kParsevalTol = 1e-6;
constexpr double kInverseTol = 1e-4;
constexpr double kDiagTol = 1e-5;
constexpr double kPropagatorTol = 1e-3;
constexpr double kSlopeTol = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const PeriodicPotential& mathieu() {
  static const PeriodicPotential P = from_fourier({0, 2}, {});
  return P;
}

const BandStructure<double>& mathieu_bs() {
  static const auto bs = band_edges<double>(mathieu(), 13);
  return bs;
}

const Chart& mathieu_chart() {
  static const Chart c = build_chart(mathieu_bs(), ChartOptions{});
  return c;
}

// 200 band-interior samples over bands 1..12, uniform in k away from the edges
const std::vector<double>& identity_samples() {
  static const std::vector<double> w = [] {
    std::vector<double> out;
    for (int i = 0; i < 200; ++i) {
      const int n = 1 + i % 12;
      const double s = 0.02 + 0.96 * std::fmod(0.5 + i * 0.6180339887498949, 1.0);
      out.push_back(w_of_k(mathieu_bs(), (n + s) * kPi));
    }
    return out;
  }();
  return w;
}

const IdentityReport& identity_report() {
  static const auto rep = identity_suite(mathieu_bs(), identity_samples());
  return rep;
}

double growth(const std::vector<double>& v) {
  const std::size_t third = std::max<std::size_t>(1, v.size() / 3);
  const double head = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(third));
  const double tail = *std::max_element(v.end() - static_cast<std::ptrdiff_t>(third), v.end());
  return tail / head;
}

// ---------------------------------------------------------------------------

Outcome free_case() {
  const auto bs = band_edges<double>(PeriodicPotential{}, 13);
  const auto chart = build_chart(bs, ChartOptions{});
  double mod = 0.0, phase = 0.0;
  for (double t : {0.5, 1.0, 2.0, 8.0}) {
    const auto k0 = full_kernel(bs, chart, t, 0.0, 0.0);
    mod = std::max(mod, std::abs(std::abs(k0.value) * std::sqrt(4 * kPi * t) - 1.0));
    for (double x : {0.5, -1.7, 3.2}) {
      const auto kx = full_kernel(bs, chart, t, x, 0.0);
      const double d = std::arg(kx.value / k0.value) + x * x / (4 * t);
      phase = std::max(phase, std::abs(std::remainder(d, 2 * kPi)));
    }
  }
  return {mod <= kFreeModulusTol && phase <= kFreePhaseTol,
          fmt("modulus rel %.3g (tol %.0e), phase %.3g (tol %.0e)", mod, kFreeModulusTol, phase, kFreePhaseTol)};
}

Outcome discriminant_identity() {
  const auto& r = identity_report().worst;
  return {r.cos_residual <= kCosTol && r.dprime_literal <= kDprimeTol,
          fmt("|cos k - D| %.3g (tol %.0e), |D' + 4 w phi(1) N^2|/|D'| %.6g (tol %.0e)", r.cos_residual, kCosTol,
              r.dprime_literal, kDprimeTol) +
              fmt("; |D' + w phi(1) N^2|/|D'| %.3g over 200 samples", r.dprime_corrected)};
}

Outcome korotyaev() {
  const auto& r = identity_report().worst;
  return {r.edot_residual <= kEdotTol, fmt("max |Edot phi(1) N^2 / (2 sin k) - 1| %.3g (tol %.0e)", r.edot_residual,
                                           kEdotTol)};
}

Outcome gap_integrals() {
  std::mt19937 rng(20240521u);
  std::uniform_real_distribution<double> ua(-5.0, 5.0), ul(0.05, 3.0), ud(0.02, 4.0);
  double worst = 0.0;
  int sign_mismatch = 0;
  for (int i = 0; i < 50; ++i) {
    const double a = ua(rng), b = a + ul(rng);
    const double u = i % 2 ? b + ud(rng) : a - ud(rng);
    for (int p : {3, 4}) {
      const double q = quad::integrate_singular(
          [&](double t) { return std::sqrt((t - a) * (b - t)) / std::pow(t - u, p); }, a, b, 1e-15);
      const double c = exact_gap_integral(a, b, u, p);
      worst = std::max(worst, std::abs(std::abs(c) - std::abs(q)) / std::max(1.0, std::abs(q)));
      if (std::signbit(c) != std::signbit(q)) ++sign_mismatch;
    }
  }
  return {worst <= kGapIntegralTol && sign_mismatch == 0,
          fmt("magnitude rel %.3g (tol %.0e) over 100 integrals, sign mismatches %.0f", worst, kGapIntegralTol,
              sign_mismatch)};
}

Outcome lemma82() {
  const auto bs = band_edges<double>(mathieu(), 26);
  std::vector<double> w;
  for (int n = 5; n <= 25; ++n) w.push_back(0.5 * (bs.band_lo(n) + bs.band_hi(n)));
  const auto rep = identity_suite(bs, w);
  std::vector<double> a, b, c;
  for (const auto& r : rep.rows) {
    a.push_back(r.theta2_scaled);
    b.push_back(r.phi2_scaled);
    c.push_back(r.thetaphi_scaled);
  }
  const double g = std::max({growth(a), growth(b), growth(c)});
  return {g <= kGrowthTol, fmt("k^2-scaled residuals over k = 5.5 pi .. 25.5 pi: max %.3g %.3g %.3g, growth %.3g",
                               *std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()),
                               *std::max_element(c.begin(), c.end()), g) +
                               fmt(" (tol %.1f)", kGrowthTol)};
}

Outcome lemma52() {
  const auto bs = band_edges<double>(mathieu(), 41);
  std::vector<double> w;
  for (int n = 10; n <= 40; ++n) w.push_back(0.5 * (bs.band_lo(n) + bs.band_hi(n)));
  std::vector<double> s;
  for (const auto& r : asymptotic_residual(bs, 1, w)) s.push_back(r.scaled_next);
  const double g = growth(s);
  return {g <= kGrowthTol && std::isfinite(g),
          fmt("|w - k - Q0/w| w^3 in [%.4g, %.4g], Q2 = %.4g, growth %.3g", *std::min_element(s.begin(), s.end()),
              *std::max_element(s.begin(), s.end()), moment_q2(bs.potential), g) +
              fmt(" (tol %.1f)", kGrowthTol)};
}

const BandStructure<HighPrecision>& mathieu_hp() {
  static const auto bs = band_edges<HighPrecision>(mathieu(), 10);
  return bs;
}

Outcome edge_law() {
  const auto& bs = mathieu_hp();
  double lo = INFINITY, hi = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const auto& g = bs.gap(n);
    if (g.empty) return {false, fmt("gap %.0f unresolved", n)};
    for (int j = 0; j <= 24; ++j) {
      const HighPrecision s = HighPrecision(0.5) * pow(HighPrecision(2), -j);
      const HighPrecision w = g.a_plus + s * g.length;
      const auto bp = band_point(bs, w, 1, n);
      const double r = to_double(bp.Edot / (bp.k * sqrt(s)));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return {hi / lo <= kEdgeBand && lo > 0,
          fmt("Edot / (k sqrt((w - a+)/|g|)) in [%.4g, %.4g], spread %.3g (tol %.0f)", lo, hi, hi / lo, kEdgeBand)};
}

Outcome inflections() {
  const auto& bs = mathieu_hp();
  std::string ks;
  bool ok = true;
  for (int n = 1; n <= 8; ++n) {
    const auto inf = inflection_point(bs, n);
    ok = ok && inf.found && inf.sign_changes == 1 && inf.edddot_nonzero;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%d:%s%.6f", n > 1 ? " " : "", n, inf.found ? "" : "none/",
                  inf.found ? to_double(inf.k) : 0.0);
    ks += buf;
  }
  return {ok, "k_n = " + ks};
}

const GaussianPacket kPacket{1.0, 0.2, 3.0};

Outcome transform_suite() {
  const auto& chart = mathieu_chart();
  const auto in = gaussian_input(mathieu_bs(), kPacket);
  const auto c = forward(chart, in);
  std::vector<double> x;
  for (int i = 0; i <= 480; ++i) x.push_back(-12.0 + 24.0 * i / 480);
  const auto f = inverse(chart, c, x);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::norm(f[i] - in.f(x[i]));
    den += std::norm(in.f(x[i]));
  }
  const double inv = std::sqrt(num / den);
  const double diag = diagonalization_check(chart, in);
  return {c.parseval_defect <= kParsevalTol && inv <= kInverseTol && diag <= kDiagTol,
          fmt("Parseval %.3g (tol %.0e), inversion L2 %.3g (tol %.0e), ", c.parseval_defect, kParsevalTol, inv,
              kInverseTol) +
              fmt("diagonalization %.3g (tol %.0e)", diag, kDiagTol)};
}

Outcome propagator() {
  const auto& chart = mathieu_chart();
  const auto in = gaussian_input(mathieu_bs(), kPacket);
  const auto c = forward(chart, in);
  std::vector<double> x;
  for (int i = 0; i <= 60; ++i) x.push_back(-6.0 + 12.0 * i / 60);
  const auto u = evolve(chart, c, 1.0, x);
  const auto ref = reference_propagator(mathieu_bs().potential, in.fourier, 1.0, x);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(u.u[i] - ref.values[i]));
  return {d <= kPropagatorTol && ref.converged,
          fmt("L-inf %.3g (tol %.0e); reference M = %.0f, nk = %.0f", d, kPropagatorTol, ref.M, ref.nk)};
}

Outcome decay() {
  const auto& chart = mathieu_chart();
  const auto samples = default_decay_samples(chart);
  KernelOptions opt;
  opt.estimate_error = false;
  std::vector<double> late, early;
  for (int i = 0; i < 16; ++i) late.push_back(std::pow(64.0, i / 15.0));
  for (int i = 0; i < 9; ++i) early.push_back(std::pow(16.0, -1.0 + i / 8.0));
  const auto a = decay_report(mathieu_bs(), chart, late, samples, opt);
  const auto b = decay_report(mathieu_bs(), chart, early, samples, opt);
  const auto range = [](const std::vector<double>& r) {
    return fmt("ratio %.3f..%.3f", *std::min_element(r.begin(), r.end()), *std::max_element(r.begin(), r.end()));
  };
  return {a.slope <= kSlopeTol && b.slope <= kSlopeTol,
          fmt("slope vs t^-1/3 on [1, 64]: %.4f, vs t^-1/2 on [1/16, 1]: %.4f (tol %.2f); ", a.slope, b.slope,
              kSlopeTol) +
              range(a.ratio) + " / " + range(b.ratio) +
              fmt(" over %.0f samples", static_cast<double>(samples.size()))};
}

Outcome vdc() {
  const auto rep = vdc_verify(20240521u, 100, {1.0, 10.0, 100.0, 1000.0});
  return {rep.violations == 0 && rep.instances.size() >= 100,
          fmt("%.0f instances, %.0f violations, worst integral/bound %.3g", static_cast<double>(rep.instances.size()),
              rep.violations, rep.worst_ratio)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {"free-case kernel", free_case},
    {"discriminant identity", discriminant_identity},
    {"Edot normalization identity", korotyaev},
    {"gap integral closed forms", gap_integrals},
    {"large-k Gram asymptotics", lemma82},
    {"w - k asymptotics", lemma52},
    {"band-edge square-root law", edge_law},
    {"one inflection per band", inflections},
    {"transform suite", transform_suite},
    {"propagator cross-check", propagator},
    {"dispersive decay", decay},
    {"van der Corput", vdc},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 12; ++i) which.push_back(i);
  int failed = 0;
  for (int id : which) {
    if (id < 1 || id > 12) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const auto& c = kCriteria[id - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s: %s  (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), sec);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
