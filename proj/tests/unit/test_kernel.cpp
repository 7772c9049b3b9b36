#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hillwave/errors.hpp"
#include "hillwave/kernel.hpp"
#include "hillwave/transform.hpp"

using namespace hillwave;

namespace {
const PeriodicPotential mathieu = from_fourier({0, 2}, {});
const double kPi = std::numbers::pi;

ChartOptions bands(int n) {
  ChartOptions o;
  o.bands = n;
  return o;
}
}

TEST_CASE("chart interpolates E and is mirror symmetric") {
  const auto bs = band_edges<double>(mathieu, 7);
  const auto chart = build_chart(bs, bands(6));
  CHECK(chart.k_max() == doctest::Approx(7 * kPi));
  CHECK(chart.mirror_defect < 1e-10);
  CHECK(chart.interpolation_error < 1e-6);  // depth-limited near the narrow gaps
  for (double k : {0.3, 4.0, 9.9, 20.1}) {
    const auto bp = band_function(bs, k);
    CHECK(chart.E(k) == doctest::Approx(bp.E).epsilon(1e-9));
    CHECK(chart.Edot(k) == doctest::Approx(bp.Edot).epsilon(1e-6));
  }
  CHECK(std::abs(chart.inflection_k[1] - 6.253850) < 1e-4);
  CHECK_THROWS(build_chart(bs, bands(7)));
}

TEST_CASE("free kernel matches the closed form") {
  const auto bs = band_edges<double>(PeriodicPotential{}, 9);
  const auto chart = build_chart(bs, bands(8));
  for (double t : {0.5, 2.0}) {
    const auto s = full_kernel(bs, chart, t, 0.0, 0.0);
    CHECK(std::abs(s.value) == doctest::Approx(1 / std::sqrt(4 * kPi * t)).epsilon(1e-6));
    const auto s2 = full_kernel(bs, chart, t, 1.7, 0.0);
    // phase -(x - y)^2 / 4t relative to x = y
    const double dphase = std::arg(s2.value / s.value);
    CHECK(std::abs(std::remainder(dphase + 1.7 * 1.7 / (4 * t), 2 * kPi)) < 1e-6);
    CHECK(std::isfinite(s.tail_bound));
  }
}

TEST_CASE("kernel is symmetric in x and y for a real even potential") {
  const auto bs = band_edges<double>(mathieu, 7);
  const auto chart = build_chart(bs, bands(6));
  KernelOptions o;
  o.estimate_error = false;
  const auto a = full_kernel(bs, chart, 0.8, 0.3, -1.1, o);
  const auto b = full_kernel(bs, chart, 0.8, -1.1, 0.3, o);
  CHECK(std::abs(a.value - b.value) < 1e-10);
  const auto c = band_kernel(chart, 2, 0.8, 0.3, -1.1);
  const auto d = band_kernel(chart, -3, 0.8, 0.3, -1.1);
  CHECK(std::abs(c.value - a.per_band[4].value) < 1e-14);
  CHECK(std::isfinite(std::abs(d.value)));
  CHECK_THROWS_AS(full_kernel(bs, chart, -1.0, 0, 0), ValidationError);
}

TEST_CASE("van der Corput constants and randomized check") {
  CHECK(vdc_constant(1) == 3.0);
  CHECK(vdc_constant(2) == 8.0);
  CHECK(vdc_constant(3) == 18.0);
  const auto rep = vdc_verify(3, 12, {1.0, 10.0, 100.0});
  CHECK(rep.instances.size() == 36);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_ratio < 1.0);
}

TEST_CASE("log-log slope") {
  std::vector<double> x{1, 2, 4, 8}, y{3, 3 * std::pow(2, -0.5), 3 * 0.5, 3 * std::pow(8, -0.5)};
  CHECK(log_log_slope(x, y) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("transform: Parseval, inversion, diagonalization") {
  const auto bs = band_edges<double>(mathieu, 9);
  const auto chart = build_chart(bs, bands(8));
  const auto in = gaussian_input(bs, GaussianPacket{1.0, 0.2, 2.0});
  const auto c = forward(chart, in, true);
  CHECK(c.parseval_defect < 1e-6);
  CHECK(c.mirror_defect < 1e-8);
  const std::vector<double> x{-1.3, 0.0, 0.45, 2.2};
  const auto f = inverse(chart, c, x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(f[i] - in.f(x[i])) < 1e-6);
  CHECK(diagonalization_check(chart, in) < 1e-5);
}

TEST_CASE("free evolution of a Gaussian") {
  const auto bs = band_edges<double>(PeriodicPotential{}, 9);
  const auto chart = build_chart(bs, bands(8));
  const GaussianPacket g{1.0, 0.0, 1.5};
  const auto c = forward(chart, gaussian_input(bs, g));
  const std::vector<double> x{-4.0, -1.0, 0.5, 3.0};
  const auto r = evolve(chart, c, 0.7, x);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(r.u[i] - free_gaussian_evolution(g, 0.7, x[i])) < 1e-8);
}

TEST_CASE("reference propagator converges on the free case") {
  const GaussianPacket g{1.0, 0.0, 0.0};
  const auto bs = band_edges<double>(PeriodicPotential{}, 2);
  const auto in = gaussian_input(bs, g);
  const auto ref = reference_propagator(PeriodicPotential{}, in.fourier, 0.5, {0.0, 1.0});
  CHECK(ref.converged);
  CHECK(std::abs(ref.values[0] - free_gaussian_evolution(g, 0.5, 0.0)) < 1e-6);
}
