#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hillwave/errors.hpp"
#include "hillwave/quadrature.hpp"
#include "hillwave/quasimomentum.hpp"

using namespace hillwave;

namespace {
const PeriodicPotential mathieu = from_fourier({0, 2}, {});
const double kPi = std::numbers::pi;
}

TEST_CASE("free band function is k^2") {
  const auto bs = band_edges<double>(PeriodicPotential{}, 6);
  for (double k : {0.4, 2.0, 7.7, 15.1}) {
    CHECK(k_of_w(bs, k) == doctest::Approx(k).epsilon(1e-12));
    const auto bp = band_function(bs, k);
    CHECK(bp.E == doctest::Approx(k * k).epsilon(1e-12));
    CHECK(bp.Edot == doctest::Approx(2 * k).epsilon(1e-10));
    CHECK(bp.Eddot == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(std::abs(bp.Edddot) < 1e-5);
  }
  CHECK_FALSE(inflection_point(bs, 1).found);
}

TEST_CASE("mathieu quasimomentum against the ODE oracle") {
  const auto bs = band_edges<double>(mathieu, 6);
  CHECK(std::abs(k_of_w(bs, 4.794586026832523) - 4.78531429454328) < 1e-9);
  CHECK(k_of_w(bs, bs.band_lo(1)) == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(k_of_w(bs, bs.band_hi(1)) == doctest::Approx(2 * kPi).epsilon(1e-6));
  CHECK_THROWS_AS(k_of_w(bs, 0.5 * (bs.gap(1).a_minus + bs.gap(1).a_plus)), DomainError);
}

TEST_CASE("round trip and monotonicity on every band") {
  const auto bs = band_edges<double>(mathieu, 8);
  std::mt19937 rng(7);
  double worst = 0.0;
  for (int n = 0; n < 7; ++n) {
    std::uniform_real_distribution<double> u(n * kPi + 1e-3, (n + 1) * kPi - 1e-3);
    for (int i = 0; i < 200; ++i) {
      const double k = u(rng);
      worst = std::max(worst, std::abs(k_of_w(bs, w_of_k(bs, k)) - k));
      const auto bp = band_function(bs, k);
      CHECK(bp.Edot > 0.0);
      CHECK(std::abs(std::cos(bp.k) - bp.D) < 1e-10);
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("second derivative: analytic against finite differences") {
  const auto bs = band_edges<double>(mathieu, 4);
  const double k = 1.5 * kPi, h = 1e-3;
  const auto e = [&](double q) { return band_function(bs, q, 1).E; };
  const double fd = (-e(k + 2 * h) + 16 * e(k + h) - 30 * e(k) + 16 * e(k - h) - e(k - 2 * h)) / (12 * h * h);
  CHECK(band_function(bs, k).Eddot == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("band 1 inflection against the dense-grid oracle") {
  const auto bs = band_edges<double>(mathieu, 4);
  const auto inf = inflection_point(bs, 1);
  REQUIRE(inf.found);
  CHECK(inf.sign_changes == 1);
  CHECK(std::abs(inf.k - 6.253850) < 1e-4);
  CHECK(inf.edddot_nonzero);
  CHECK(band_function(bs, inf.k - 0.3).Eddot > 0.0);
  CHECK(band_function(bs, 0.5 * (inf.k + 2 * kPi)).Eddot < 0.0);
}

TEST_CASE("gap integral closed forms") {
  // mpmath quad
  CHECK(exact_gap_integral(0, 1, 2, 3) == doctest::Approx(-0.13884009181744895).epsilon(1e-12));
  CHECK(exact_gap_integral(0, 1, -1, 4) == doctest::Approx(0.10413006886308671).epsilon(1e-12));
  CHECK(exact_gap_integral(0.2, 0.9, 1.7, 4) == doctest::Approx(exact_gap_integral(-0.9, -0.2, -1.7, 4)));
  CHECK_THROWS_AS(exact_gap_integral(0, 1, 0.5, 3), DomainError);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) {
    double a = u(rng), b = a + 0.05 + std::abs(u(rng));
    const double v = (i % 2 ? b + 0.1 : a - 0.1) + (i % 2 ? 1 : -1) * std::abs(u(rng));
    for (int p : {3, 4}) {
      const double q = quad::integrate_singular(
          [&](double t) { return std::sqrt((t - a) * (b - t)) / std::pow(t - v, p); }, a, b, 1e-14);
      CHECK(std::abs(exact_gap_integral(a, b, v, p) - q) <= 1e-8 * std::max(1.0, std::abs(q)));
    }
  }
}

TEST_CASE("gap density bounds and the series for dk/du") {
  const auto bs = band_edges<double>(mathieu, 6);
  const auto g = gap_density(bs, 1);
  CHECK(g.bounds_hold);
  CHECK(std::abs(g(g.a_minus)) < 1e-7);
  const auto dens = all_gap_densities(bs);
  const double w = 0.5 * (bs.band_lo(2) + bs.band_hi(2));
  const auto bp = band_point(bs, w, 1);
  CHECK(p_prime_series(bs, dens, w) == doctest::Approx(bp.dk_dw).epsilon(1e-5));
  CHECK_THROWS_AS(p_prime_series(bs, dens, bs.band_lo(1) + 1e-6), DomainError);
}

TEST_CASE("asymptotic residual: constant potential") {
  const auto bs = band_edges<double>(from_fourier({1.0}, {}), 12);
  // shifted to zero: w - k vanishes identically
  for (const auto& r : asymptotic_residual(bs, 1, {20.0, 30.0})) CHECK(std::abs(r.r) < 1e-10);
}
