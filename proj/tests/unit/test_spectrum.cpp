#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hillwave/hill_matrix.hpp"
#include "hillwave/spectrum.hpp"

using namespace hillwave;

namespace {
const PeriodicPotential mathieu = from_fourier({0, 2}, {});
const double kPi = std::numbers::pi;
}

TEST_CASE("free spectrum has no gaps") {
  const auto bs = band_edges<double>(PeriodicPotential{}, 6);
  CHECK(bs.n_max() == 6);
  CHECK(std::abs(bs.shift) < 1e-14);
  for (int n = 1; n <= 6; ++n) {
    CHECK(bs.gap(n).empty);
    CHECK(bs.gap(n).ell == n);
    CHECK(gap_height(bs, n) == 0.0);
    CHECK(bs.gap(n).a_minus == doctest::Approx(n * kPi).epsilon(1e-10));
  }
}

TEST_CASE("mathieu edges against the plane-wave oracle") {
  const auto bs = band_edges<double>(mathieu, 6);
  // mpmath eigensolver, 25 plane waves at 30 digits, tests/oracles/mathieu_reference.py
  const double e0 = -0.05060384199840866;
  CHECK(-bs.shift == doctest::Approx(e0).epsilon(1e-10));
  const auto& g1 = bs.gap(1);
  CHECK(std::abs(g1.a_minus * g1.a_minus + e0 - 8.857098951351016) < 1e-10);
  CHECK(std::abs(g1.a_plus * g1.a_plus + e0 - 10.856778202313892) < 1e-10);
  const auto& g2 = bs.gap(2);
  CHECK(std::abs(g2.a_minus * g2.a_minus + e0 - 39.4699745485643) < 1e-8);
  CHECK(std::abs(g2.a_plus * g2.a_plus + e0 - 39.52057748770511) < 1e-8);
  CHECK(std::abs(g1.height - 0.15907851594634947) < 1e-8);
  CHECK(std::abs(gap_height(bs, 1) - 0.15907851594634947) < 1e-8);

  // the C++ plane-wave path agrees at k = 0, pi as well
  const auto ev0 = hill_eigenvalues(mathieu, 0.0, 32);
  const auto evpi = hill_eigenvalues(mathieu, kPi, 32);
  CHECK(std::abs(ev0[0] - e0) < 1e-12);
  CHECK(std::abs(g1.a_plus * g1.a_plus + e0 - evpi[1]) < 1e-8);
  for (int n = 3; n <= 6; ++n) {
    const auto& ev = n % 2 ? evpi : ev0;
    const auto& g = bs.gap(n);
    if (g.empty) continue;
    CHECK(std::abs(g.a_minus * g.a_minus + e0 - ev[n - 1]) < 1e-8 * n * n);
    CHECK(std::abs(g.a_plus * g.a_plus + e0 - ev[n]) < 1e-8 * n * n);
  }
}

TEST_CASE("gap lengths decay and labels are n") {
  const auto bs = band_edges<double>(mathieu, 6);
  for (int n = 1; n <= 6; ++n) CHECK(bs.gap(n).ell == n);
  for (int n = 1; n < 4; ++n) CHECK(bs.gap(n + 1).length < bs.gap(n).length);
  CHECK(bs.band_lo(0) == 0.0);
  CHECK(bs.band_of(0.5 * (bs.band_lo(2) + bs.band_hi(2))) == 2);
  CHECK_THROWS(bs.band_of(to_double(bs.gap(1).center)));
}

TEST_CASE("high precision resolves the tiny fourth gap") {
  const auto bs = band_edges<HighPrecision>(mathieu, 4);
  const auto& g4 = bs.gap(4);
  CHECK_FALSE(g4.empty);
  CHECK(to_double(g4.length) > 0.0);
  CHECK(to_double(g4.length) < 1e-6);
  const auto bd = band_edges<double>(mathieu, 4);
  CHECK(to_double(bs.gap(1).a_minus) == doctest::Approx(bd.gap(1).a_minus).epsilon(1e-12));
}
