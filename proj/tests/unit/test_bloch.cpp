#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hillwave/bloch.hpp"
#include "hillwave/errors.hpp"

using namespace hillwave;

namespace {
const PeriodicPotential mathieu = from_fourier({0, 2}, {});
const double kPi = std::numbers::pi;
}

TEST_CASE("free weyl functions") {
  const auto bs = band_edges<double>(PeriodicPotential{}, 4);
  const auto m = weyl_m(bs, 2.0);
  CHECK(std::abs(m.m_plus - cplx(0, 2)) < 1e-12);
  CHECK(std::abs(m.m_minus - cplx(0, -2)) < 1e-12);
  const auto ev = bloch_pair(bs, 2.0);
  const auto fc = fourier_coeffs(ev, 3);
  CHECK(std::abs(fc.plus_at(0) - 1.0) < 1e-10);
  CHECK(std::abs(fc.plus_at(1)) < 1e-10);
}

TEST_CASE("bloch solution is quasi-periodic and solves the equation") {
  const auto bs = band_edges<double>(mathieu, 4);
  const double w = 0.5 * (bs.band_lo(1) + bs.band_hi(1));
  const auto ev = bloch_pair(bs, w);
  REQUIRE(ev.weyl_available);
  CHECK(std::abs(ev.m_plus - std::conj(ev.m_minus)) < 1e-12);
  CHECK(ev.quasi_defect < 1e-10);
  CHECK(ev.period_defect < 1e-10);
  CHECK(ev.n_squared == doctest::Approx(ev.n_squared_quadrature).epsilon(1e-9));

  const auto& st = ev.state;
  const double x = 0.37, h = 1e-3;
  const cplx d2 = (st.derivative(x - 2 * h) - 8.0 * st.derivative(x - h) + 8.0 * st.derivative(x + h) -
                   st.derivative(x + 2 * h)) / (12 * h);
  const cplx res = -d2 + eval(bs.potential, x) * st(x) - w * w * st(x);
  CHECK(std::abs(res) < 1e-6);
  CHECK(std::abs(st(x + 3) - std::pow(st.rho, 3) * st(x)) < 1e-11);
}

TEST_CASE("edge path keeps the state normalized") {
  const auto bs = band_edges<double>(mathieu, 4);
  const auto st = bloch_state(bs, bs.band_lo(1));
  CHECK(std::abs(std::abs(st.rho) - 1.0) < 1e-12);
  CHECK(st.k == doctest::Approx(kPi).epsilon(1e-8));
  CHECK_THROWS_AS(weyl_m(bs, to_double(bs.gap(1).center)), DomainError);
}

TEST_CASE("identity suite at the band 5 midpoint") {
  const auto bs = band_edges<double>(mathieu, 7);
  const double w = 0.5 * (bs.band_lo(5) + bs.band_hi(5));
  const auto rep = identity_suite(bs, {w});
  CHECK(rep.worst.edot_residual < 1e-6);
  CHECK(rep.worst.dprime_corrected < 1e-6);
  CHECK(rep.worst.cos_residual < 1e-10);
  CHECK(rep.worst.normalization_residual < 1e-8);
  // D' = -w phi(1) N^2, so the factor 4 version is off by 3
  CHECK(rep.worst.dprime_literal == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("product kernel factor") {
  const auto bs = band_edges<double>(mathieu, 4);
  const double w = 0.5 * (bs.band_lo(2) + bs.band_hi(2));
  const auto st = bloch_state(bs, w);
  const double x = 0.3, y = 1.8;
  const cplx f = product_kernel_factor(st, x, st, y);
  CHECK(std::abs(f - std::conj(st.periodic(x)) * st.periodic(y)) < 1e-12);
}
