#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hillwave/errors.hpp"
#include "hillwave/floquet.hpp"
#include "hillwave/hill_matrix.hpp"

using namespace hillwave;

namespace {
const PeriodicPotential mathieu = from_fourier({0, 2}, {});
}

TEST_CASE("free fundamental pair is cos, sin / w") {
  for (double w : {0.5, 3.0, 17.25}) {
    const auto fp = fundamental_pair(PeriodicPotential{}, w);
    CHECK(fp.theta_1 == doctest::Approx(std::cos(w)).epsilon(1e-12));
    CHECK(fp.phi_1 == doctest::Approx(std::sin(w) / w).epsilon(1e-12));
    CHECK(fp.wronskian_defect < 1e-12);
    const auto d = discriminant(PeriodicPotential{}, w);
    CHECK(d.d == doctest::Approx(std::cos(w)).epsilon(1e-12));
    CHECK(d.d_prime == doctest::Approx(-std::sin(w)).epsilon(1e-11));
  }
}

TEST_CASE("mathieu fundamental pair against mpmath") {
  // mpmath odefun at 30 digits, tests/oracles/mathieu_reference.py
  const auto fp = fundamental_pair(mathieu, 3.0);
  CHECK(std::abs(fp.theta_1 - -1.0035120259680284) < 1e-9);
  CHECK(std::abs(fp.phi_1 - -0.0077288085609914778) < 1e-9);
  CHECK(fp.wronskian_defect < 1e-12);
  CHECK(std::abs(discriminant(mathieu, std::numbers::pi).d - -1.0126614089250982) < 1e-9);
}

TEST_CASE("discriminant derivative against a central difference") {
  const double w = 4.1, h = 1e-5;
  const double fd = (discriminant(mathieu, w + h).d - discriminant(mathieu, w - h).d) / (2 * h);
  CHECK(discriminant(mathieu, w).d_prime == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("E-derivatives at high precision agree with double") {
  const auto hd = make_problem<double>(mathieu);
  const auto hh = make_problem<HighPrecision>(mathieu);
  const auto jd = disc_jet(hd, 5.0, 3);
  const auto jh = disc_jet(hh, HighPrecision(5), 3);
  CHECK(jd.d == doctest::Approx(to_double(jh.d)).epsilon(1e-12));
  CHECK(jd.dw == doctest::Approx(to_double(jh.dw)).epsilon(1e-11));
  CHECK(jd.dww == doctest::Approx(to_double(jh.dww)).epsilon(1e-10));
  CHECK(jd.dwww == doctest::Approx(to_double(jh.dwww)).epsilon(1e-9));
}

TEST_CASE("picard series remainder controls the partial sum") {
  const double k = 20.0;
  const double E = k * k + 0.3;
  const auto pr = picard_series(mathieu, k, E, 12, 1.0);
  const auto fp = fundamental_pair(mathieu, std::sqrt(E));
  CHECK(std::abs(pr.theta_partial - fp.theta_1) <= pr.theta_remainder + 1e-12);
  CHECK(std::abs(pr.phi_partial - fp.phi_1) <= pr.phi_remainder + 1e-12);
}

TEST_CASE("hill matrix: free fiber and hermiticity") {
  const auto ev = hill_eigenvalues(PeriodicPotential{}, 0.3, 3);
  CHECK(ev.size() == 7);
  CHECK(ev[0] == doctest::Approx(0.09).epsilon(1e-14));
  const auto H = hill_matrix(mathieu, 1.1, 5);
  CHECK((H - H.adjoint()).norm() < 1e-14);
  CHECK(std::abs(H(0, 1) - 1.0) < 1e-15);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(fundamental_pair(mathieu, -1.0), ValidationError);
  CHECK_THROWS_AS(fundamental_pair(mathieu, 1.0, {1.5}), ValidationError);
}
