#pragma once

#include <vector>

#include "hillwave/floquet.hpp"

namespace hillwave {

/// Gap g_n = (a_n^-, a_n^+) in the w = sqrt(E) variable.
template <typename Scalar>
struct Gap {
  int n = 0;
  int ell = 0;             // nearest integer to the gap centre over pi
  Scalar a_minus, a_plus;  // edges, D(a) = (-1)^n
  Scalar center;           // extremum of D inside the closed gap
  Scalar length;           // a_plus - a_minus
  Scalar height;           // arccosh |D(center)|
  bool empty = false;
};

template <typename Scalar>
struct BandStructure {
  PeriodicPotential potential;  // shifted, shift rounded to double
  HillProblem<Scalar> problem;  // shifted, exact shift
  Scalar shift;                 // -e_0
  Scalar empty_tol;             // gaps shorter than this are treated as closed
  std::vector<Gap<Scalar>> gaps;

  int n_max() const { return static_cast<int>(gaps.size()); }
  const Gap<Scalar>& gap(int n) const;
  /// Band sigma_n = [a_n^+, a_{n+1}^-], n = 0 .. n_max - 1; a_0^+ = 0.
  Scalar band_lo(int n) const;
  Scalar band_hi(int n) const;
  /// Band containing w; throws DomainError inside an open gap or past the last computed band.
  int band_of(const Scalar& w) const;
};

/// Default length below which a gap counts as empty.
template <typename Scalar>
Scalar default_empty_tol();

/// Finds e_0, shifts P so the spectrum starts at 0, and locates gaps 1..n_max.
/// tol bounds |D(a) -/+ 1| at the edges; 0 selects a precision-dependent default.
template <typename Scalar>
BandStructure<Scalar> band_edges(const PeriodicPotential& P, int n_max, double tol = 0.0);

/// max over the gap of arccosh|D(u)| by golden-section search; 0 for an empty gap.
template <typename Scalar>
Scalar gap_height(const BandStructure<Scalar>& bs, int n);

/// arccosh(1 + x) without cancellation for small x >= 0.
template <typename Scalar>
Scalar acosh1p(const Scalar& x) {
  using std::log1p;
  using std::sqrt;
  return log1p(x + sqrt(x * (x + 2)));
}

}  // namespace hillwave
