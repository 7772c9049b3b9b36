#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hillwave/spectrum.hpp"

namespace hillwave {

/// |D| may exceed 1 by this much before a point counts as inside a gap.
template <typename Scalar>
Scalar clamp_tol();

/// Quasimomentum and band-function derivatives at one point of a band.
template <typename Scalar>
struct BandPoint {
  int band = 0;
  Scalar w, k, D, sin_k;
  Scalar dk_dw;              // infinite at edges of open gaps; reported as 0 there
  Scalar E, Edot, Eddot, Edddot;
  bool edge_limited = false;  // sin k vanished; Edot = 0 and Eddot is the one-sided limit
};

/// Evaluates at w; band chosen by location, or forced when `band` >= 0.
template <typename Scalar>
BandPoint<Scalar> band_point(const BandStructure<Scalar>& bs, const Scalar& w, int order = 3, int band = -1);

/// Same, from a discriminant jet already computed at w.
template <typename Scalar>
BandPoint<Scalar> band_point(const BandStructure<Scalar>& bs, const DiscJet<Scalar>& jet, int order, int band = -1);

template <typename Scalar>
Scalar k_of_w(const BandStructure<Scalar>& bs, const Scalar& w);

/// Inverse of k_of_w; odd in k.
template <typename Scalar>
Scalar w_of_k(const BandStructure<Scalar>& bs, const Scalar& k);

/// E(k) and its first three k-derivatives; E even in k.
template <typename Scalar>
BandPoint<Scalar> band_function(const BandStructure<Scalar>& bs, const Scalar& k, int order = 3);

template <typename Scalar>
struct Inflection {
  bool found = false;
  int sign_changes = 0;
  Scalar k, w, Edddot;
  bool edddot_nonzero = false;
  std::vector<Scalar> sample_w;      // grid used to count sign changes
  std::vector<Scalar> sample_eddot;
};

/// Zero of E'' inside band n. found = false when an adjacent gap is closed or no sign change exists.
template <typename Scalar>
Inflection<Scalar> inflection_point(const BandStructure<Scalar>& bs, int n);

// ---------------------------------------------------------------------------
// gap densities and the representations built on them (double precision)

struct GapDensity {
  int n = 0;
  double a_minus = 0.0, a_plus = 0.0;
  double C0 = 1.0;
  std::vector<double> u, q, lower, upper;
  bool bounds_hold = true;
  // q(t) = sqrt((t - a)(b - t)) r(t), r interpolated on Chebyshev nodes
  Eigen::VectorXd nodes, r, bary;

  bool empty() const { return nodes.size() == 0; }
  double operator()(double t) const;
};

GapDensity gap_density(const BandStructure<double>& bs, int n, const std::vector<double>& u_grid = {});

/// Densities of all nonempty computed gaps.
std::vector<GapDensity> all_gap_densities(const BandStructure<double>& bs);

struct PoissonValue {
  double q = 0.0;
  std::vector<double> I;    // I_n(u, v) per density
  double tail_bound = 0.0;  // contribution bound for gaps past the computed range
};

PoissonValue poisson_extension(const std::vector<GapDensity>& densities, double u, double v);

struct AsymptoticResidual {
  double w = 0.0, k = 0.0, r = 0.0;
  double scaled = 0.0;       // |r| w^{N+1}
  double scaled_next = 0.0;  // |r| w^{N+2}
};

std::vector<AsymptoticResidual> asymptotic_residual(const BandStructure<double>& bs, int N,
                                                    const std::vector<double>& w_list);

/// int_a^b sqrt((t-a)(b-t)) / (t-u)^power dt for u outside [a, b], power 3 or 4.
double exact_gap_integral(double a, double b, double u, int power);

/// dk/du on a band from the gap-integral representation; refuses within c|g| of an open-gap edge.
double p_prime_series(const BandStructure<double>& bs, const std::vector<GapDensity>& densities, double u,
                      double c = 8.0);

}  // namespace hillwave
