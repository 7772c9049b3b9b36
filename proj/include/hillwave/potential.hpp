#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace hillwave {

/// Period-1 real potential stored as a finite Fourier series.
///
///   P(x) = shift + sum_l a_l cos(2 pi l x) + sum_{l>=1} b_l sin(2 pi l x)
///
/// `cosine[0]` is the constant term a_0 and `sine[0]` is the coefficient of
/// sin(2 pi x). `shift` is the energy offset that places the bottom of the
/// spectrum at zero; it is 0 until the spectrum module sets it.
struct PeriodicPotential {
  std::vector<double> cosine;
  std::vector<double> sine;
  double shift = 0.0;

  /// Highest harmonic present (0 for a constant potential).
  int max_harmonic() const;
  /// Constant Fourier mode including the shift.
  double mean() const;
  /// Complex Fourier coefficient of exp(2 pi i l x), l in Z.
  std::complex<double> fourier(int l) const;
  bool is_zero() const;
};

PeriodicPotential from_fourier(std::vector<double> cosine_coeffs, std::vector<double> sine_coeffs);

double eval(const PeriodicPotential& P, double x);

/// Q_0 = (1/2) int_0^1 P.
double moment_q0(const PeriodicPotential& P);
/// Q_2 = (1/8) int_0^1 P^2, by Parseval on the coefficients.
double moment_q2(const PeriodicPotential& P);

/// max_x |P(x)|, by dense sampling followed by golden-section polishing.
double sup_norm(const PeriodicPotential& P);

/// Sum of coefficient magnitudes; an upper bound for sup_norm used to size ODE steps.
double coefficient_l1(const PeriodicPotential& P);

PeriodicPotential with_shift(PeriodicPotential P, double shift);

/// Reads {"cosine": [...], "sine": [...]} (either key may be absent).
PeriodicPotential load_potential_json(const std::filesystem::path& path);
PeriodicPotential parse_potential_json(const std::string& text);

}  // namespace hillwave
