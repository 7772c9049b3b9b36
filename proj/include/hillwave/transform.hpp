#pragma once

#include <functional>
#include <vector>

#include "hillwave/kernel.hpp"

namespace hillwave {

/// Compactly supported (to working precision) input on [support_lo, support_hi].
struct InputFunction {
  std::function<cplx(double)> f;
  double support_lo = 0.0, support_hi = 0.0;
  std::function<cplx(double)> h0f;      // optional: -f'' + P f with the shifted P
  std::function<cplx(double)> fourier;  // optional: int f(x) e^{-i xi x} dx
};

/// exp(-(x - y0)^2 / (2 sigma^2) + i k0 x), cut at 12 sigma.
struct GaussianPacket {
  double sigma = 1.0, y0 = 0.0, k0 = 0.0;
};

InputFunction gaussian_input(const BandStructure<double>& bs, const GaussianPacket& g);

/// e^{-it d^2/dx^2} applied to the packet, in closed form (the P = 0 propagator).
cplx free_gaussian_evolution(const GaussianPacket& g, double t, double x);

/// f^(k) = (2 pi)^{-1/2} int psi_k f at every chart node, for k and -k.
struct SpectralCoefficients {
  std::vector<cplx> plus;   // f^(k_j)
  std::vector<cplx> minus;  // f^(-k_j)
  double f_norm2 = 0.0;     // int |f|^2
  double hat_norm2 = 0.0;   // int |f^|^2 over the charted k range
  double parseval_defect = 0.0;  // |f_norm2 - hat_norm2| / f_norm2
  double tail_indicator = 0.0;   // max |f^|^2 on the last charted band, times pi
  double mirror_defect = 0.0;    // symmetry against direct -k evaluation, when requested
};

/// direct_negative: f^(-k) from the e^{-ik} Bloch state instead of conj(psi_k), with the
/// difference between the two recorded in mirror_defect.
SpectralCoefficients forward(const Chart& chart, const InputFunction& f, bool direct_negative = false);

/// f(x) = int phi_-(x, k) f^(k) dk.
std::vector<cplx> inverse(const Chart& chart, const SpectralCoefficients& c, const std::vector<double>& x);

/// Relative weighted l2 residual of (H_0 f)^ - E f^ over the chart nodes.
double diagonalization_check(const Chart& chart, const InputFunction& f);

struct EvolveResult {
  std::vector<double> x;
  std::vector<cplx> u;
  double error_estimate = 0.0;  // max over x
};

/// u(t, x) = int phi_-(x, k) e^{itE(k)} f^(k) dk, with the band integrals done by the
/// oscillatory panel integrator.
EvolveResult evolve(const Chart& chart, const SpectralCoefficients& c, double t, const std::vector<double>& x);

}  // namespace hillwave
