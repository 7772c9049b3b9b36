#pragma once

#include <array>
#include <vector>

#include "hillwave/bloch.hpp"

namespace hillwave {

struct ChartOptions {
  int bands = 12;            // bands 0..bands, so k in [0, (bands + 1) pi]
  double c = 8.0;            // partition constant: a_n^+ + c|g_n| and a_{n+1}^- - c|g_{n+1}|
  double max_width = 0.25;   // panel width in k
  double edge_ratio = 0.5;   // geometric refinement toward open-gap edges (in w)
  double edge_floor = 1e-3;  // ... down to edge_floor * |g|
  double t_resolve = 0.0;    // > 0: split until t |E(k1) - E(k0)| <= pi on each panel
  double tol = 1e-10;        // interpolation check: E relative to 1 + E, Bloch products absolute (x10)
  int max_depth = 10;
};

/// One Chebyshev node of a panel: band data and the normalized Bloch state.
struct ChartNode {
  double k = 0.0;
  double weight = 0.0;  // Fejer weight scaled to the panel
  BandPoint<double> point;
  BlochState bloch;        // psi_k
  BlochState bloch_minus;  // psi_{-k} from the e^{-ik} eigenvector
};

struct ChartPanel {
  int band = 0;
  double k0 = 0.0, k1 = 0.0;
  std::size_t first = 0;  // index of the first node
  double error = 0.0;     // check-point error: E relative to 1 + E, Bloch products / 10
};

/// Piecewise Chebyshev representation of E(k) and psi_k over k >= 0, band by band.
/// Negative k uses E(-k) = E(k) and psi_{-k} = conj(psi_k).
struct Chart {
  static constexpr int order = 16;
  ChartOptions options;
  int bands = 0;
  std::vector<ChartPanel> panels;
  std::vector<ChartNode> nodes;
  std::vector<std::vector<double>> partition_k;  // per band: the four partition points that fall inside
  std::vector<double> inflection_k;              // per band; NaN when not located
  double interpolation_error = 0.0;              // worst check-point error times min(1, width / max_width)
  double mirror_defect = 0.0;                    // |psi_{-k} - conj psi_k| from the e^{-ik} eigenvector

  double k_max() const;
  /// Panel ids belonging to band n, in increasing k.
  std::vector<std::size_t> band_panels(int n) const;
  /// Barycentric row for reference coordinate s in [-1, 1].
  std::array<double, order> interpolation_row(double s) const;
  double E(double k) const;
  double Edot(double k) const;
};

Chart build_chart(const BandStructure<double>& bs, const ChartOptions& opt = {});

/// Band data and Bloch state at a single k >= 0 (the work done per chart node).
ChartNode chart_node(const BandStructure<double>& bs, double k, int band);

}  // namespace hillwave
