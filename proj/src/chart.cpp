#include "hillwave/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hillwave/errors.hpp"
#include "hillwave/parallel.hpp"
#include "hillwave/quadrature.hpp"

namespace hillwave {

namespace {

constexpr double kPi = std::numbers::pi;

const quad::Rule& ref_rule() { return quad::chebyshev_fejer(Chart::order); }

const Eigen::VectorXd& ref_bary() {
  static const Eigen::VectorXd bw = quad::barycentric_weights(ref_rule().nodes);
  return bw;
}

// sample points for the gauge-invariant product check
constexpr std::array<std::array<double, 2>, 3> kPairs{{{0.0, 0.5}, {0.3, 0.8}, {0.1, 0.1}}};

std::array<cplx, 3> products(const BlochState& st) {
  std::array<cplx, 3> out;
  for (std::size_t i = 0; i < kPairs.size(); ++i)
    out[i] = std::conj(st.periodic(kPairs[i][0])) * st.periodic(kPairs[i][1]);
  return out;
}

struct BandWork {
  std::vector<ChartPanel> panels;
  std::vector<ChartNode> nodes;
  std::vector<double> partition;
  double inflection = std::numeric_limits<double>::quiet_NaN();
  double error = 0.0;
  double mirror = 0.0;
};

class BandBuilder {
 public:
  BandBuilder(const BandStructure<double>& bs, const ChartOptions& opt, int n, BandWork& out)
      : bs_(bs), opt_(opt), n_(n), out_(out) {}

  void panel(double k0, double k1, int depth) {
    const auto& rule = ref_rule();
    const double mid = (k0 + k1) / 2, half = (k1 - k0) / 2;
    std::vector<ChartNode> nodes;
    nodes.reserve(Chart::order);
    for (int j = 0; j < Chart::order; ++j) {
      auto node = chart_node(bs_, mid + half * rule.nodes[j], n_);
      node.weight = half * rule.weights[j];
      nodes.push_back(std::move(node));
    }

    double err = 0.0;
    for (double s : {-0.5372, 0.6418}) {
      const auto probe = chart_node(bs_, mid + half * s, n_);
      std::array<double, Chart::order> E{};
      std::array<std::array<cplx, 3>, Chart::order> B{};
      for (int j = 0; j < Chart::order; ++j) {
        E[j] = nodes[j].point.E;
        B[j] = products(nodes[j].bloch);
      }
      const double Ei = quad::barycentric(rule.nodes, ref_bary(), E, s);
      err = std::max(err, std::abs(Ei - probe.point.E) / (1.0 + std::abs(probe.point.E)));
      const auto Bp = products(probe.bloch);
      for (std::size_t i = 0; i < Bp.size(); ++i) {
        std::array<cplx, Chart::order> col{};
        for (int j = 0; j < Chart::order; ++j) col[j] = B[j][i];
        const cplx Bi = quad::barycentric(rule.nodes, ref_bary(), col, s);
        err = std::max(err, std::abs(Bi - Bp[i]) / 10.0);
      }
    }
    // errors count in proportion to the panel width; very narrow edge panels carry the
    // conditioning noise of k(w) and contribute nothing measurable to k-integrals
    const double weighted = err * std::min(1.0, (k1 - k0) / opt_.max_width);
    if (weighted > opt_.tol && depth < opt_.max_depth) {
      panel(k0, mid, depth + 1);
      panel(mid, k1, depth + 1);
      return;
    }
    out_.error = std::max(out_.error, weighted);
    ChartPanel p;
    p.band = n_;
    p.k0 = k0;
    p.k1 = k1;
    p.first = out_.nodes.size();
    p.error = err;
    out_.panels.push_back(p);
    for (auto& node : nodes) out_.nodes.push_back(std::move(node));
  }

  void run() {
    const double klo = kPi * n_, khi = kPi * (n_ + 1);
    const double wlo = bs_.band_lo(n_), whi = bs_.band_hi(n_), W = whi - wlo;
    std::vector<double> wb;  // breakpoints in w, strictly inside the band
    auto inside = [&](double w) { return w > wlo && w < whi; };

    const bool left_open = n_ >= 1 && !bs_.gap(n_).empty;
    const bool right_open = !bs_.gap(n_ + 1).empty;
    const double gl = left_open ? bs_.gap(n_).length : 0.0;
    const double gr = right_open ? bs_.gap(n_ + 1).length : 0.0;
    std::vector<double> part;
    if (left_open) {
      part.push_back(wlo + opt_.c * gl);
      part.push_back(wlo + std::pow(gl, 0.25));
      for (double d = W / 4; d >= opt_.edge_floor * gl; d *= opt_.edge_ratio) wb.push_back(wlo + d);
    }
    if (right_open) {
      part.push_back(whi - std::pow(gr, 0.6));
      part.push_back(whi - opt_.c * gr);
      for (double d = W / 4; d >= opt_.edge_floor * gr; d *= opt_.edge_ratio) wb.push_back(whi - d);
    }
    std::vector<double> kb{klo, khi};
    for (double w : part)
      if (inside(w)) {
        const double k = band_point(bs_, w, 1, n_).k;
        out_.partition.push_back(k);
        kb.push_back(k);
      }
    for (double w : wb)
      if (inside(w)) kb.push_back(band_point(bs_, w, 1, n_).k);
    if (left_open && right_open) {
      const auto inf = inflection_point(bs_, n_);
      if (inf.found) {
        out_.inflection = inf.k;
        kb.push_back(inf.k);
      }
    }
    std::sort(kb.begin(), kb.end());
    std::vector<double> uniq;
    for (double k : kb) {
      if (k < klo || k > khi) continue;
      if (!uniq.empty() && k - uniq.back() <= 1e-12 * (1.0 + k)) continue;
      uniq.push_back(k);
    }
    if (uniq.back() < khi) uniq.back() = khi;

    std::vector<double> cuts{uniq.front()};
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
      const double a = uniq[i], b = uniq[i + 1];
      int m = std::max(1, static_cast<int>(std::ceil((b - a) / opt_.max_width - 1e-12)));
      if (opt_.t_resolve > 0.0) {
        const double dE = std::abs(std::pow(w_of_k(bs_, b), 2) - std::pow(w_of_k(bs_, a), 2));
        m = std::max(m, static_cast<int>(std::ceil(1.5 * opt_.t_resolve * dE / kPi)));
      }
      for (int j = 1; j <= m; ++j) cuts.push_back(j == m ? b : a + (b - a) * j / m);
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) panel(cuts[i], cuts[i + 1], 0);

    // psi_{-k} from the e^{-ik} eigenvector against conj(psi_k)
    const double km = (klo + khi) / 2;
    const double w = w_of_k(bs_, km);
    SolveOptions so;
    so.e_order = 1;
    so.grams = true;
    so.dense = true;
    const auto pm = solve_period(bs_.problem, w * w, so);
    const auto bp = band_point(bs_, disc_jet(pm, w), 1, n_);
    const auto plus = bloch_state(pm, bp), minus = bloch_state(pm, bp, true);
    for (double x : {0.1, 0.5, 0.9, 1.7})
      out_.mirror = std::max(out_.mirror, std::abs(minus(x) - std::conj(plus(x))));
  }

 private:
  const BandStructure<double>& bs_;
  const ChartOptions& opt_;
  int n_;
  BandWork& out_;
};

}  // namespace

ChartNode chart_node(const BandStructure<double>& bs, double k, int band) {
  const double w = w_of_k(bs, k);
  SolveOptions so;
  so.e_order = 3;
  so.grams = true;
  so.dense = true;
  const auto pm = solve_period(bs.problem, w * w, so);
  ChartNode node;
  node.k = k;
  node.point = band_point(bs, disc_jet(pm, w), 3, band);
  node.bloch = bloch_state(pm, node.point);
  node.bloch_minus = bloch_state(pm, node.point, true);
  return node;
}

Chart build_chart(const BandStructure<double>& bs, const ChartOptions& opt) {
  if (opt.bands < 0) throw ValidationError("build_chart: bands must be nonnegative");
  if (bs.n_max() < opt.bands + 1)
    throw ValidationError("build_chart: band structure must cover gaps 1.." + std::to_string(opt.bands + 1));
  if (!(opt.max_width > 0.0) || !(opt.tol > 0.0) || !(opt.c > 0.0))
    throw ValidationError("build_chart: max_width, tol and c must be positive");
  if (!(opt.edge_ratio > 0.0 && opt.edge_ratio < 1.0)) throw ValidationError("build_chart: edge_ratio in (0, 1)");

  std::vector<BandWork> work(opt.bands + 1);
  parallel_for(work.size(), [&](std::size_t n) { BandBuilder(bs, opt, static_cast<int>(n), work[n]).run(); });

  Chart ch;
  ch.options = opt;
  ch.bands = opt.bands;
  for (auto& w : work) {
    const std::size_t offset = ch.nodes.size();
    for (auto p : w.panels) {
      p.first += offset;
      ch.panels.push_back(p);
    }
    for (auto& node : w.nodes) ch.nodes.push_back(std::move(node));
    ch.partition_k.push_back(w.partition);
    ch.inflection_k.push_back(w.inflection);
    ch.interpolation_error = std::max(ch.interpolation_error, w.error);
    ch.mirror_defect = std::max(ch.mirror_defect, w.mirror);
  }
  return ch;
}

double Chart::k_max() const { return kPi * (bands + 1); }

std::vector<std::size_t> Chart::band_panels(int n) const {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < panels.size(); ++i)
    if (panels[i].band == n) ids.push_back(i);
  return ids;
}

std::array<double, Chart::order> Chart::interpolation_row(double s) const {
  const auto& x = ref_rule().nodes;
  const auto& bw = ref_bary();
  std::array<double, order> row{};
  double den = 0.0;
  for (int j = 0; j < order; ++j) {
    const double d = s - x[j];
    if (d == 0.0) {
      row.fill(0.0);
      row[j] = 1.0;
      return row;
    }
    row[j] = bw[j] / d;
    den += row[j];
  }
  for (auto& r : row) r /= den;
  return row;
}

namespace {

template <typename F>
double chart_eval(const Chart& ch, double k, F value) {
  const double ak = std::abs(k);
  if (ak > ch.k_max() * (1 + 1e-14)) throw DomainError("chart: k beyond the charted range");
  auto it = std::upper_bound(ch.panels.begin(), ch.panels.end(), ak,
                             [](double v, const ChartPanel& p) { return v < p.k0; });
  if (it != ch.panels.begin()) --it;
  const auto& p = *it;
  const double s = std::clamp((2 * ak - p.k0 - p.k1) / (p.k1 - p.k0), -1.0, 1.0);
  const auto row = ch.interpolation_row(s);
  double v = 0.0;
  for (int j = 0; j < Chart::order; ++j) v += row[j] * value(ch.nodes[p.first + j]);
  return v;
}

}  // namespace

double Chart::E(double k) const {
  return chart_eval(*this, k, [](const ChartNode& n) { return n.point.E; });
}

double Chart::Edot(double k) const {
  const double v = chart_eval(*this, k, [](const ChartNode& n) { return n.point.Edot; });
  return k < 0 ? -v : v;
}

}  // namespace hillwave
