#include "hillwave/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hillwave/errors.hpp"
#include "hillwave/kernel.hpp"
#include "hillwave/parallel.hpp"
#include "hillwave/transform.hpp"

namespace hillwave {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(std::ostream& os, std::initializer_list<const char*> header) : os_(os) {
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
  }
  template <typename... T>
  void row(const T&... v) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(v), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::ostream& os_;
};

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw ValidationError("not a finite number: '" + s + "'");
  return v;
}

/// "a:b:N" (N points, ends included), "a:b:logN" (log-spaced), "v1,v2,..." or a single value.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("grid '" + spec + "' must be a:b:N or a:b:logN");
    const double a = parse_number(parts[0]), b = parse_number(parts[1]);
    bool log = parts[2].rfind("log", 0) == 0;
    const double nd = parse_number(log ? parts[2].substr(3) : parts[2]);
    if (nd < 1 || nd != std::floor(nd) || nd > 1e7) throw ValidationError("grid '" + spec + "': bad point count");
    const int n = static_cast<int>(nd);
    if (log && !(a > 0 && b > 0)) throw ValidationError("grid '" + spec + "': log grid needs positive ends");
    for (int i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(log ? std::exp(std::log(a) + s * (std::log(b) - std::log(a))) : a + s * (b - a));
    }
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p));
  }
  if (out.empty()) throw ValidationError("empty grid");
  return out;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be positive");
}

struct Config {
  std::string potential_path;
  std::string output_path;
  int threads = 0;
  unsigned seed = 20240521u;
  int n_max = 20;
  std::string precision = "double";
  int bands = 12;
  int points = 64;
  double tol = 1e-10;
  std::string w_grid = "0.5:12:24";
  std::string x_grid;
  std::string t_grid = "1:64:log16";
  std::optional<double> w, k;
  int band = -1;
  double t = 1.0, x = 0.0, y = 0.0;
  double sigma = 1.0, y0 = 0.0, k0 = 0.0;
  bool error_estimate = false;
};

PeriodicPotential load(const Config& c) {
  if (c.potential_path.empty()) return PeriodicPotential{};
  return load_potential_json(c.potential_path);
}

BandStructure<double> structure(const Config& c, int n_max) {
  if (n_max < 1) throw ValidationError("n-max must be at least 1");
  return band_edges<double>(load(c), n_max);
}

Chart chart_for(const BandStructure<double>& bs, const Config& c) {
  if (c.bands < 0) throw ValidationError("bands must be nonnegative");
  require_positive(c.tol, "tol");
  ChartOptions opt;
  opt.bands = c.bands;
  opt.tol = c.tol;
  return build_chart(bs, opt);
}

// ---------------------------------------------------------------------------

template <typename S>
void spectrum_rows(const Config& c, std::ostream& out) {
  const auto bs = band_edges<S>(load(c), c.n_max);
  Csv csv(out, {"n", "band_lo_w", "band_hi_w", "band_lo_E", "band_hi_E", "gap_a_minus_w", "gap_a_plus_w",
                "gap_a_minus_E", "gap_a_plus_E", "gap_length_w", "gap_height", "gap_empty", "ell", "e0"});
  const double e0 = -to_double(S(bs.shift));
  for (int n = 0; n < bs.n_max(); ++n) {
    const auto& g = bs.gap(n + 1);
    const double lo = to_double(bs.band_lo(n)), hi = to_double(bs.band_hi(n));
    const double am = to_double(g.a_minus), ap = to_double(g.a_plus);
    csv.row(n, lo, hi, lo * lo, hi * hi, am, ap, am * am, ap * ap, to_double(g.length), to_double(g.height),
            g.empty ? 1 : 0, g.ell, e0);
  }
}

int cmd_spectrum(const Config& c, std::ostream& out) {
  if (c.n_max < 1) throw ValidationError("n-max must be at least 1");
  if (c.precision == "high")
    spectrum_rows<HighPrecision>(c, out);
  else
    spectrum_rows<double>(c, out);
  return 0;
}

int cmd_discriminant(const Config& c, std::ostream& out) {
  const auto w = parse_grid(c.w_grid);
  const auto bs = structure(c, 1);
  Csv csv(out, {"w", "D", "D_w"});
  for (double wi : w) {
    const auto d = discriminant(bs.potential, wi);
    csv.row(wi, d.d, d.d_prime);
  }
  return 0;
}

int cmd_bands(const Config& c, std::ostream& out) {
  if (c.bands < 0) throw ValidationError("bands must be nonnegative");
  if (c.points < 1) throw ValidationError("points must be positive");
  const auto bs = structure(c, c.bands + 1);
  Csv csv(out, {"n", "k", "w", "E", "Edot", "Eddot", "Edddot", "k_n"});
  for (int n = 0; n <= c.bands; ++n) {
    const auto infl = inflection_point(bs, n);
    const double kn = infl.found ? infl.k : std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < c.points; ++j) {
      const double k = (n + (j + 0.5) / c.points) * kPi;
      const auto bp = band_function(bs, k, 3);
      csv.row(n, k, bp.w, bp.E, bp.Edot, bp.Eddot, bp.Edddot, kn);
    }
  }
  return 0;
}

int cmd_bloch(const Config& c, std::ostream& out) {
  if (c.w.has_value() == c.k.has_value()) throw ValidationError("bloch: give exactly one of --w, --k");
  const double probe = c.w ? *c.w : *c.k;
  if (!(probe >= 0.0)) throw ValidationError("bloch: w and k must be nonnegative");
  const int n_max = static_cast<int>(std::ceil(1.2 * probe / kPi)) + 2;
  const auto bs = structure(c, n_max);
  const double w = c.w ? *c.w : w_of_k(bs, *c.k);
  const auto x = c.x_grid.empty() ? parse_grid("0:1:101") : parse_grid(c.x_grid);
  const auto ev = bloch_pair(bs, w, x, c.band);
  Csv csv(out, {"x", "re_bloch_plus", "im_bloch_plus", "re_m0_plus", "im_m0_plus"});
  for (std::size_t i = 0; i < ev.x.size(); ++i)
    csv.row(ev.x[i], ev.bloch_plus[i].real(), ev.bloch_plus[i].imag(), ev.m0_plus[i].real(), ev.m0_plus[i].imag());
  return 0;
}

int cmd_evolve(const Config& c, std::ostream& out, std::ostream& err) {
  require_positive(c.sigma, "sigma");
  if (!(c.t >= 0.0)) throw ValidationError("t must be nonnegative");
  const auto x = c.x_grid.empty() ? parse_grid("-10:10:201") : parse_grid(c.x_grid);
  const auto bs = structure(c, c.bands + 1);
  const auto chart = chart_for(bs, c);
  const GaussianPacket g{c.sigma, c.y0, c.k0};
  const auto coeffs = forward(chart, gaussian_input(bs, g));
  const auto res = evolve(chart, coeffs, c.t, x);
  Csv csv(out, {"x", "re_u", "im_u", "abs_u"});
  for (std::size_t i = 0; i < x.size(); ++i) csv.row(x[i], res.u[i].real(), res.u[i].imag(), std::abs(res.u[i]));
  err << "evolve: parseval_defect " << num(coeffs.parseval_defect) << ", tail_indicator "
      << num(coeffs.tail_indicator) << ", error_estimate " << num(res.error_estimate) << '\n';
  return 0;
}

int cmd_kernel(const Config& c, std::ostream& out) {
  require_positive(c.t, "t");
  const auto bs = structure(c, c.bands + 1);
  const auto chart = chart_for(bs, c);
  const auto s = full_kernel(bs, chart, c.t, c.x, c.y);
  nlohmann::json j;
  j["t"] = s.t;
  j["x"] = s.x;
  j["y"] = s.y;
  j["value_re"] = s.value.real();
  j["value_im"] = s.value.imag();
  j["per_band"] = nlohmann::json::array();
  for (const auto& b : s.per_band)
    j["per_band"].push_back({{"n", b.n}, {"re", b.value.real()}, {"im", b.value.imag()}, {"error", b.error}});
  j["tail_re"] = s.tail.real();
  j["tail_im"] = s.tail.imag();
  j["tail_bound"] = std::isfinite(s.tail_bound) ? nlohmann::json(s.tail_bound) : nlohmann::json(nullptr);
  j["error_estimate"] = s.error_estimate;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_decay(const Config& c, std::ostream& out, std::ostream& err) {
  const auto t = parse_grid(c.t_grid);
  for (double ti : t) require_positive(ti, "t");
  const auto bs = structure(c, c.bands + 1);
  const auto chart = chart_for(bs, c);
  KernelOptions opt;
  opt.estimate_error = c.error_estimate;
  const auto rep = decay_report(bs, chart, t, default_decay_samples(chart), opt);
  Csv csv(out, {"t", "sup_abs", "ratio"});
  for (std::size_t i = 0; i < t.size(); ++i) csv.row(t[i], rep.sup_abs[i], rep.ratio[i]);
  err << "decay: " << rep.samples.size() << " samples, fitted C " << num(rep.fitted_C) << ", log-log slope "
      << num(rep.slope) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool gating = true;
};

int cmd_verify(const Config& c, std::ostream& out) {
  if (c.bands < 1) throw ValidationError("verify needs at least one band");
  const auto bs = structure(c, c.bands + 1);
  std::vector<Check> checks;
  auto worst = [](double& acc, double v) { acc = std::max(acc, std::isnan(v) ? INFINITY : v); };

  // floquet and quasimomentum on band midpoints
  std::vector<double> mids;
  for (int n = 1; n <= c.bands; ++n) mids.push_back(0.5 * (bs.band_lo(n) + bs.band_hi(n)));
  double wr = 0.0, round = 0.0;
  for (double w : mids) {
    worst(wr, fundamental_pair(bs.potential, w).wronskian_defect);
    worst(round, std::abs(k_of_w(bs, w_of_k(bs, k_of_w(bs, w))) - k_of_w(bs, w)));
  }
  checks.push_back({"wronskian", wr, 1e-10});
  checks.push_back({"k_round_trip", round, 1e-9});

  const auto rep = identity_suite(bs, mids);
  checks.push_back({"cos_k_minus_D", rep.worst.cos_residual, 1e-10});
  checks.push_back({"edot_phi_n2", rep.worst.edot_residual, 1e-6});
  checks.push_back({"dprime_w_phi_n2", rep.worst.dprime_corrected, 1e-6});
  checks.push_back({"dprime_4w_phi_n2", rep.worst.dprime_literal, 1e-6, false});
  checks.push_back({"bloch_normalization", rep.worst.normalization_residual, 1e-8});

  // chart, transform and kernel invariants
  Config cc = c;
  cc.bands = std::min(c.bands, 8);
  const auto chart = chart_for(bs, cc);
  checks.push_back({"chart_mirror", chart.mirror_defect, 1e-8});
  const auto coeffs = forward(chart, gaussian_input(bs, GaussianPacket{1.0, 0.2, 2.0}));
  checks.push_back({"parseval", coeffs.parseval_defect, 1e-6});

  std::mt19937 rng(c.seed);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), ut(0.25, 2.0);
  double sym = 0.0;
  KernelOptions kopt;
  kopt.estimate_error = false;
  for (int i = 0; i < 3; ++i) {
    const double t = ut(rng), x = ux(rng), y = ux(rng);
    const auto a = full_kernel(bs, chart, t, x, y, kopt);
    const auto b = full_kernel(bs, chart, t, y, x, kopt);
    worst(sym, std::abs(a.value - b.value) / std::max(1e-300, std::abs(a.value)));
  }
  checks.push_back({"kernel_symmetry", sym, 1e-8});

  Csv csv(out, {"check", "residual", "tolerance", "status", "gating"});
  bool ok = true;
  for (const auto& ch : checks) {
    const bool pass = ch.residual <= ch.tolerance;
    if (ch.gating && !pass) ok = false;
    csv.row(ch.name, ch.residual, ch.tolerance, std::string(pass ? "pass" : "fail"),
            std::string(ch.gating ? "yes" : "no"));
  }
  return ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Floquet-Bloch toolkit for the periodic Schroedinger operator"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--threads", c.threads, "worker threads (default: HILLWAVE_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--output,-o", c.output_path, "write to this file instead of stdout");
  app.add_option("--seed", c.seed, "seed for randomized checks");

  auto potential = [&](CLI::App* s) {
    s->add_option("--potential,-p", c.potential_path, "JSON potential {\"cosine\": [...], \"sine\": [...]}")
        ->check(CLI::ExistingFile);
  };
  auto bands = [&](CLI::App* s) {
    s->add_option("--bands", c.bands, "charted bands 0..N")->capture_default_str();
  };
  auto tol = [&](CLI::App* s) { s->add_option("--tol", c.tol, "chart tolerance")->capture_default_str(); };

  auto* spectrum = app.add_subcommand("spectrum", "band edges and gaps");
  potential(spectrum);
  spectrum->add_option("--n-max", c.n_max, "number of gaps")->capture_default_str();
  spectrum->add_option("--precision", c.precision)->check(CLI::IsMember({"double", "high"}))->capture_default_str();

  auto* disc = app.add_subcommand("discriminant", "D(w) and D'(w) of the shifted operator");
  potential(disc);
  disc->add_option("--w", c.w_grid, "w grid: a:b:N, a:b:logN or a list")->capture_default_str();

  auto* bnd = app.add_subcommand("bands", "band function and derivatives");
  potential(bnd);
  bands(bnd);
  bnd->add_option("--points", c.points, "samples per band")->capture_default_str();

  auto* bl = app.add_subcommand("bloch", "normalized Bloch solution on a grid");
  potential(bl);
  bl->add_option("--w", c.w);
  bl->add_option("--k", c.k);
  bl->add_option("--band", c.band, "force the band containing w");
  bl->add_option("--x", c.x_grid, "x grid (default 0:1:101)");

  auto* ev = app.add_subcommand("evolve", "e^{itH} applied to a Gaussian packet");
  potential(ev);
  bands(ev);
  tol(ev);
  ev->add_option("--sigma", c.sigma)->capture_default_str();
  ev->add_option("--y0", c.y0)->capture_default_str();
  ev->add_option("--k0", c.k0)->capture_default_str();
  ev->add_option("--t", c.t)->capture_default_str();
  ev->add_option("--x", c.x_grid, "x grid (default -10:10:201)");

  auto* ker = app.add_subcommand("kernel", "propagator kernel K(t, x, y)");
  potential(ker);
  bands(ker);
  tol(ker);
  ker->add_option("--t", c.t)->capture_default_str();
  ker->add_option("--x", c.x)->capture_default_str();
  ker->add_option("--y", c.y)->capture_default_str();

  auto* dec = app.add_subcommand("decay", "sup |K| over the sample set against max(t^-1/2, t^-1/3)");
  potential(dec);
  bands(dec);
  tol(dec);
  dec->add_option("--t", c.t_grid, "t grid")->capture_default_str();
  dec->add_flag("--error-estimate", c.error_estimate, "also run the quadrature error estimate");

  auto* ver = app.add_subcommand("verify", "identity checks with residuals");
  potential(ver);
  bands(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (c.threads > 0) set_threads(c.threads);

  std::ofstream file;
  if (!c.output_path.empty()) {
    file.open(c.output_path);
    if (!file) {
      err << "error: cannot open " << c.output_path << '\n';
      return 2;
    }
  }
  std::ostream& os = c.output_path.empty() ? out : file;
  os.precision(17);

  try {
    if (*spectrum) return cmd_spectrum(c, os);
    if (*disc) return cmd_discriminant(c, os);
    if (*bnd) return cmd_bands(c, os);
    if (*bl) return cmd_bloch(c, os);
    if (*ev) return cmd_evolve(c, os, err);
    if (*ker) return cmd_kernel(c, os);
    if (*dec) return cmd_decay(c, os, err);
    if (*ver) return cmd_verify(c, os);
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "outside the domain: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hillwave
