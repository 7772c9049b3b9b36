#include "hillwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hillwave/errors.hpp"
#include "json.hpp"

namespace hillwave {

namespace {

void check_finite(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw ValidationError(std::string("non-finite ") + name + " coefficient at index " +
                            std::to_string(i));
    }
  }
}

}  // namespace

int PeriodicPotential::max_harmonic() const {
  int L = 0;
  for (std::size_t l = 1; l < cosine.size(); ++l)
    if (cosine[l] != 0.0) L = std::max(L, static_cast<int>(l));
  for (std::size_t l = 0; l < sine.size(); ++l)
    if (sine[l] != 0.0) L = std::max(L, static_cast<int>(l) + 1);
  return L;
}

double PeriodicPotential::mean() const { return (cosine.empty() ? 0.0 : cosine[0]) + shift; }

std::complex<double> PeriodicPotential::fourier(int l) const {
  if (l == 0) return mean();
  const std::size_t a = static_cast<std::size_t>(std::abs(l));
  const double c = a < cosine.size() ? cosine[a] : 0.0;
  const double s = a - 1 < sine.size() ? sine[a - 1] : 0.0;
  // a cos + b sin = (a - i b)/2 e^{i.} + (a + i b)/2 e^{-i.}
  return l > 0 ? std::complex<double>(0.5 * c, -0.5 * s) : std::complex<double>(0.5 * c, 0.5 * s);
}

bool PeriodicPotential::is_zero() const {
  if (shift != 0.0) return false;
  return std::all_of(cosine.begin(), cosine.end(), [](double c) { return c == 0.0; }) &&
         std::all_of(sine.begin(), sine.end(), [](double s) { return s == 0.0; });
}

PeriodicPotential from_fourier(std::vector<double> cosine_coeffs, std::vector<double> sine_coeffs) {
  check_finite(cosine_coeffs, "cosine");
  check_finite(sine_coeffs, "sine");
  PeriodicPotential P;
  P.cosine = std::move(cosine_coeffs);
  P.sine = std::move(sine_coeffs);
  return P;
}

double eval(const PeriodicPotential& P, double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double v = P.mean();
  for (std::size_t l = 1; l < P.cosine.size(); ++l) v += P.cosine[l] * std::cos(two_pi * l * x);
  for (std::size_t l = 0; l < P.sine.size(); ++l) v += P.sine[l] * std::sin(two_pi * (l + 1) * x);
  return v;
}

double moment_q0(const PeriodicPotential& P) { return 0.5 * P.mean(); }

double moment_q2(const PeriodicPotential& P) {
  const double a0 = P.mean();
  double s = a0 * a0;
  for (std::size_t l = 1; l < P.cosine.size(); ++l) s += 0.5 * P.cosine[l] * P.cosine[l];
  for (double b : P.sine) s += 0.5 * b * b;
  return s / 8.0;
}

double coefficient_l1(const PeriodicPotential& P) {
  double s = std::abs(P.mean());
  for (std::size_t l = 1; l < P.cosine.size(); ++l) s += std::abs(P.cosine[l]);
  for (double b : P.sine) s += std::abs(b);
  return s;
}

double sup_norm(const PeriodicPotential& P) {
  const int L = P.max_harmonic();
  if (L == 0) return std::abs(P.mean());
  const int n = 64 * L;
  const double h = 1.0 / n;
  auto absP = [&](double x) { return std::abs(eval(P, x)); };
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xm = (i - 1) * h, x0 = i * h, xp = (i + 1) * h;
    const double f0 = absP(x0);
    best = std::max(best, f0);
    if (f0 < absP(xm) || f0 < absP(xp)) continue;
    // golden-section on the bracket around a sampled local maximum
    double a = xm, b = xp;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = absP(c), fd = absP(d);
    for (int it = 0; it < 60; ++it) {
      if (fc > fd) {
        b = d; d = c; fd = fc; c = b - g * (b - a); fc = absP(c);
      } else {
        a = c; c = d; fc = fd; d = a + g * (b - a); fd = absP(d);
      }
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

PeriodicPotential with_shift(PeriodicPotential P, double shift) {
  P.shift = shift;
  return P;
}

PeriodicPotential parse_potential_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("potential JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("potential JSON: expected an object");
  auto read = [&](const char* key) {
    std::vector<double> v;
    if (!j.contains(key)) return v;
    const auto& a = j.at(key);
    if (!a.is_array()) throw ValidationError(std::string("potential JSON: '") + key + "' must be an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number())
        throw ValidationError(std::string("potential JSON: non-numeric ") + key + " entry at index " +
                              std::to_string(i));
      v.push_back(a[i].get<double>());
    }
    return v;
  };
  return from_fourier(read("cosine"), read("sine"));
}

PeriodicPotential load_potential_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_potential_json(ss.str());
}

}  // namespace hillwave
