#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numeric paths.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

struct Moments {
  long double mean = 0, std = 0;
  std::optional<long double> skew, kurt;
};

/// Direct summation in extended precision over support points first..first+K-1.
inline Moments brute_force_moments(const std::vector<double>& pmf, int first_bin = 1) {
  Moments out;
  for (std::size_t k = 0; k < pmf.size(); ++k) out.mean += static_cast<long double>(first_bin + static_cast<int>(k)) * pmf[k];
  long double m2 = 0, m3 = 0, m4 = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const long double d = static_cast<long double>(first_bin + static_cast<int>(k)) - out.mean;
    m2 += pmf[k] * d * d;
    m3 += pmf[k] * d * d * d;
    m4 += pmf[k] * d * d * d * d;
  }
  out.std = std::sqrt(m2);
  if (m2 > 0) {
    out.skew = m3 / std::pow(m2, 1.5L);
    out.kurt = m4 / (m2 * m2);
  }
  return out;
}

/// Random pmf with independent uniform weights, some bins possibly zeroed.
inline std::vector<double> random_pmf(std::mt19937_64& rng, int bins, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(bins));
  double total = 0;
  for (double& x : w) {
    x = u(rng) < zero_prob ? 0.0 : u(rng);
    total += x;
  }
  if (total == 0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (double& x : w) x /= total;
  return w;
}

/// Closed-form mean of c * exp(-r U(0, umax)): (c / (r umax)) (1 - exp(-r umax)).
inline double attractor_mean(double c = 0.5, double r = 0.5, double umax = 10.0) {
  return c / (r * umax) * (1.0 - std::exp(-r * umax));
}

/// Standard normal cdf by composite Simpson quadrature of the density on [-12, x].
inline double normal_cdf_quadrature(double x) {
  if (x <= -12.0) return 0.0;
  const int n = 20000;
  const double a = -12.0, h = (x - a) / n;
  const auto f = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double s = f(a) + f(x);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
