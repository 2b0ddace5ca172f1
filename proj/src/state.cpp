#include "rbk/state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbk/errors.hpp"

namespace rbk {

double moment(std::span<const double> f, double p) {
  if (p < 0.0) throw std::invalid_argument("moment order must be >= 0");
  double acc = 0.0;
  if (p == 0.0) {
    for (double v : f) acc += v;
  } else if (p == 1.0) {
    for (std::size_t k = 0; k < f.size(); ++k) acc += static_cast<double>(k + 1) * f[k];
  } else if (p == 0.5) {
    for (std::size_t k = 0; k < f.size(); ++k) acc += std::sqrt(static_cast<double>(k + 1)) * f[k];
  } else {
    for (std::size_t k = 0; k < f.size(); ++k) acc += std::pow(static_cast<double>(k + 1), p) * f[k];
  }
  return acc;
}

double moment(const StateVector& s, double p) { return moment(std::span<const double>(s.f), p); }

MomentVector moments_of(std::span<const double> f) {
  MomentVector m;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double i = static_cast<double>(k + 1);
    m.m0 += f[k];
    m.mhalf += std::sqrt(i) * f[k];
    m.m1 += i * f[k];
  }
  return m;
}

MomentVector moments_of(const StateVector& s) { return moments_of(std::span<const double>(s.f)); }

InitialData InitialData::monodisperse(std::size_t size, double density) {
  InitialData d;
  d.family = InitFamily::Monodisperse;
  d.size = size;
  d.density = density;
  return d;
}

InitialData InitialData::geometric(double ratio, double density) {
  InitialData d;
  d.family = InitFamily::Geometric;
  d.ratio = ratio;
  d.density = density;
  return d;
}

InitialData InitialData::heavy_tail(double exponent, double density) {
  InitialData d;
  d.family = InitFamily::HeavyTail;
  d.exponent = exponent;
  d.density = density;
  return d;
}

InitialData InitialData::explicit_table(std::vector<double> values) {
  InitialData d;
  d.family = InitFamily::ExplicitTable;
  d.table = std::move(values);
  return d;
}

double power_tail_sum(std::size_t n, double p) {
  if (!(p > 1.0)) return std::numeric_limits<double>::infinity();
  double x = static_cast<double>(n);
  // Euler-Maclaurin through the first correction terms; ample for reporting.
  return std::pow(x, 1.0 - p) / (p - 1.0) - 0.5 * std::pow(x, -p) +
         p / 12.0 * std::pow(x, -p - 1.0);
}

InitResult init_state(const InitialData& spec, std::size_t n) {
  if (n < 2) throw ConfigError("truncation size n must be >= 2");

  InitResult r;
  r.state.n = n;
  r.state.t = 0.0;
  r.state.f.assign(n, 0.0);

  switch (spec.family) {
    case InitFamily::Monodisperse: {
      if (spec.size < 1 || spec.size > n)
        throw ConfigError("monodisperse size must lie in [1, n]");
      if (!(spec.density >= 0.0)) throw ConfigError("density must be nonnegative");
      r.state.f[spec.size - 1] = spec.density;
      break;
    }
    case InitFamily::Geometric: {
      double q = spec.ratio, a = spec.density;
      if (!(q > 0.0 && q < 1.0)) throw ConfigError("geometric ratio must lie in (0,1)");
      if (!(a >= 0.0)) throw ConfigError("density must be nonnegative");
      for (std::size_t i = 1; i <= n; ++i)
        r.state.f[i - 1] = a * (1.0 - q) * std::pow(q, static_cast<double>(i - 1));
      r.discarded_number = a * std::pow(q, static_cast<double>(n));
      // sum_{i>n} i a (1-q) q^(i-1) = a q^n ((n+1)(1-q) + q) / (1-q)
      r.discarded_mass = a * std::pow(q, static_cast<double>(n)) *
                         ((static_cast<double>(n) + 1.0) * (1.0 - q) + q) / (1.0 - q);
      break;
    }
    case InitFamily::HeavyTail: {
      double p = spec.exponent, a = spec.density;
      if (!(p > 1.0 && p <= 2.0)) throw ConfigError("heavy-tail exponent must lie in (1, 2]");
      if (!(a >= 0.0)) throw ConfigError("density must be nonnegative");
      for (std::size_t i = 1; i <= n; ++i)
        r.state.f[i - 1] = a * std::pow(static_cast<double>(i), -p);
      r.discarded_number = a * power_tail_sum(n, p);
      r.discarded_mass = a * power_tail_sum(n, p - 1.0);  // +inf for p <= 2
      break;
    }
    case InitFamily::ExplicitTable: {
      for (double v : spec.table)
        if (!(v >= 0.0)) throw ConfigError("explicit initial table entries must be nonnegative");
      for (std::size_t k = 0; k < spec.table.size(); ++k) {
        if (k < n) {
          r.state.f[k] = spec.table[k];
        } else {
          r.discarded_number += spec.table[k];
          r.discarded_mass += static_cast<double>(k + 1) * spec.table[k];
        }
      }
      break;
    }
  }
  return r;
}

}  // namespace rbk
