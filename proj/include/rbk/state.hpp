#ifndef RBK_STATE_HPP
#define RBK_STATE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rbk {

// Densities f_1..f_n at a time instant. f[k] holds f_{k+1}. Snapshots are
// immutable once handed out; mutation happens only inside integrator buffers.
struct StateVector {
  std::size_t n = 0;
  double t = 0.0;
  std::vector<double> f;
};

struct MomentVector {
  double m0 = 0.0;     // total number density
  double mhalf = 0.0;  // sum i^(1/2) f_i
  double m1 = 0.0;     // total mass density
};

// Sum over i of i^p f_i. p = 0, 1/2, 1 take exact fast paths.
double moment(std::span<const double> f, double p);
double moment(const StateVector& s, double p);

MomentVector moments_of(std::span<const double> f);
MomentVector moments_of(const StateVector& s);

enum class InitFamily { Monodisperse, Geometric, HeavyTail, ExplicitTable };

struct InitialData {
  InitFamily family = InitFamily::Monodisperse;
  std::size_t size = 1;     // Monodisperse cluster size
  double density = 1.0;     // a: Monodisperse density / Geometric total number / HeavyTail amplitude
  double ratio = 0.5;       // Geometric q in (0,1)
  double exponent = 1.5;    // HeavyTail p: f_i = a * i^(-p), 1 < p <= 2
  std::vector<double> table;

  static InitialData monodisperse(std::size_t size, double density);
  static InitialData geometric(double ratio, double density);
  static InitialData heavy_tail(double exponent, double density = 1.0);
  static InitialData explicit_table(std::vector<double> values);
};

// Densities beyond the truncation are discarded; both tails are reported so
// refinement studies can interpret convergence. discarded_mass is +inf for
// HeavyTail exponents <= 2.
struct InitResult {
  StateVector state;
  double discarded_number = 0.0;
  double discarded_mass = 0.0;
};

InitResult init_state(const InitialData& spec, std::size_t n);

// Sum over i > n of i^(-p), p > 1 (Euler-Maclaurin; used for tail reporting).
double power_tail_sum(std::size_t n, double p);

}  // namespace rbk

#endif
