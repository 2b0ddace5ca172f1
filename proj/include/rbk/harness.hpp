#ifndef RBK_HARNESS_HPP
#define RBK_HARNESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbk/integrate.hpp"
#include "rbk/kernel.hpp"
#include "rbk/rhs.hpp"
#include "rbk/state.hpp"

namespace rbk {

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t n_paired = 0;
  // max over sample times of sum_{i<=n} i |f_i^(n) - f_i^(paired)| and the
  // unweighted counterpart sum |df_i|.
  double metric_x1 = 0.0;
  double metric_x0 = 0.0;
  double discarded_number = 0.0;  // of the smaller run's initial data
  double discarded_mass = 0.0;
  double m1_initial = 0.0;  // M1(0) of the smaller run
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool decreasing = true;  // flags non-decreasing X1 difference sequences
};

// Runs each n with identical integrator settings and reports successive
// differences. Initial families that do not extend with n (Monodisperse,
// ExplicitTable) are rejected as vacuous.
ConvergenceTable convergence_study(const InitialData& init, const KernelSpec& kernel,
                                   const IntegratorConfig& cfg, std::span<const std::size_t> n_list,
                                   RhsPath path = RhsPath::Auto);

struct DecayFit {
  double slope = 0.0;  // least-squares slope of log M1 vs log t
  double t_lo = 0.0, t_hi = 0.0;
  std::size_t count = 0;
  bool sentinel = false;  // M1 hit zero inside the window: slope = -inf
};

// Fit over the last decade of sample times (t >= t_end / 10).
DecayFit decay_exponent(const TimeSeries& series);

struct BenchRow {
  std::size_t n = 0;
  std::string family;
  std::string path;  // "naive" | "fast" | "fast(fallback)"
  double median_seconds = 0.0;
  double speedup = 1.0;  // vs naive at the same (n, family)
};

struct BenchTable {
  std::vector<BenchRow> rows;
};

// Times both RHS paths on identical random states. Equivalence (relative
// 1e-10 in the max norm) is verified before any timing row is emitted;
// a violation aborts the benchmark.
BenchTable bench_rhs(std::span<const std::size_t> n_list, std::span<const KernelSpec> kernels,
                     std::size_t evals = 15, std::uint64_t seed = 0x5eedu);

}  // namespace rbk

#endif
