#ifndef RBK_RHS_HPP
#define RBK_RHS_HPP

#include <optional>
#include <span>
#include <vector>

#include "rbk/correlate.hpp"
#include "rbk/kernel.hpp"
#include "rbk/state.hpp"

namespace rbk {

enum class RhsPath { Naive, Fast, Auto };

struct Derivative {
  std::vector<double> d;
};

// Reference evaluation by direct double loops:
//   d_i = sum_{j<=n-i} theta_{i+j,j} f_{i+j} f_j - sum_{j<=n} theta_{i,j} f_i f_j.
// Accepts negative entries (positivity is the integrator's contract).
Derivative rhs_naive(const StateVector& state, const KernelSpec& kernel);

// Reusable evaluator: precomputes omega_1..omega_n once and, for families
// whose kappa is constant or zero, evaluates the birth sums by FFT
// correlation in O(n log n). Other families fall back to the double loop
// (fast_active() reports which path is live). One evaluator per worker;
// distinct instances may run concurrently.
class RhsEvaluator {
 public:
  RhsEvaluator(const KernelSpec& kernel, std::size_t n, RhsPath path = RhsPath::Auto);

  std::size_t size() const { return n_; }
  bool fast_active() const { return fast_; }
  const KernelSpec& kernel() const { return kernel_; }
  std::span<const double> omega() const { return omega_; }

  // d_i = birth_i - f_i * death_rate_i with
  //   birth_i      = sum_{j<=n-i} theta_{i+j,j} f_{i+j} f_j
  //   death_rate_i = sum_{j<=n} theta_{i,j} f_j
  void parts(std::span<const double> f, std::span<double> birth, std::span<double> death_rate);
  void derivative(std::span<const double> f, std::span<double> d);

 private:
  KernelSpec kernel_;
  std::size_t n_;
  bool fast_;
  std::vector<double> omega_;
  std::optional<CorrelationPlan> plan_;
  std::vector<double> g_, corr_;
};

// One-shot fast evaluation; *fell_back reports a naive fallback when the
// family has no separable fast path.
Derivative rhs_fast(const StateVector& state, const KernelSpec& kernel, bool* fell_back = nullptr);

}  // namespace rbk

#endif
