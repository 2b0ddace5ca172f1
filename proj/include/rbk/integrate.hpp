#ifndef RBK_INTEGRATE_HPP
#define RBK_INTEGRATE_HPP

#include <cstdint>
#include <vector>

#include "rbk/kernel.hpp"
#include "rbk/rhs.hpp"
#include "rbk/state.hpp"

namespace rbk {

enum class Method { AdaptiveExplicit, SemiImplicit };

struct IntegratorConfig {
  Method method = Method::AdaptiveExplicit;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double dt_init = 0.0;  // 0 = auto
  double dt_min = 0.0;   // 0 = auto (1e-12 * t_end)
  double dt_max = 0.0;   // 0 = auto (t_end / 16)
  double negativity_tol = 1e-12;
  double t_end = 1.0;
  std::vector<double> sample_times;  // sorted, within [0, t_end]; empty = {0, t_end}
};

// t = 0 followed by `count` geometrically spaced times from t_min to t_end.
// t_min = 0 picks 1e-6 * t_end.
std::vector<double> geometric_sample_times(double t_end, std::size_t count, double t_min = 0.0);

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Sampled trajectory. Snapshots are stored per sample (clamped at zero);
// dissipation and clamped mass are running accumulators evaluated at the
// sample times; deriv_l1 holds the per-size integral of |df_i/dt| over the
// whole run, by trapezoid on accepted steps.
struct TimeSeries {
  std::size_t n = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<MomentVector> moments;
  std::vector<double> dissipation;
  std::vector<double> clamped_mass;
  std::vector<double> deriv_l1;
  MomentVector initial_moments;
  double discarded_number = 0.0;
  double discarded_mass = 0.0;
  StepStats stats;
  std::uint64_t config_digest = 0;
  std::uint64_t seed = 0;
  bool hypothesis_unclassified = false;
};

struct StepResult {
  StateVector next;
  double error = 0.0;  // max component-wise error ratio
  bool accepted = false;
  double clamped_mass = 0.0;
};

// One embedded explicit Runge-Kutta 5(4) step. Rejects when the error ratio
// exceeds 1, or when a component of the entry state or the candidate falls
// below -negativity_tol; on acceptance, components in [-negativity_tol, 0)
// are clamped to zero with the clamped mass reported.
StepResult step_adaptive(const StateVector& state, const KernelSpec& kernel, double dt,
                         const IntegratorConfig& cfg);

// f_i' = (f_i + dt * birth_i(f)) / (1 + dt * death_rate_i(f)); first order,
// unconditionally nonnegative for nonnegative input.
StateVector step_semi_implicit(const StateVector& state, const KernelSpec& kernel, double dt);

// Advances the truncated system to cfg.t_end, sampling by cubic Hermite
// dense output between accepted steps. Throws StiffnessError on dt
// underflow with persistent rejection.
TimeSeries integrate(const StateVector& init, const KernelSpec& kernel,
                     const IntegratorConfig& cfg, RhsPath path = RhsPath::Auto);
TimeSeries integrate(const InitResult& init, const KernelSpec& kernel,
                     const IntegratorConfig& cfg, RhsPath path = RhsPath::Auto);

}  // namespace rbk

#endif
