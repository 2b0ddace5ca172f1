#ifndef RBK_DIAGNOSTICS_HPP
#define RBK_DIAGNOSTICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbk/integrate.hpp"
#include "rbk/kernel.hpp"
#include "rbk/rhs.hpp"
#include "rbk/state.hpp"

namespace rbk {

// One-sided multiplicative slacks, sized so a proved inequality never fails
// from discretization noise at default integrator settings.
inline constexpr double kMonotoneSlack = 1e-8;    // moment monotonicity
inline constexpr double kIntegralSlack = 1e-6;    // number-plus-dissipation, decay bound
inline constexpr double kQuadratureSlack = 1e-4;  // trapezoid-quadrature bounds
inline constexpr double kAlgebraicTol = 1e-12;    // machine-precision identities

enum class PsiPreset { Ones, Linear, Sqrt };

std::vector<double> make_psi(PsiPreset preset, std::size_t n);

// L - R for the weighted collision identity over {m..n}:
//   L = sum_{i=m..n} psi_i d_i,
//   R = -sum_{T1} (psi_i - psi_{i-j}) theta_{i,j} f_i f_j
//       -sum_{T2} psi_i theta_{i,j} f_i f_j,
//   T1 = {m<=i<=n, 1<=j<=i-m},  T2 = {m<=i<=n, max(1,i-m+1)<=j<=n}.
// Pure round-off for any nonnegative psi and 1 <= m <= n.
double weak_form_residual(const StateVector& state, const KernelSpec& kernel,
                          std::span<const double> psi, std::size_t m);

// Mass-rate identity with the equal-size diagonal restored:
//   sum_i i d_i = sum_{i>j} ((i-j)-i-j) theta_{i,j} f_i f_j - sum_i i theta_{i,i} f_i^2.
double corrected_m1_identity_residual(const StateVector& state, const KernelSpec& kernel);

// Gap of the diagonal-free m=1 display: returns
//   sum_{i>j} (psi_{i-j}-psi_i-psi_j) theta_{i,j} f_i f_j - sum_i psi_i d_i,
// which equals diagonal_weighted_sum (the dropped equal-size term) up to
// round-off. Kept as a regression of the documented discrepancy.
double m1_display_gap(const StateVector& state, const KernelSpec& kernel,
                      std::span<const double> psi);

// sum_i psi_i theta_{i,i} f_i^2
double diagonal_weighted_sum(const StateVector& state, const KernelSpec& kernel,
                             std::span<const double> psi);

struct CheckRecord {
  std::string name;
  std::string scope;  // "state" | "trajectory"
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool applicable = true;  // false = "not applicable" / "not evaluated"
  std::string citation;    // the inequality or identity being checked
};

struct DiagnosticsReport {
  std::vector<CheckRecord> checks;  // ordered by name
  bool overall = true;
};

CheckRecord check_mass_monotone(const TimeSeries& series);
CheckRecord check_sqrt_moment_monotone(const TimeSeries& series);
CheckRecord check_number_dissipation(const TimeSeries& series);
CheckRecord check_tail_l2(const TimeSeries& series, const KernelSpec& kernel, std::size_t r,
                          double t1, double t2);
CheckRecord check_decay_bound(const TimeSeries& series, const HypothesisClass& hyp);
CheckRecord check_w11(const TimeSeries& series, const HypothesisClass& hyp);
CheckRecord check_support_invariance(const TimeSeries& series, double negativity_tol = 1e-12);

struct SuiteOptions {
  std::vector<std::size_t> tail_r = {1, 4, 16};
  std::size_t random_checks = 200;
  std::uint64_t rng_seed = 0x5eedu;
  double negativity_tol = 1e-12;
  std::size_t probe_depth = 64;
};

// Every applicable trajectory check plus random-state algebraic residuals,
// aggregated into a deterministic, name-ordered report.
DiagnosticsReport run_suite(const TimeSeries& series, const KernelSpec& kernel,
                            const SuiteOptions& options = {});

// One record per line: name scope residual tolerance pass citation.
std::string format_report(const DiagnosticsReport& report);

}  // namespace rbk

#endif
