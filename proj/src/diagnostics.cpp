#include "rbk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rbk {

std::vector<double> make_psi(PsiPreset preset, std::size_t n) {
  std::vector<double> psi(n);
  for (std::size_t i = 1; i <= n; ++i) {
    switch (preset) {
      case PsiPreset::Ones: psi[i - 1] = 1.0; break;
      case PsiPreset::Linear: psi[i - 1] = static_cast<double>(i); break;
      case PsiPreset::Sqrt: psi[i - 1] = std::sqrt(static_cast<double>(i)); break;
    }
  }
  return psi;
}

double weak_form_residual(const StateVector& state, const KernelSpec& kernel,
                          std::span<const double> psi, std::size_t m) {
  const std::size_t n = state.n;
  if (m < 1 || m > n) throw std::invalid_argument("weak form: m must lie in [1, n]");
  if (psi.size() != n) throw std::invalid_argument("weak form: psi length mismatch");

  const Derivative d = rhs_naive(state, kernel);
  double lhs = 0.0;
  for (std::size_t i = m; i <= n; ++i) lhs += psi[i - 1] * d.d[i - 1];

  const std::span<const double> f(state.f);
  double rhs = 0.0;
  for (std::size_t i = m; i <= n; ++i) {
    for (std::size_t j = 1; j + m <= i; ++j)  // T1: j <= i - m
      rhs -= (psi[i - 1] - psi[i - j - 1]) * kernel.eval(i, j) * f[i - 1] * f[j - 1];
    for (std::size_t j = i - m + 1; j <= n; ++j)  // T2: j >= i - m + 1 (>= 1 since i >= m)
      rhs -= psi[i - 1] * kernel.eval(i, j) * f[i - 1] * f[j - 1];
  }
  return lhs - rhs;
}

double corrected_m1_identity_residual(const StateVector& state, const KernelSpec& kernel) {
  const std::size_t n = state.n;
  const Derivative d = rhs_naive(state, kernel);
  const std::span<const double> f(state.f);

  double lhs = 0.0;
  for (std::size_t i = 1; i <= n; ++i) lhs += static_cast<double>(i) * d.d[i - 1];

  double rhs = 0.0;
  for (std::size_t i = 2; i <= n; ++i)
    for (std::size_t j = 1; j < i; ++j)
      rhs += (static_cast<double>(i - j) - static_cast<double>(i) - static_cast<double>(j)) *
             kernel.eval(i, j) * f[i - 1] * f[j - 1];
  for (std::size_t i = 1; i <= n; ++i)
    rhs -= static_cast<double>(i) * kernel.eval(i, i) * f[i - 1] * f[i - 1];

  return lhs - rhs;
}

double m1_display_gap(const StateVector& state, const KernelSpec& kernel,
                      std::span<const double> psi) {
  const std::size_t n = state.n;
  if (psi.size() != n) throw std::invalid_argument("psi length mismatch");
  const Derivative d = rhs_naive(state, kernel);
  const std::span<const double> f(state.f);

  double display = 0.0;
  for (std::size_t i = 2; i <= n; ++i)
    for (std::size_t j = 1; j < i; ++j)
      display += (psi[i - j - 1] - psi[i - 1] - psi[j - 1]) * kernel.eval(i, j) * f[i - 1] * f[j - 1];

  double lhs = 0.0;
  for (std::size_t i = 1; i <= n; ++i) lhs += psi[i - 1] * d.d[i - 1];

  return display - lhs;
}

double diagonal_weighted_sum(const StateVector& state, const KernelSpec& kernel,
                             std::span<const double> psi) {
  double acc = 0.0;
  for (std::size_t i = 1; i <= state.n; ++i)
    acc += psi[i - 1] * kernel.eval(i, i) * state.f[i - 1] * state.f[i - 1];
  return acc;
}

namespace {

CheckRecord monotone_check(const char* name, const char* citation,
                           const std::vector<MomentVector>& moments, double MomentVector::*field,
                           double initial) {
  CheckRecord rec;
  rec.name = name;
  rec.scope = "trajectory";
  rec.citation = citation;
  rec.tolerance = kMonotoneSlack * initial;
  double running_min = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& m : moments) {
    double v = m.*field;
    if (running_min < std::numeric_limits<double>::infinity())
      worst = std::max(worst, v - running_min);
    running_min = std::min(running_min, v);
  }
  rec.residual = moments.size() < 2 ? 0.0 : worst;
  rec.pass = rec.residual <= rec.tolerance;
  return rec;
}

}  // namespace

CheckRecord check_mass_monotone(const TimeSeries& series) {
  if (series.moments.size() < 2)
    throw std::invalid_argument("mass monotonicity needs at least 2 samples");
  return monotone_check("mass_monotone", "M1(t2) <= M1(t1) for t1 <= t2", series.moments,
                        &MomentVector::m1, series.initial_moments.m1);
}

CheckRecord check_sqrt_moment_monotone(const TimeSeries& series) {
  if (series.moments.size() < 2)
    throw std::invalid_argument("sqrt-moment monotonicity needs at least 2 samples");
  return monotone_check("sqrt_moment_monotone", "Mhalf(t2) <= Mhalf(t1) for t1 <= t2",
                        series.moments, &MomentVector::mhalf, series.initial_moments.mhalf);
}

CheckRecord check_number_dissipation(const TimeSeries& series) {
  CheckRecord rec;
  rec.name = "number_dissipation";
  rec.scope = "trajectory";
  rec.citation = "M0(t) + (1/2) int (sum omega_i f_i)^2 <= M0(0)";
  if (series.dissipation.size() != series.moments.size() || series.moments.empty()) {
    rec.applicable = false;
    rec.pass = true;
    rec.citation += " [not evaluated: dissipation accumulator missing]";
    return rec;
  }
  const double m0_init = series.initial_moments.m0;
  rec.tolerance = kIntegralSlack * m0_init;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < series.moments.size(); ++k)
    worst = std::max(worst, series.moments[k].m0 + 0.5 * series.dissipation[k] - m0_init);
  rec.residual = worst;
  rec.pass = rec.residual <= rec.tolerance;
  return rec;
}

CheckRecord check_tail_l2(const TimeSeries& series, const KernelSpec& kernel, std::size_t r,
                          double t1, double t2) {
  if (r < 1 || r > series.n) throw std::invalid_argument("tail check: r must lie in [1, n]");
  CheckRecord rec;
  rec.name = "tail_l2_r" + std::to_string(r);
  rec.scope = "trajectory";
  rec.citation = "int_t1^t2 (sum_{i>=r} omega_i f_i)^2 <= 2 r^(-1/2) Mhalf(t1)";
  if (series.states.size() != series.times.size()) {
    rec.applicable = false;
    rec.citation += " [not evaluated: per-size snapshots missing]";
    return rec;
  }

  const std::vector<double> w = kernel.omega_table(series.n);
  auto tail = [&](const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = r; i <= series.n; ++i) acc += w[i - 1] * f[i - 1];
    return acc;
  };

  double integral = 0.0;
  double mhalf_t1 = 0.0;
  bool have_t1 = false;
  double prev_t = 0.0, prev_sq = 0.0;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    double t = series.times[k];
    if (t < t1 || t > t2) continue;
    double s = tail(series.states[k]);
    if (!have_t1) {
      mhalf_t1 = series.moments[k].mhalf;
      have_t1 = true;
    } else {
      integral += (t - prev_t) * 0.5 * (prev_sq + s * s);
    }
    prev_t = t;
    prev_sq = s * s;
  }
  if (!have_t1) throw std::invalid_argument("tail check: no samples inside [t1, t2]");

  double bound = 2.0 / std::sqrt(static_cast<double>(r)) * mhalf_t1;
  rec.residual = integral - bound;
  rec.tolerance = kQuadratureSlack * bound;
  rec.pass = integral <= bound * (1.0 + kQuadratureSlack);
  return rec;
}

CheckRecord check_decay_bound(const TimeSeries& series, const HypothesisClass& hyp) {
  CheckRecord rec;
  rec.name = "decay_bound";
  rec.scope = "trajectory";
  rec.citation = "M1(t) <= (2/R) M0(0)^(1/2) t^(-1/2)";
  if (!hyp.is_ker3()) {
    rec.applicable = false;
    rec.pass = true;
    rec.citation += " [not applicable: kernel not classified Ker3]";
    return rec;
  }
  const double c = 2.0 / hyp.R * std::sqrt(series.initial_moments.m0);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    double t = series.times[k];
    if (t <= 0.0) continue;
    double bound = c / std::sqrt(t);
    worst = std::max(worst, series.moments[k].m1 / bound - 1.0);
  }
  rec.residual = worst;
  rec.tolerance = kIntegralSlack;
  rec.pass = worst <= kIntegralSlack;
  return rec;
}

CheckRecord check_w11(const TimeSeries& series, const HypothesisClass& hyp) {
  CheckRecord rec;
  rec.name = "w11_bound";
  rec.scope = "trajectory";
  rec.citation = "int_0^T |df_i/dt| <= 4 (1+A) M0(0)";
  if (!hyp.is_ker3()) {
    rec.applicable = false;
    rec.pass = true;
    rec.citation += " [not applicable: kernel not classified Ker3]";
    return rec;
  }
  if (series.deriv_l1.size() != series.n) {
    rec.applicable = false;
    rec.citation += " [not evaluated: derivative accumulator missing]";
    return rec;
  }
  const double bound = 4.0 * (1.0 + hyp.A) * series.initial_moments.m0;
  double worst = -std::numeric_limits<double>::infinity();
  for (double v : series.deriv_l1) worst = std::max(worst, v / bound - 1.0);
  rec.residual = worst;
  rec.tolerance = kQuadratureSlack;
  rec.pass = worst <= kQuadratureSlack;
  return rec;
}

CheckRecord check_support_invariance(const TimeSeries& series, double negativity_tol) {
  CheckRecord rec;
  rec.name = "support_invariance";
  rec.scope = "trajectory";
  rec.citation = "f_i(0) = 0 for i > k implies f_i(t) = 0 for i > k";
  if (series.states.size() != series.times.size()) {
    rec.applicable = false;
    rec.citation += " [not evaluated: per-size snapshots missing]";
    return rec;
  }
  std::size_t top = 0;  // highest initially occupied size
  if (!series.states.empty()) {
    const auto& f0 = series.states.front();
    for (std::size_t i = series.n; i >= 1; --i) {
      if (f0[i - 1] != 0.0) {
        top = i;
        break;
      }
    }
  }
  double worst = 0.0;
  for (const auto& f : series.states)
    for (std::size_t i = top + 1; i <= series.n; ++i) worst = std::max(worst, f[i - 1]);
  rec.residual = worst;
  rec.tolerance = negativity_tol;
  rec.pass = worst <= negativity_tol;
  return rec;
}

namespace {

struct RandomResiduals {
  double weak_form = 0.0;   // max relative residual over trials
  double m1_identity = 0.0;
  double display_gap = 0.0;  // max relative deviation from the diagonal sum
};

RandomResiduals random_state_residuals(const KernelSpec& kernel, std::size_t n,
                                       std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RandomResiduals out;
  const std::vector<std::vector<double>> presets = {
      make_psi(PsiPreset::Ones, n), make_psi(PsiPreset::Linear, n), make_psi(PsiPreset::Sqrt, n)};

  for (std::size_t trial = 0; trial < trials; ++trial) {
    StateVector s;
    s.n = n;
    s.f.resize(n);
    for (auto& v : s.f) v = unif(rng);
    std::size_t m = 1 + rng() % n;
    const auto& psi = presets[trial % presets.size()];

    const Derivative d = rhs_naive(s, kernel);
    double scale_psi = 1.0, scale_m1 = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
      scale_psi += psi[i - 1] * std::abs(d.d[i - 1]);
      scale_m1 += static_cast<double>(i) * std::abs(d.d[i - 1]);
    }

    out.weak_form =
        std::max(out.weak_form, std::abs(weak_form_residual(s, kernel, psi, m)) / scale_psi);
    out.m1_identity =
        std::max(out.m1_identity, std::abs(corrected_m1_identity_residual(s, kernel)) / scale_m1);

    double gap = m1_display_gap(s, kernel, psi);
    double diag = diagonal_weighted_sum(s, kernel, psi);
    out.display_gap = std::max(out.display_gap, std::abs(gap - diag) / (scale_psi + diag));
  }
  return out;
}

}  // namespace

DiagnosticsReport run_suite(const TimeSeries& series, const KernelSpec& kernel,
                            const SuiteOptions& options) {
  DiagnosticsReport report;
  const HypothesisClass hyp = classify_hypothesis(kernel, options.probe_depth);

  report.checks.push_back(check_mass_monotone(series));
  report.checks.push_back(check_sqrt_moment_monotone(series));
  report.checks.push_back(check_number_dissipation(series));
  if (!series.times.empty()) {
    for (std::size_t r : options.tail_r)
      if (r >= 1 && r <= series.n)
        report.checks.push_back(
            check_tail_l2(series, kernel, r, series.times.front(), series.times.back()));
  }
  report.checks.push_back(check_decay_bound(series, hyp));
  report.checks.push_back(check_w11(series, hyp));
  report.checks.push_back(check_support_invariance(series, options.negativity_tol));

  if (options.random_checks > 0) {
    RandomResiduals rr =
        random_state_residuals(kernel, series.n, options.random_checks, options.rng_seed);
    CheckRecord weak;
    weak.name = "weak_form_random";
    weak.scope = "state";
    weak.residual = rr.weak_form;
    weak.tolerance = kAlgebraicTol;
    weak.pass = rr.weak_form <= kAlgebraicTol;
    weak.citation = "sum psi_i d_i = -sum_T1 (psi_i - psi_{i-j}) theta f f - sum_T2 psi_i theta f f";
    report.checks.push_back(weak);

    CheckRecord m1;
    m1.name = "m1_identity_random";
    m1.scope = "state";
    m1.residual = rr.m1_identity;
    m1.tolerance = kAlgebraicTol;
    m1.pass = rr.m1_identity <= kAlgebraicTol;
    m1.citation = "sum i d_i = sum_{i>j} ((i-j)-i-j) theta f f - sum_i i theta_{i,i} f_i^2";
    report.checks.push_back(m1);

    CheckRecord gap;
    gap.name = "m1_display_gap_random";
    gap.scope = "state";
    gap.residual = rr.display_gap;
    gap.tolerance = kAlgebraicTol;
    gap.pass = rr.display_gap <= kAlgebraicTol;
    gap.citation = "diagonal-free display misses exactly sum_i psi_i theta_{i,i} f_i^2";
    report.checks.push_back(gap);
  }

  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  report.overall = std::all_of(report.checks.begin(), report.checks.end(),
                               [](const CheckRecord& c) { return c.pass; });
  return report;
}

std::string format_report(const DiagnosticsReport& report) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  for (const auto& c : report.checks) {
    os << c.name << ' ' << c.scope << ' ' << c.residual << ' ' << c.tolerance << ' '
       << (c.applicable ? (c.pass ? "pass" : "FAIL") : "n/a") << ' ' << c.citation << '\n';
  }
  os << "overall " << (report.overall ? "pass" : "FAIL") << '\n';
  return os.str();
}

}  // namespace rbk
