#include "rbk/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "rbk/errors.hpp"
#include "rbk/parallel.hpp"

namespace rbk {

ConvergenceTable convergence_study(const InitialData& init, const KernelSpec& kernel,
                                   const IntegratorConfig& cfg, std::span<const std::size_t> n_list,
                                   RhsPath path) {
  if (init.family == InitFamily::Monodisperse || init.family == InitFamily::ExplicitTable)
    throw ConfigError("convergence study is vacuous: initial family does not extend with n");
  if (n_list.size() < 2) throw ConfigError("convergence study needs at least two sizes");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 2) throw ConfigError("convergence sizes must be >= 2");
    if (k > 0 && n_list[k] <= n_list[k - 1])
      throw ConfigError("convergence sizes must be strictly increasing");
  }

  std::vector<InitResult> inits(n_list.size());
  std::vector<TimeSeries> runs(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t k) {
    inits[k] = init_state(init, n_list[k]);
    runs[k] = integrate(inits[k], kernel, cfg, path);
  });

  ConvergenceTable table;
  for (std::size_t k = 0; k + 1 < n_list.size(); ++k) {
    const TimeSeries& small = runs[k];
    const TimeSeries& big = runs[k + 1];
    ConvergenceRow row;
    row.n = n_list[k];
    row.n_paired = n_list[k + 1];
    row.discarded_number = inits[k].discarded_number;
    row.discarded_mass = inits[k].discarded_mass;
    row.m1_initial = small.initial_moments.m1;
    for (std::size_t s = 0; s < small.times.size(); ++s) {
      double x1 = 0.0, x0 = 0.0;
      for (std::size_t i = 0; i < row.n; ++i) {
        double diff = std::abs(small.states[s][i] - big.states[s][i]);
        x0 += diff;
        x1 += static_cast<double>(i + 1) * diff;
      }
      row.metric_x1 = std::max(row.metric_x1, x1);
      row.metric_x0 = std::max(row.metric_x0, x0);
    }
    table.rows.push_back(row);
  }
  for (std::size_t k = 0; k + 1 < table.rows.size(); ++k)
    if (!(table.rows[k + 1].metric_x1 < table.rows[k].metric_x1)) table.decreasing = false;
  return table;
}

DecayFit decay_exponent(const TimeSeries& series) {
  DecayFit fit;
  if (series.times.empty()) throw std::invalid_argument("decay fit: empty series");
  const double t_hi = series.times.back();
  const double t_lo = t_hi / 10.0;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    double t = series.times[k];
    if (t < t_lo || t <= 0.0) continue;
    double m1 = series.moments[k].m1;
    if (m1 <= 0.0) {
      fit.sentinel = true;
      fit.slope = -std::numeric_limits<double>::infinity();
      return fit;
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(m1));
  }
  fit.count = xs.size();
  if (fit.count < 8) throw std::invalid_argument("decay fit: fewer than 8 samples in the window");

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  fit.slope = sxy / sxx;
  return fit;
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double time_evals(const std::function<void()>& fn, std::size_t evals) {
  std::vector<double> times;
  times.reserve(evals);
  for (std::size_t k = 0; k < evals; ++k) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return median_of(std::move(times));
}

}  // namespace

BenchTable bench_rhs(std::span<const std::size_t> n_list, std::span<const KernelSpec> kernels,
                     std::size_t evals, std::uint64_t seed) {
  if (evals < 9) throw std::invalid_argument("benchmark needs at least 9 evaluations");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  BenchTable table;
  for (std::size_t n : n_list) {
    for (const KernelSpec& kernel : kernels) {
      StateVector s;
      s.n = n;
      s.f.resize(n);
      for (auto& v : s.f) v = unif(rng);

      // Equivalence gate: no timing row without it.
      const Derivative ref = rhs_naive(s, kernel);
      bool fell_back = false;
      const Derivative fast = rhs_fast(s, kernel, &fell_back);
      double scale = 0.0;
      for (double v : ref.d) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(fast.d[i] - ref.d[i]) > 1e-10 * (1.0 + scale))
          throw std::runtime_error(
              "rhs path equivalence violated at n=" + std::to_string(n) + " family=" +
              kernel.family_name() + "; run the diagnostics suite on this kernel");
      }

      RhsEvaluator naive_ev(kernel, n, RhsPath::Naive);
      RhsEvaluator fast_ev(kernel, n, RhsPath::Fast);
      std::vector<double> d(n);
      double t_naive = time_evals([&] { naive_ev.derivative(s.f, d); }, evals);
      double t_fast = time_evals([&] { fast_ev.derivative(s.f, d); }, evals);

      BenchRow naive_row;
      naive_row.n = n;
      naive_row.family = kernel.family_name();
      naive_row.path = "naive";
      naive_row.median_seconds = t_naive;
      naive_row.speedup = 1.0;
      table.rows.push_back(naive_row);

      BenchRow fast_row;
      fast_row.n = n;
      fast_row.family = kernel.family_name();
      fast_row.path = fast_ev.fast_active() ? "fast" : "fast(fallback)";
      fast_row.median_seconds = t_fast;
      fast_row.speedup = t_naive / t_fast;
      table.rows.push_back(fast_row);
    }
  }
  return table;
}

}  // namespace rbk
