#include "doctest.h"

#include <cmath>
#include <numeric>

#include "rbk/errors.hpp"
#include "rbk/integrate.hpp"
#include "rbk/rhs.hpp"
#include "rbk/ssa.hpp"

using namespace rbk;

TEST_CASE("one admissible event: a pair collapses to a single survivor") {
  // {one 2-cluster, one 1-cluster}, constant kernel, V=1: single event at
  // rate 1 leaves {one 1-cluster}, which has no partner.
  InitialData init = InitialData::explicit_table({1, 1});
  std::vector<double> samples = {100.0};
  SsaTrajectory t = ssa_run(init, 2, KernelSpec::constant(1.0), 1.0, 100.0, 7, samples);
  CHECK(t.events == 1);
  CHECK(t.final_state.counts[0] == 1);
  CHECK(t.final_state.counts[1] == 0);
  CHECK(t.density.back()[0] == 1.0);
}

TEST_CASE("equal pair vanishes entirely and waits an exponential time") {
  InitialData init = InitialData::explicit_table({2});
  std::vector<double> samples = {50.0};
  double sum_wait = 0.0, sum_sq = 0.0;
  const int reps = 10000;
  SsaOptions opt;
  opt.record_events = true;
  for (int k = 0; k < reps; ++k) {
    SsaTrajectory t =
        ssa_run(init, 2, KernelSpec::constant(1.0), 1.0, 50.0, 1000 + k, samples, opt);
    REQUIRE(t.events == 1);  // rate = 2*1/(2*1) = 1
    REQUIRE(t.final_state.counts[0] == 0);
    sum_wait += t.event_log[0].t;
    sum_sq += t.event_log[0].t * t.event_log[0].t;
  }
  double mean = sum_wait / reps;
  double sd = std::sqrt((sum_sq / reps - mean * mean) * reps / (reps - 1.0));
  double se = sd / std::sqrt(double(reps));
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);  // exponential(1) waiting time
}

TEST_CASE("zero particles is a configuration error") {
  InitialData init = InitialData::explicit_table({0.0, 0.0});
  std::vector<double> samples = {1.0};
  CHECK_THROWS_AS(ssa_run(init, 2, KernelSpec::constant(1.0), 1.0, 1.0, 1, samples), ConfigError);
  InitialData mono = InitialData::monodisperse(1, 1.0);
  CHECK_THROWS_AS(ssa_run(mono, 2, KernelSpec::constant(1.0), -1.0, 1.0, 1, samples), ConfigError);
}

TEST_CASE("per-event bookkeeping: counts drop by 1 or 2, mass by 2 min(i,j)") {
  InitialData init = InitialData::geometric(0.5, 1.0);
  std::vector<double> samples = {10.0};
  SsaOptions opt;
  opt.record_events = true;
  SsaTrajectory t = ssa_run(init, 12, KernelSpec::constant(1.0), 300.0, 10.0, 99, samples, opt);
  REQUIRE(t.events > 10);

  // Replay the log against the rounded initial configuration.
  InitResult ir = init_state(init, 12);
  std::vector<std::int64_t> counts(12);
  for (std::size_t k = 0; k < 12; ++k)
    counts[k] = static_cast<std::int64_t>(std::llround(300.0 * ir.state.f[k]));
  auto total = [&] { return std::accumulate(counts.begin(), counts.end(), std::int64_t(0)); };
  auto mass = [&] {
    std::int64_t m = 0;
    for (std::size_t k = 0; k < 12; ++k) m += std::int64_t(k + 1) * counts[k];
    return m;
  };
  for (const SsaEvent& ev : t.event_log) {
    std::int64_t n_before = total(), m_before = mass();
    REQUIRE(ev.i <= ev.j);
    if (ev.i == ev.j) {
      counts[ev.i - 1] -= 2;
    } else {
      counts[ev.i - 1] -= 1;
      counts[ev.j - 1] -= 1;
      counts[ev.j - ev.i - 1] += 1;
    }
    for (std::int64_t c : counts) REQUIRE(c >= 0);
    std::int64_t dn = n_before - total();
    CHECK((dn == 1 || dn == 2));
    CHECK(m_before - mass() == 2 * std::int64_t(ev.i));
  }
  for (std::size_t k = 0; k < 12; ++k) CHECK(counts[k] == t.final_state.counts[k]);
}

TEST_CASE("identical seed and configuration reproduce the trajectory") {
  InitialData init = InitialData::geometric(0.5, 1.0);
  std::vector<double> samples = {0.5, 1.0, 2.0};
  SsaOptions opt;
  opt.record_events = true;
  SsaTrajectory a = ssa_run(init, 8, KernelSpec::constant(1.0), 200.0, 2.0, 31, samples, opt);
  SsaTrajectory b = ssa_run(init, 8, KernelSpec::constant(1.0), 200.0, 2.0, 31, samples, opt);
  CHECK(a.events == b.events);
  REQUIRE(a.event_log.size() == b.event_log.size());
  for (std::size_t k = 0; k < a.event_log.size(); ++k) {
    CHECK(a.event_log[k].t == b.event_log[k].t);
    CHECK(a.event_log[k].i == b.event_log[k].i);
    CHECK(a.event_log[k].j == b.event_log[k].j);
  }
  for (std::size_t k = 0; k < samples.size(); ++k) CHECK(a.density[k] == b.density[k]);

  SsaTrajectory c = ssa_run(init, 8, KernelSpec::constant(1.0), 200.0, 2.0, 32, samples, opt);
  CHECK(a.event_log.back().t != c.event_log.back().t);  // different stream
}

TEST_CASE("analytic drift equals rhs plus the finite-volume diagonal correction") {
  InitialData init = InitialData::geometric(0.5, 1.0);
  const double volume = 1000.0;
  for (const KernelSpec& kernel :
       {KernelSpec::constant(1.0), KernelSpec::separable_power(1.0, 1.0),
        KernelSpec::separable_plus_constant(1.0, 1.0, 2.0)}) {
    InitResult ir = init_state(init, 10);
    SsaState state;
    state.volume = volume;
    state.counts.resize(10);
    StateVector phi;
    phi.n = 10;
    phi.f.resize(10);
    for (std::size_t k = 0; k < 10; ++k) {
      state.counts[k] = static_cast<std::int64_t>(std::llround(volume * ir.state.f[k]));
      phi.f[k] = static_cast<double>(state.counts[k]) / volume;
    }
    std::vector<double> drift = ssa_drift(state, kernel);
    Derivative ref = rhs_naive(phi, kernel);
    for (std::size_t i = 1; i <= 10; ++i) {
      double expected = ref.d[i - 1] + kernel.eval(i, i) * phi.f[i - 1] / volume;
      CHECK(std::abs(drift[i - 1] - expected) <= 1e-12 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("ensemble mean tracks the mean-field number density") {
  InitialData init = InitialData::monodisperse(1, 1.0);
  std::vector<double> samples = {0.25, 0.5, 1.0};
  std::vector<std::uint64_t> seeds(32);
  std::iota(seeds.begin(), seeds.end(), 1);
  SsaEnsemble ens =
      ssa_ensemble(init, 4, KernelSpec::constant(1.0), 10000.0, 1.0, seeds, samples);

  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.sample_times = samples;
  TimeSeries ode = integrate(init_state(init, 4), KernelSpec::constant(1.0), cfg);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double tol = std::max(3.0 * ens.se_m0[k], 0.05 * ode.moments[k].m0);
    CHECK(std::abs(ens.mean_m0[k] - ode.moments[k].m0) <= tol);
  }
  CHECK(ens.events_per_replicate.size() == 32);
  CHECK_THROWS_AS(
      ssa_ensemble(init, 4, KernelSpec::constant(1.0), 100.0, 1.0,
                   std::vector<std::uint64_t>{1}, samples),
      ConfigError);
}

TEST_CASE("doubling the volume shrinks the standard error by about sqrt(2)") {
  InitialData init = InitialData::monodisperse(1, 1.0);
  std::vector<double> samples = {1.0};
  std::vector<std::uint64_t> seeds(64);
  std::iota(seeds.begin(), seeds.end(), 101);
  SsaEnsemble small = ssa_ensemble(init, 4, KernelSpec::constant(1.0), 2000.0, 1.0, seeds, samples);
  SsaEnsemble big = ssa_ensemble(init, 4, KernelSpec::constant(1.0), 4000.0, 1.0, seeds, samples);
  double ratio = small.se_m0[0] / big.se_m0[0];
  CHECK(ratio >= 1.05);
  CHECK(ratio <= 1.95);
}
