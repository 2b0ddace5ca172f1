#include "doctest.h"

#include <cmath>
#include <random>

#include "rbk/diagnostics.hpp"

using namespace rbk;

namespace {

StateVector make_state(std::vector<double> f) {
  StateVector s;
  s.n = f.size();
  s.f = std::move(f);
  return s;
}

// Minimal fabricated trajectory for feeding the trajectory checks directly.
TimeSeries fake_series(std::vector<double> m1_samples) {
  TimeSeries ts;
  ts.n = 2;
  for (std::size_t k = 0; k < m1_samples.size(); ++k) {
    ts.times.push_back(double(k));
    MomentVector m;
    m.m1 = m1_samples[k];
    m.mhalf = 0.0;
    m.m0 = 0.0;
    ts.moments.push_back(m);
    ts.dissipation.push_back(0.0);
    ts.clamped_mass.push_back(0.0);
    ts.states.push_back({0.0, 0.0});
  }
  ts.initial_moments.m1 = m1_samples.empty() ? 0.0 : m1_samples.front();
  ts.deriv_l1.assign(2, 0.0);
  return ts;
}

}  // namespace

TEST_CASE("weak form residual vanishes on the hand-evaluated instances") {
  StateVector s = make_state({1, 1, 1});
  KernelSpec c1 = KernelSpec::constant(1.0);
  std::vector<double> linear = make_psi(PsiPreset::Linear, 3);

  // m=1: L = -14, R = -4 - 10
  CHECK(weak_form_residual(s, c1, linear, 1) == doctest::Approx(0.0).epsilon(1e-14));
  // m=2: L = -13, T1 term -1, T2 term -12
  CHECK(weak_form_residual(s, c1, linear, 2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(weak_form_residual(make_state({0, 0, 0}), c1, linear, 2) == 0.0);

  CHECK_THROWS_AS(weak_form_residual(s, c1, linear, 0), std::invalid_argument);
  CHECK_THROWS_AS(weak_form_residual(s, c1, linear, 4), std::invalid_argument);
}

TEST_CASE("corrected mass-rate identity on pinned instances") {
  CHECK(corrected_m1_identity_residual(make_state({1, 1, 1}), KernelSpec::constant(1.0)) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(corrected_m1_identity_residual(make_state({1, 1, 0}),
                                       KernelSpec::separable_power(1.0, 1.0)) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(corrected_m1_identity_residual(make_state({0, 0}), KernelSpec::constant(1.0)) == 0.0);
}

TEST_CASE("the diagonal-free display misses exactly the equal-size term") {
  StateVector s = make_state({1, 1, 1});
  KernelSpec c1 = KernelSpec::constant(1.0);
  std::vector<double> linear = make_psi(PsiPreset::Linear, 3);

  // display sums to -8 while sum_i i d_i = -14; the gap is the diagonal 6.
  double gap = m1_display_gap(s, c1, linear);
  CHECK(gap == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(diagonal_weighted_sum(s, c1, linear) == doctest::Approx(6.0).epsilon(1e-14));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng() % 50;
    StateVector r;
    r.n = n;
    r.f.resize(n);
    for (auto& v : r.f) v = unif(rng);
    KernelSpec kernel = trial % 2 ? KernelSpec::separable_power(1.0, 1.0) : c1;
    const Derivative dr = rhs_naive(r, kernel);
    for (PsiPreset preset : {PsiPreset::Ones, PsiPreset::Linear, PsiPreset::Sqrt}) {
      std::vector<double> psi = make_psi(preset, n);
      double g = m1_display_gap(r, kernel, psi);
      double d = diagonal_weighted_sum(r, kernel, psi);
      double scale = 1.0 + d;
      for (std::size_t i = 1; i <= n; ++i) scale += psi[i - 1] * std::abs(dr.d[i - 1]);
      CHECK(std::abs(g - d) <= 1e-12 * scale);
      CHECK(d > 0.0);  // nonzero on generic states
    }
  }
}

TEST_CASE("weak form residual is pure round-off over random states, m, psi") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<KernelSpec> kernels = {
      KernelSpec::constant(1.0),
      KernelSpec::separable_power(1.0, 1.0),
      KernelSpec::separable_power(0.5, 1.0),
      KernelSpec::separable_plus_constant(1.0, 1.0, 1.0),
  };
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t n = 2 + rng() % 64;
    StateVector s;
    s.n = n;
    s.f.resize(n);
    for (auto& v : s.f) v = unif(rng);
    const KernelSpec& kernel = kernels[rng() % kernels.size()];
    const Derivative d = rhs_naive(s, kernel);

    for (std::size_t m : {std::size_t(1), std::size_t(2), n / 2, n}) {
      if (m < 1 || m > n) continue;
      for (PsiPreset preset : {PsiPreset::Ones, PsiPreset::Linear, PsiPreset::Sqrt}) {
        std::vector<double> psi = make_psi(preset, n);
        double scale = 1.0;
        for (std::size_t i = m; i <= n; ++i) scale += psi[i - 1] * std::abs(d.d[i - 1]);
        CHECK(std::abs(weak_form_residual(s, kernel, psi, m)) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("trajectory checks judge fabricated series correctly") {
  CHECK(check_mass_monotone(fake_series({14, 10, 7})).pass);
  CHECK_FALSE(check_mass_monotone(fake_series({14, 15, 7})).pass);
  CHECK(check_mass_monotone(fake_series({0, 0, 0})).pass);

  TimeSeries bad_m0 = fake_series({1, 1, 1});
  bad_m0.moments[0].m0 = 1.0;
  bad_m0.moments[1].m0 = 2.0;  // number grows: impossible
  bad_m0.moments[2].m0 = 1.0;
  bad_m0.initial_moments.m0 = 1.0;
  CHECK_FALSE(check_number_dissipation(bad_m0).pass);

  TimeSeries no_acc = fake_series({1, 1});
  no_acc.dissipation.clear();
  CheckRecord rec = check_number_dissipation(no_acc);
  CHECK_FALSE(rec.applicable);
}

TEST_CASE("decay and W11 checks guard on the hypothesis class") {
  TimeSeries ts = fake_series({1, 1});
  HypothesisClass ker2;
  ker2.tag = HypothesisClass::Tag::Ker2;
  CHECK_FALSE(check_decay_bound(ts, ker2).applicable);
  CHECK_FALSE(check_w11(ts, ker2).applicable);

  HypothesisClass ker3;
  ker3.tag = HypothesisClass::Tag::Ker3;
  ker3.R = 1.0;
  ker3.A = 0.0;
  // M0(0) = 1, bound at t=4 is 2*sqrt(1)/2 = 1.0; sample M1(4) = 0.8 passes.
  TimeSeries ok;
  ok.n = 2;
  ok.times = {4.0};
  MomentVector m;
  m.m1 = 0.8;
  ok.moments = {m};
  ok.initial_moments.m0 = 1.0;
  ok.deriv_l1.assign(2, 0.0);
  CHECK(check_decay_bound(ok, ker3).pass);
  ok.moments[0].m1 = 1.2;
  CHECK_FALSE(check_decay_bound(ok, ker3).pass);

  ok.deriv_l1 = {3.9, 0.0};
  CHECK(check_w11(ok, ker3).pass);  // bound 4 (1+0) M0(0) = 4
  ok.deriv_l1 = {4.1, 0.0};
  CHECK_FALSE(check_w11(ok, ker3).pass);
}

TEST_CASE("tail check collapses correctly in the trivial corners") {
  // omega = 0 (constant kernel): left side identically zero.
  TimeSeries ts = fake_series({1, 1, 1});
  ts.moments[0].mhalf = 1.0;
  CheckRecord rec = check_tail_l2(ts, KernelSpec::constant(1.0), 1, 0.0, 2.0);
  CHECK(rec.pass);
  CHECK(rec.residual <= 0.0);

  // r = n with the top size empty on both sides.
  CheckRecord top = check_tail_l2(ts, KernelSpec::separable_power(1.0, 1.0), 2, 0.0, 2.0);
  CHECK(top.pass);
  CHECK_THROWS_AS(check_tail_l2(ts, KernelSpec::constant(1.0), 3, 0.0, 2.0),
                  std::invalid_argument);
}

TEST_CASE("suite aggregates into a deterministic name-ordered report") {
  InitResult init = init_state(InitialData::geometric(0.5, 1.0), 32);
  IntegratorConfig cfg;
  cfg.t_end = 10.0;
  cfg.sample_times = geometric_sample_times(10.0, 64);
  TimeSeries ts = integrate(init, KernelSpec::separable_power(1.0, 1.0), cfg);

  SuiteOptions opt;
  opt.random_checks = 50;
  DiagnosticsReport rep = run_suite(ts, KernelSpec::separable_power(1.0, 1.0), opt);
  CHECK(rep.overall);
  for (std::size_t k = 1; k < rep.checks.size(); ++k)
    CHECK(rep.checks[k].name > rep.checks[k - 1].name);
  bool found_decay = false;
  for (const auto& c : rep.checks)
    if (c.name == "decay_bound") {
      found_decay = true;
      CHECK(c.applicable);
      CHECK(c.pass);
    }
  CHECK(found_decay);

  std::string text = format_report(rep);
  CHECK(text.find("overall pass") != std::string::npos);
  CHECK(text.find("mass_monotone") != std::string::npos);

  // A fabricated violation flips the overall flag.
  TimeSeries broken = ts;
  broken.moments[3].m1 = broken.moments[0].m1 * 2.0;
  DiagnosticsReport bad = run_suite(broken, KernelSpec::separable_power(1.0, 1.0), opt);
  CHECK_FALSE(bad.overall);
}

TEST_CASE("constant-kernel monodisperse run passes every applicable check") {
  InitResult init = init_state(InitialData::monodisperse(1, 1.0), 16);
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  cfg.sample_times = geometric_sample_times(5.0, 64);
  TimeSeries ts = integrate(init, KernelSpec::constant(1.0), cfg);
  SuiteOptions opt;
  opt.random_checks = 50;
  DiagnosticsReport rep = run_suite(ts, KernelSpec::constant(1.0), opt);
  CHECK(rep.overall);
}
