#include "doctest.h"

#include <random>

#include "rbk/rhs.hpp"

using namespace rbk;

namespace {

StateVector make_state(std::vector<double> f) {
  StateVector s;
  s.n = f.size();
  s.f = std::move(f);
  return s;
}

StateVector random_state(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  StateVector s;
  s.n = n;
  s.f.resize(n);
  for (auto& v : s.f) v = unif(rng);
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("naive rhs on hand-summed instances") {
  // births (2,1,0), deaths (3,3,3)
  Derivative d = rhs_naive(make_state({1, 1, 1}), KernelSpec::constant(1.0));
  CHECK(d.d == std::vector<double>{-1, -2, -3});

  // theta_{i,j} = ij: births (2,0,0), deaths (3,6,0)
  Derivative dp = rhs_naive(make_state({1, 1, 0}), KernelSpec::separable_power(1.0, 1.0));
  CHECK(dp.d == std::vector<double>{-1, -6, 0});

  Derivative dz = rhs_naive(make_state({0, 0, 0}), KernelSpec::separable_power(1.0, 1.0));
  CHECK(dz.d == std::vector<double>{0, 0, 0});
}

TEST_CASE("fast rhs reproduces the composed oracle values") {
  bool fell_back = true;
  Derivative d = rhs_fast(make_state({1, 1, 0}), KernelSpec::separable_power(1.0, 1.0), &fell_back);
  CHECK_FALSE(fell_back);
  CHECK(d.d[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(d.d[1] == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(d.d[2] == doctest::Approx(0.0));

  Derivative dc = rhs_fast(make_state({1, 1, 1}), KernelSpec::constant(1.0), &fell_back);
  CHECK_FALSE(fell_back);
  CHECK(dc.d[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(dc.d[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(dc.d[2] == doctest::Approx(-3.0).epsilon(1e-12));

  Derivative dz = rhs_fast(make_state({0, 0, 0, 0}), KernelSpec::separable_plus_constant(1, 1, 1));
  CHECK(max_abs(dz.d) == 0.0);
}

TEST_CASE("families without separable structure fall back loudly") {
  bool fell_back = false;
  KernelSpec t = KernelSpec::table({0, 1, 1, 2});
  Derivative fast = rhs_fast(make_state({0.5, 0.25}), t, &fell_back);
  CHECK(fell_back);
  Derivative ref = rhs_naive(make_state({0.5, 0.25}), t);
  CHECK(fast.d == ref.d);

  RhsEvaluator ev(t, 2, RhsPath::Fast);
  CHECK_FALSE(ev.fast_active());
}

TEST_CASE("oracle equivalence of the two paths on random states") {
  std::mt19937_64 rng(2024);
  std::vector<KernelSpec> kernels = {
      KernelSpec::constant(1.0),
      KernelSpec::separable_power(1.0, 1.0),
      KernelSpec::separable_power(0.5, 1.0),
      KernelSpec::separable_plus_constant(1.0, 1.0, 1.0),
  };
  std::vector<std::size_t> sizes = {4, 7, 16, 33, 64, 128, 257, 512};
  int trials = 0;
  for (std::size_t rep = 0; rep < 500; ++rep) {
    std::size_t n = sizes[rng() % sizes.size()];
    const KernelSpec& kernel = kernels[rng() % kernels.size()];
    StateVector s = random_state(n, rng);
    Derivative ref = rhs_naive(s, kernel);
    Derivative fast = rhs_fast(s, kernel);
    double tol = 1e-10 * (1.0 + max_abs(ref.d));
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(fast.d[i] - ref.d[i]) <= tol);
    ++trials;
  }
  CHECK(trials == 500);
}

TEST_CASE("death term bounds the derivative from below") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 40;
    StateVector s = random_state(n, rng);
    KernelSpec kernel = KernelSpec::separable_plus_constant(1.0, 0.5, 2.0);
    Derivative d = rhs_naive(s, kernel);
    for (std::size_t i = 1; i <= n; ++i) {
      double death = 0.0;
      for (std::size_t j = 1; j <= n; ++j) death += kernel.eval(i, j) * s.f[i - 1] * s.f[j - 1];
      CHECK(d.d[i - 1] >= -death * (1.0 + 1e-12) - 1e-300);
    }
  }
}

TEST_CASE("support above the occupied range only loses density") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 16 + rng() % 16;
    std::size_t k = 4 + rng() % 4;  // top occupied index
    StateVector s = random_state(n, rng);
    for (std::size_t i = k; i < n; ++i) s.f[i] = 0.0;
    for (const KernelSpec& kernel :
         {KernelSpec::constant(1.0), KernelSpec::separable_power(1.0, 1.0)}) {
      Derivative d = rhs_naive(s, kernel);
      for (std::size_t i = k + 1; i <= n; ++i) {
        CHECK(d.d[i - 1] <= 0.0);
        if (s.f[i - 1] == 0.0) CHECK(d.d[i - 1] == 0.0);
      }
    }
  }
}

TEST_CASE("number-rate identity with the diagonal term") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 60;
    StateVector s = random_state(n, rng);
    KernelSpec kernel =
        trial % 2 ? KernelSpec::separable_power(1.0, 1.0) : KernelSpec::constant(0.7);
    Derivative d = rhs_naive(s, kernel);

    double lhs = 0.0;
    for (double v : d.d) lhs += v;

    double strict = 0.0, diag = 0.0, full = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      diag += kernel.eval(i, i) * s.f[i - 1] * s.f[i - 1];
      for (std::size_t j = 1; j <= n; ++j) {
        double term = kernel.eval(i, j) * s.f[i - 1] * s.f[j - 1];
        full += term;
        if (j < i) strict += term;
      }
    }
    double scale = 1.0 + std::abs(lhs);
    CHECK(std::abs(lhs - (-strict - diag)) <= 1e-12 * scale);
    CHECK(std::abs(lhs - (-0.5 * full - 0.5 * diag)) <= 1e-12 * scale);
  }
}

TEST_CASE("mass-rate identity with the diagonal term") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 60;
    StateVector s = random_state(n, rng);
    KernelSpec kernel = trial % 2 ? KernelSpec::separable_plus_constant(1.0, 1.0, 2.0)
                                  : KernelSpec::separable_power(0.5, 1.0);
    Derivative d = rhs_naive(s, kernel);

    double lhs = 0.0;
    for (std::size_t i = 1; i <= n; ++i) lhs += double(i) * d.d[i - 1];

    double rhs = 0.0;
    for (std::size_t i = 2; i <= n; ++i)
      for (std::size_t j = 1; j < i; ++j)
        rhs += (double(i - j) - double(i) - double(j)) * kernel.eval(i, j) * s.f[i - 1] * s.f[j - 1];
    for (std::size_t i = 1; i <= n; ++i)
      rhs -= double(i) * kernel.eval(i, i) * s.f[i - 1] * s.f[i - 1];

    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("repeated evaluation is bit-identical") {
  std::mt19937_64 rng(9);
  StateVector s = random_state(128, rng);
  KernelSpec kernel = KernelSpec::separable_power(1.0, 1.0);
  Derivative a = rhs_fast(s, kernel);
  Derivative b = rhs_fast(s, kernel);
  CHECK(a.d == b.d);
  Derivative c = rhs_naive(s, kernel);
  Derivative e = rhs_naive(s, kernel);
  CHECK(c.d == e.d);
}
