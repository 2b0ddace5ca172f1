#include "doctest.h"

#include <random>

#include "rbk/correlate.hpp"

using namespace rbk;

TEST_CASE("direct correlation on pinned instances") {
  std::vector<double> a = {1, 2, 3}, ones = {1, 1, 1};
  CHECK(correlate_direct(a, ones) == std::vector<double>{5, 3, 0});

  std::vector<double> z = {0, 0, 0};
  CHECK(correlate_direct(z, a) == std::vector<double>{0, 0, 0});

  // out_1 = a_2 b_1 = 1, out_2 = 0 (empty sum).
  std::vector<double> a2 = {0, 1}, b2 = {1, 0};
  CHECK(correlate_direct(a2, b2) == std::vector<double>{1, 0});
}

TEST_CASE("length mismatches are rejected") {
  std::vector<double> a = {1, 2}, b = {1};
  CHECK_THROWS_AS(correlate_direct(a, b), std::invalid_argument);
  CHECK_THROWS_AS(correlate_fft(a, b), std::invalid_argument);
}

TEST_CASE("fft path agrees with direct summation to 1e-12") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t n : {1, 2, 3, 5, 16, 100, 257, 512, 2048}) {
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = unif(rng);
    for (auto& v : b) v = unif(rng);
    std::vector<double> direct = correlate_direct(a, b);
    std::vector<double> fft = correlate_fft(a, b);
    double scale = 0.0;
    for (double v : direct) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(fft[i] - direct[i]) <= 1e-12 * (1.0 + scale));
    CHECK(fft[n - 1] == 0.0);
  }
}

TEST_CASE("plan reuse stays consistent and pads to at least 2n") {
  CorrelationPlan plan(17);
  CHECK(plan.transform_length() >= 34);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> a(17), b(17), out(17);
  for (int reuse = 0; reuse < 3; ++reuse) {
    for (auto& v : a) v = unif(rng);
    for (auto& v : b) v = unif(rng);
    plan.apply(a, b, out);
    std::vector<double> direct = correlate_direct(a, b);
    for (std::size_t i = 0; i < 17; ++i)
      CHECK(out[i] == doctest::Approx(direct[i]).epsilon(1e-12));
  }
}
