#include "doctest.h"

#include <random>

#include "rbk/errors.hpp"
#include "rbk/kernel.hpp"

using namespace rbk;

TEST_CASE("kernel evaluation matches the closed forms") {
  CHECK(KernelSpec::constant(1.0).eval(5, 9) == 1.0);
  CHECK(KernelSpec::separable_power(1.0, 1.0).eval(2, 3) == 6.0);
  CHECK(KernelSpec::separable_plus_constant(0.5, 1.0, 2.0).eval(4, 9) == 8.0);  // 2*3 + 2
}

TEST_CASE("declared parts satisfy the decomposition") {
  CHECK(KernelSpec::separable_power(1.0, 1.0).omega(7) == 7.0);

  KernelSpec c3 = KernelSpec::constant(3.0);
  for (std::size_t i : {1, 2, 17}) {
    CHECK(c3.omega(i) == 0.0);
    CHECK(c3.kappa(i, i + 1) == 3.0);
  }

  KernelSpec b = KernelSpec::separable_plus_bounded(1.0, 1.0, 2.0);  // b = 1
  CHECK(b.kappa(2, 3) == 12.0);                                      // 2 * (2*3) * 1
}

TEST_CASE("symmetry and exact decomposition on random pairs") {
  std::vector<KernelSpec> specs = {
      KernelSpec::constant(2.5),
      KernelSpec::separable_power(0.5, 1.25),
      KernelSpec::separable_power(1.0, 1.0),
      KernelSpec::separable_plus_constant(1.0, 1.0, 3.0),
      KernelSpec::separable_plus_bounded(1.5, 0.5, 2.0,
                                         [](std::size_t i, std::size_t j) {
                                           return 1.0 / (1.0 + std::abs(double(i) - double(j)));
                                         }),
  };
  std::mt19937_64 rng(1234);
  for (const auto& k : specs) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::size_t i = 1 + rng() % 600, j = 1 + rng() % 600;
      CHECK(k.eval(i, j) == k.eval(j, i));
      CHECK(k.eval(i, j) == k.omega(i) * k.omega(j) + k.kappa(i, j));
      CHECK(k.eval(i, j) >= 0.0);
    }
  }
}

TEST_CASE("hypothesis classification of closed-form families") {
  CHECK(classify_hypothesis(KernelSpec::separable_power(0.5, 1.0), 8).tag ==
        HypothesisClass::Tag::Ker2);

  HypothesisClass h = classify_hypothesis(KernelSpec::separable_power(1.0, 1.0), 8);
  CHECK(h.tag == HypothesisClass::Tag::Ker3);
  CHECK(h.R == 1.0);
  CHECK(h.A == 0.0);

  CHECK(classify_hypothesis(KernelSpec::constant(1.0), 8).tag == HypothesisClass::Tag::Ker2);

  HypothesisClass hc = classify_hypothesis(KernelSpec::separable_plus_constant(1.0, 2.0, 3.0), 8);
  CHECK(hc.tag == HypothesisClass::Tag::Ker3);
  CHECK(hc.R == 2.0);
  CHECK(hc.A == doctest::Approx(0.75));  // c / scale^2

  HypothesisClass hb = classify_hypothesis(KernelSpec::separable_plus_bounded(2.0, 1.5, 4.0), 8);
  CHECK(hb.tag == HypothesisClass::Tag::Ker3);
  CHECK(hb.R == 1.5);
  CHECK(hb.A == 4.0);

  CHECK(classify_hypothesis(KernelSpec::table({0, 1, 1, 0}), 8).tag ==
        HypothesisClass::Tag::Unclassified);
}

TEST_CASE("Ker3 certificates hold on probed indices") {
  std::vector<KernelSpec> specs = {
      KernelSpec::separable_power(1.0, 1.0),
      KernelSpec::separable_plus_constant(1.5, 2.0, 5.0),
      KernelSpec::separable_plus_bounded(1.0, 1.0, 3.0),
  };
  for (const auto& k : specs) {
    HypothesisClass h = classify_hypothesis(k, 16);
    REQUIRE(h.tag == HypothesisClass::Tag::Ker3);
    for (std::size_t i = 1; i <= 200; ++i) {
      CHECK(k.omega(i) >= h.R * static_cast<double>(i) * (1.0 - 1e-14));
      for (std::size_t j = 1; j <= 50; ++j)
        CHECK(k.kappa(i, j) <= h.A * k.omega(i) * k.omega(j) * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("classification rejects a zero probe depth") {
  CHECK_THROWS_AS(classify_hypothesis(KernelSpec::constant(1.0), 0), std::invalid_argument);
}

TEST_CASE("table kernels validate shape and reject bad indices") {
  KernelSpec t = KernelSpec::table({0, 2, 2, 1});
  CHECK(t.eval(1, 2) == 2.0);
  CHECK(t.table_size() == 2);
  CHECK_THROWS_AS((void)t.eval(1, 3), std::out_of_range);
  CHECK_THROWS_AS(KernelSpec::table({1, 2, 3}), ConfigError);       // not square
  CHECK_THROWS_AS(KernelSpec::table({0, 1, 2, 0}), ConfigError);    // asymmetric
  CHECK_THROWS_AS(KernelSpec::table({0, -1, -1, 0}), ConfigError);  // negative
  CHECK_THROWS_AS(KernelSpec::constant(-1.0), ConfigError);
}
