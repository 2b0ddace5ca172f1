#include "rbk/rhs.hpp"

#include <stdexcept>

namespace rbk {

Derivative rhs_naive(const StateVector& state, const KernelSpec& kernel) {
  const std::size_t n = state.n;
  if (state.f.size() != n) throw std::invalid_argument("state length mismatch");
  const std::vector<double> w = kernel.omega_table(n);
  const std::span<const double> f(state.f);

  auto theta = [&](std::size_t i, std::size_t j) -> double {
    double kap;
    switch (kernel.family()) {
      case KernelFamily::Constant:
      case KernelFamily::SeparablePlusConstant:
        kap = kernel.constant_kappa();
        break;
      case KernelFamily::SeparablePower:
        kap = 0.0;
        break;
      case KernelFamily::SeparablePlusBounded:
      case KernelFamily::Table:
        kap = kernel.kappa(i, j);
        break;
      default:
        kap = 0.0;
    }
    return w[i - 1] * w[j - 1] + kap;
  };

  Derivative out;
  out.d.assign(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double birth = 0.0;
    for (std::size_t j = 1; i + j <= n; ++j) birth += theta(i + j, j) * f[i + j - 1] * f[j - 1];
    double death = 0.0;
    for (std::size_t j = 1; j <= n; ++j) death += theta(i, j) * f[i - 1] * f[j - 1];
    out.d[i - 1] = birth - death;
  }
  return out;
}

RhsEvaluator::RhsEvaluator(const KernelSpec& kernel, std::size_t n, RhsPath path)
    : kernel_(kernel), n_(n), fast_(false), omega_(kernel.omega_table(n)) {
  switch (path) {
    case RhsPath::Naive:
      fast_ = false;
      break;
    case RhsPath::Fast:
    case RhsPath::Auto:
      fast_ = kernel.separable_fast();
      break;
  }
  if (fast_) {
    plan_.emplace(n_);
    g_.resize(n_);
    corr_.resize(n_);
  }
}

void RhsEvaluator::parts(std::span<const double> f, std::span<double> birth,
                         std::span<double> death_rate) {
  if (f.size() != n_ || birth.size() != n_ || death_rate.size() != n_)
    throw std::invalid_argument("rhs evaluator: length mismatch");

  if (fast_) {
    std::fill(birth.begin(), birth.end(), 0.0);
    std::fill(death_rate.begin(), death_rate.end(), 0.0);

    const bool has_separable = kernel_.family() != KernelFamily::Constant && kernel_.scale() > 0.0;
    if (has_separable) {
      double gsum = 0.0;
      for (std::size_t k = 0; k < n_; ++k) {
        g_[k] = omega_[k] * f[k];
        gsum += g_[k];
      }
      plan_->apply(g_, g_, corr_);
      for (std::size_t k = 0; k < n_; ++k) {
        birth[k] = corr_[k];
        death_rate[k] = omega_[k] * gsum;
      }
    }
    const double c = kernel_.constant_kappa();
    if (c > 0.0) {
      double m0 = 0.0;
      for (std::size_t k = 0; k < n_; ++k) m0 += f[k];
      plan_->apply(f, f, corr_);
      for (std::size_t k = 0; k < n_; ++k) {
        birth[k] += c * corr_[k];
        death_rate[k] += c * m0;
      }
    }
    return;
  }

  // Naive path against the cached omega sequence.
  const bool bounded = kernel_.family() == KernelFamily::SeparablePlusBounded;
  const bool tab = kernel_.family() == KernelFamily::Table;
  const double c = kernel_.constant_kappa();
  auto theta = [&](std::size_t i, std::size_t j) -> double {
    double kap = c;
    if (tab)
      kap = kernel_.kappa(i, j);
    else if (bounded)
      kap = kernel_.kappa_bound() * omega_[i - 1] * omega_[j - 1] *
            (kernel_.bounded_factor() ? kernel_.bounded_factor()(i, j) : 1.0);
    return omega_[i - 1] * omega_[j - 1] + kap;
  };
  for (std::size_t i = 1; i <= n_; ++i) {
    double b = 0.0;
    for (std::size_t j = 1; i + j <= n_; ++j) b += theta(i + j, j) * f[i + j - 1] * f[j - 1];
    double dr = 0.0;
    for (std::size_t j = 1; j <= n_; ++j) dr += theta(i, j) * f[j - 1];
    birth[i - 1] = b;
    death_rate[i - 1] = dr;
  }
}

void RhsEvaluator::derivative(std::span<const double> f, std::span<double> d) {
  std::vector<double> birth(n_), rate(n_);
  parts(f, birth, rate);
  for (std::size_t k = 0; k < n_; ++k) d[k] = birth[k] - f[k] * rate[k];
}

Derivative rhs_fast(const StateVector& state, const KernelSpec& kernel, bool* fell_back) {
  RhsEvaluator ev(kernel, state.n, RhsPath::Auto);
  if (fell_back) *fell_back = !ev.fast_active();
  Derivative out;
  out.d.assign(state.n, 0.0);
  ev.derivative(state.f, out.d);
  return out;
}

}  // namespace rbk
