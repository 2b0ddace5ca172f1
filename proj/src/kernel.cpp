#include "rbk/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "rbk/errors.hpp"

namespace rbk {

namespace {

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0)) throw ConfigError(std::string("kernel parameter must be nonnegative: ") + name);
}

void require_index(std::size_t i) {
  if (i < 1) throw std::out_of_range("size index must be >= 1");
}

}  // namespace

KernelSpec KernelSpec::constant(double c) {
  require_nonneg(c, "c");
  KernelSpec k(KernelFamily::Constant);
  k.c_ = c;
  return k;
}

KernelSpec KernelSpec::separable_power(double alpha, double scale) {
  require_nonneg(alpha, "alpha");
  require_nonneg(scale, "scale");
  KernelSpec k(KernelFamily::SeparablePower);
  k.alpha_ = alpha;
  k.scale_ = scale;
  return k;
}

KernelSpec KernelSpec::separable_plus_constant(double alpha, double scale, double c) {
  require_nonneg(alpha, "alpha");
  require_nonneg(scale, "scale");
  require_nonneg(c, "c");
  KernelSpec k(KernelFamily::SeparablePlusConstant);
  k.alpha_ = alpha;
  k.scale_ = scale;
  k.c_ = c;
  return k;
}

KernelSpec KernelSpec::separable_plus_bounded(double alpha, double scale, double bound,
                                              BoundedFactor b) {
  require_nonneg(alpha, "alpha");
  require_nonneg(scale, "scale");
  require_nonneg(bound, "A");
  KernelSpec k(KernelFamily::SeparablePlusBounded);
  k.alpha_ = alpha;
  k.scale_ = scale;
  k.bound_ = bound;
  k.b_ = std::move(b);
  return k;
}

KernelSpec KernelSpec::table(std::vector<double> entries) {
  std::size_t m = 0;
  while (m * m < entries.size()) ++m;
  if (m * m != entries.size() || m == 0)
    throw ConfigError("kernel table must be a nonempty square matrix (row-major)");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double v = entries[i * m + j];
      if (!(v >= 0.0)) throw ConfigError("kernel table entries must be nonnegative");
      if (v != entries[j * m + i]) throw ConfigError("kernel table must be symmetric");
    }
  }
  KernelSpec k(KernelFamily::Table);
  k.table_ = std::move(entries);
  k.table_n_ = m;
  return k;
}

double KernelSpec::omega(std::size_t i) const {
  require_index(i);
  switch (family_) {
    case KernelFamily::Constant:
    case KernelFamily::Table:
      return 0.0;
    case KernelFamily::SeparablePower:
    case KernelFamily::SeparablePlusConstant:
    case KernelFamily::SeparablePlusBounded:
      return scale_ * std::pow(static_cast<double>(i), alpha_);
  }
  return 0.0;
}

double KernelSpec::kappa(std::size_t i, std::size_t j) const {
  require_index(i);
  require_index(j);
  switch (family_) {
    case KernelFamily::Constant:
    case KernelFamily::SeparablePlusConstant:
      return c_;
    case KernelFamily::SeparablePower:
      return 0.0;
    case KernelFamily::SeparablePlusBounded: {
      double b = b_ ? b_(i, j) : 1.0;
      return bound_ * omega(i) * omega(j) * b;
    }
    case KernelFamily::Table:
      if (i > table_n_ || j > table_n_)
        throw std::out_of_range("kernel table index beyond size cap");
      return table_[(i - 1) * table_n_ + (j - 1)];
  }
  return 0.0;
}

double KernelSpec::eval(std::size_t i, std::size_t j) const {
  return omega(i) * omega(j) + kappa(i, j);
}

std::vector<double> KernelSpec::omega_table(std::size_t n) const {
  std::vector<double> w(n);
  for (std::size_t i = 1; i <= n; ++i) w[i - 1] = omega(i);
  return w;
}

bool KernelSpec::separable_fast() const {
  return family_ == KernelFamily::Constant || family_ == KernelFamily::SeparablePower ||
         family_ == KernelFamily::SeparablePlusConstant;
}

std::string KernelSpec::family_name() const {
  switch (family_) {
    case KernelFamily::Constant: return "constant";
    case KernelFamily::SeparablePower: return "product";
    case KernelFamily::SeparablePlusConstant: return "product_plus_constant";
    case KernelFamily::SeparablePlusBounded: return "product_plus_bounded";
    case KernelFamily::Table: return "table";
  }
  return "?";
}

HypothesisClass classify_hypothesis(const KernelSpec& spec, std::size_t probe_depth) {
  if (probe_depth < 1) throw std::invalid_argument("probe_depth must be >= 1");

  HypothesisClass h;
  switch (spec.family()) {
    case KernelFamily::Constant:
      // omega/i = 0 and kappa/j = c/j -> 0.
      h.tag = HypothesisClass::Tag::Ker2;
      return h;
    case KernelFamily::SeparablePower:
    case KernelFamily::SeparablePlusConstant:
    case KernelFamily::SeparablePlusBounded: {
      if (spec.scale() == 0.0 || spec.alpha() < 1.0) {
        // omega_i/i = scale * i^(alpha-1) -> 0; kappa/j vanishes in j for
        // constant kappa and for A*omega*omega with alpha < 1.
        h.tag = HypothesisClass::Tag::Ker2;
        return h;
      }
      h.tag = HypothesisClass::Tag::Ker3;
      h.R = spec.scale();  // inf over i>=1 of scale * i^(alpha-1), attained at i=1
      if (spec.family() == KernelFamily::SeparablePlusConstant)
        h.A = spec.constant_kappa() / (spec.scale() * spec.scale());
      else if (spec.family() == KernelFamily::SeparablePlusBounded)
        h.A = spec.kappa_bound();
      return h;
    }
    case KernelFamily::Table: {
      // Finite data cannot certify a limit in i; probe only to keep the
      // contract (values are construction-validated) and stay conservative.
      std::size_t cap = std::min(probe_depth, spec.table_size());
      for (std::size_t i = 1; i <= cap; ++i) (void)spec.eval(i, i);
      h.tag = HypothesisClass::Tag::Unclassified;
      return h;
    }
  }
  return h;
}

}  // namespace rbk
