#ifndef RBK_KERNEL_HPP
#define RBK_KERNEL_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace rbk {

// Collision-rate family theta_{i,j} = omega_i * omega_j + kappa_{i,j}.
// All families are symmetric and nonnegative by construction; evaluation is
// pure and total over its domain.
enum class KernelFamily {
  Constant,               // omega = 0, kappa = c
  SeparablePower,         // omega_i = scale * i^alpha, kappa = 0
  SeparablePlusConstant,  // omega_i = scale * i^alpha, kappa = c
  SeparablePlusBounded,   // kappa_{i,j} = A * omega_i * omega_j * b_{i,j}, b in [0,1]
  Table,                  // explicit symmetric matrix up to a size cap, omega = 0
};

// Bounded factor b_{i,j} for SeparablePlusBounded; empty means b = 1.
using BoundedFactor = std::function<double(std::size_t, std::size_t)>;

class KernelSpec {
 public:
  KernelSpec() : KernelSpec(constant(1.0)) {}

  static KernelSpec constant(double c);
  static KernelSpec separable_power(double alpha, double scale = 1.0);
  static KernelSpec separable_plus_constant(double alpha, double scale, double c);
  static KernelSpec separable_plus_bounded(double alpha, double scale, double bound,
                                           BoundedFactor b = {});
  // Row-major square symmetric nonnegative matrix; side length is the size cap.
  static KernelSpec table(std::vector<double> entries);

  KernelFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  double constant_kappa() const { return c_; }   // c for Constant / SeparablePlusConstant
  double kappa_bound() const { return bound_; }  // A for SeparablePlusBounded
  const BoundedFactor& bounded_factor() const { return b_; }
  std::size_t table_size() const { return table_n_; }

  // The two declared parts and their product-plus-kappa recombination.
  // eval(i,j) == omega(i)*omega(j) + kappa(i,j) by the same arithmetic path.
  double omega(std::size_t i) const;
  double kappa(std::size_t i, std::size_t j) const;
  double eval(std::size_t i, std::size_t j) const;

  // omega_1..omega_n as a dense sequence (index k holds omega_{k+1}).
  std::vector<double> omega_table(std::size_t n) const;

  // True for families whose kappa is constant or zero (fast RHS path exists).
  bool separable_fast() const;

  std::string family_name() const;

 private:
  KernelSpec(KernelFamily fam) : family_(fam) {}

  KernelFamily family_;
  double alpha_ = 0.0;
  double scale_ = 0.0;
  double c_ = 0.0;
  double bound_ = 0.0;
  BoundedFactor b_;
  std::vector<double> table_;
  std::size_t table_n_ = 0;
};

struct HypothesisClass {
  enum class Tag { Ker2, Ker3, Unclassified };
  Tag tag = Tag::Unclassified;
  double R = 0.0;  // inf_i omega_i / i, positive for Ker3
  double A = 0.0;  // kappa_{i,j} <= A * omega_i * omega_j for Ker3

  bool is_ker3() const { return tag == Tag::Ker3; }
};

// Exact for closed-form families; Table kernels are probed up to probe_depth
// and returned Unclassified when the data cannot certify a limit.
HypothesisClass classify_hypothesis(const KernelSpec& spec, std::size_t probe_depth);

}  // namespace rbk

#endif
