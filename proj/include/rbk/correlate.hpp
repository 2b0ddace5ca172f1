#ifndef RBK_CORRELATE_HPP
#define RBK_CORRELATE_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rbk {

// out_i = sum_{j=1..n-i} a_{i+j} b_j for i = 1..n (so out_n = 0): the lag
// structure of the birth sum. Direct O(n^2) summation.
std::vector<double> correlate_direct(std::span<const double> a, std::span<const double> b);

// Same contract via zero-padded real FFTs of length >= 2n; agrees with the
// direct path to relative 1e-12.
class CorrelationPlan {
 public:
  explicit CorrelationPlan(std::size_t n);
  ~CorrelationPlan();
  CorrelationPlan(CorrelationPlan&&) noexcept;
  CorrelationPlan& operator=(CorrelationPlan&&) noexcept;
  CorrelationPlan(const CorrelationPlan&) = delete;
  CorrelationPlan& operator=(const CorrelationPlan&) = delete;

  std::size_t size() const;
  std::size_t transform_length() const;

  // Not safe for concurrent calls on one plan; use one plan per worker.
  void apply(std::span<const double> a, std::span<const double> b, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> correlate_fft(std::span<const double> a, std::span<const double> b);

}  // namespace rbk

#endif
