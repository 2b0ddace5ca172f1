#include "rbk/correlate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace rbk {

std::vector<double> correlate_direct(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("correlate: length mismatch");
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j + i <= n; ++j) acc += a[i + j - 1] * b[j - 1];
    out[i - 1] = acc;
  }
  return out;
}

namespace {

// FFTW's planner is not thread-safe; executing distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

struct CorrelationPlan::Impl {
  std::size_t n = 0;
  std::size_t len = 0;
  double* real = nullptr;
  fftw_complex* fa = nullptr;
  fftw_complex* fb = nullptr;
  fftw_plan fwd{};
  fftw_plan inv{};

  explicit Impl(std::size_t n_in) : n(n_in), len(next_pow2(std::max<std::size_t>(2 * n_in, 2))) {
    real = fftw_alloc_real(len);
    fa = fftw_alloc_complex(len / 2 + 1);
    fb = fftw_alloc_complex(len / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning deterministic for a given length.
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(len), real, fa, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(len), fa, real, FFTW_ESTIMATE);
  }

  ~Impl() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(inv);
    }
    fftw_free(real);
    fftw_free(fa);
    fftw_free(fb);
  }
};

CorrelationPlan::CorrelationPlan(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
CorrelationPlan::~CorrelationPlan() = default;
CorrelationPlan::CorrelationPlan(CorrelationPlan&&) noexcept = default;
CorrelationPlan& CorrelationPlan::operator=(CorrelationPlan&&) noexcept = default;

std::size_t CorrelationPlan::size() const { return impl_->n; }
std::size_t CorrelationPlan::transform_length() const { return impl_->len; }

void CorrelationPlan::apply(std::span<const double> a, std::span<const double> b,
                            std::span<double> out) {
  Impl& im = *impl_;
  const std::size_t n = im.n;
  if (a.size() != n || b.size() != n || out.size() != n)
    throw std::invalid_argument("correlate: length mismatch with plan");

  std::memcpy(im.real, a.data(), n * sizeof(double));
  std::memset(im.real + n, 0, (im.len - n) * sizeof(double));
  fftw_execute_dft_r2c(im.fwd, im.real, im.fa);

  std::memcpy(im.real, b.data(), n * sizeof(double));
  std::memset(im.real + n, 0, (im.len - n) * sizeof(double));
  fftw_execute_dft_r2c(im.fwd, im.real, im.fb);

  // Cross-correlation at nonnegative lags: IFFT(FA * conj(FB)).
  const std::size_t half = im.len / 2 + 1;
  for (std::size_t k = 0; k < half; ++k) {
    double ar = im.fa[k][0], ai = im.fa[k][1];
    double br = im.fb[k][0], bi = im.fb[k][1];
    im.fa[k][0] = ar * br + ai * bi;
    im.fa[k][1] = ai * br - ar * bi;
  }
  fftw_execute_dft_c2r(im.inv, im.fa, im.real);

  const double norm = 1.0 / static_cast<double>(im.len);
  for (std::size_t i = 1; i < n; ++i) out[i - 1] = im.real[i] * norm;
  out[n - 1] = 0.0;
}

std::vector<double> correlate_fft(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("correlate: length mismatch");
  CorrelationPlan plan(a.size());
  std::vector<double> out(a.size());
  plan.apply(a, b, out);
  return out;
}

}  // namespace rbk
