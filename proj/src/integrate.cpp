#include "rbk/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbk/errors.hpp"

namespace rbk {

namespace {

// Dormand-Prince 5(4) tableau. The 5th-order weights are row a7 (FSAL).
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
// b - bhat, for the embedded 4th-order error estimate.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

struct ResolvedConfig {
  double dt_init, dt_min, dt_max;
};

ResolvedConfig resolve(const IntegratorConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  ResolvedConfig r;
  r.dt_min = cfg.dt_min > 0.0 ? cfg.dt_min : 1e-12 * cfg.t_end;
  r.dt_max = cfg.dt_max > 0.0 ? cfg.dt_max : cfg.t_end / 16.0;
  r.dt_init = cfg.dt_init;  // 0 = auto, chosen from the initial derivative
  if (r.dt_min > r.dt_max) throw ConfigError("dt_min must not exceed dt_max");
  if (r.dt_init > 0.0 && (r.dt_init < r.dt_min || r.dt_init > r.dt_max))
    throw ConfigError("dt_init must lie in [dt_min, dt_max]");
  return r;
}

double sum_weighted(std::span<const double> w, std::span<const double> f) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += w[k] * f[k];
  return acc;
}

// One 5(4) step against an evaluator; fills y5 and the error estimate and
// returns f(t+dt, y5) in k7 for FSAL reuse.
class Dopri5 {
 public:
  Dopri5(RhsEvaluator& ev) : ev_(ev), n_(ev.size()) {
    for (auto* v : {&k2_, &k3_, &k4_, &k5_, &k6_, &ytmp_}) v->resize(n_);
  }

  void stage(std::span<const double> y, std::span<const double> k1, double dt,
             std::span<double> y5, std::span<double> err, std::span<double> k7) {
    auto& yt = ytmp_;
    for (std::size_t i = 0; i < n_; ++i) yt[i] = y[i] + dt * kA21 * k1[i];
    ev_.derivative(yt, k2_);
    for (std::size_t i = 0; i < n_; ++i) yt[i] = y[i] + dt * (kA31 * k1[i] + kA32 * k2_[i]);
    ev_.derivative(yt, k3_);
    for (std::size_t i = 0; i < n_; ++i)
      yt[i] = y[i] + dt * (kA41 * k1[i] + kA42 * k2_[i] + kA43 * k3_[i]);
    ev_.derivative(yt, k4_);
    for (std::size_t i = 0; i < n_; ++i)
      yt[i] = y[i] + dt * (kA51 * k1[i] + kA52 * k2_[i] + kA53 * k3_[i] + kA54 * k4_[i]);
    ev_.derivative(yt, k5_);
    for (std::size_t i = 0; i < n_; ++i)
      yt[i] = y[i] +
              dt * (kA61 * k1[i] + kA62 * k2_[i] + kA63 * k3_[i] + kA64 * k4_[i] + kA65 * k5_[i]);
    ev_.derivative(yt, k6_);
    for (std::size_t i = 0; i < n_; ++i)
      y5[i] = y[i] +
              dt * (kB1 * k1[i] + kB3 * k3_[i] + kB4 * k4_[i] + kB5 * k5_[i] + kB6 * k6_[i]);
    ev_.derivative(y5, k7);
    for (std::size_t i = 0; i < n_; ++i)
      err[i] = dt * (kE1 * k1[i] + kE3 * k3_[i] + kE4 * k4_[i] + kE5 * k5_[i] + kE6 * k6_[i] +
                     kE7 * k7[i]);
  }

 private:
  RhsEvaluator& ev_;
  std::size_t n_;
  std::vector<double> k2_, k3_, k4_, k5_, k6_, ytmp_;
};

double error_ratio(std::span<const double> y, std::span<const double> y5,
                   std::span<const double> err, double abs_tol, double rel_tol) {
  double r = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
    r = std::max(r, std::abs(err[i]) / sc);
  }
  return r;
}

double hermite(double y0, double y1, double d0, double d1, double h, double s) {
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

std::vector<double> default_samples(const IntegratorConfig& cfg) {
  if (!cfg.sample_times.empty()) return cfg.sample_times;
  return {0.0, cfg.t_end};
}

void check_samples(const std::vector<double>& ts, double t_end) {
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] < 0.0 || ts[k] > t_end) throw ConfigError("sample time outside [0, t_end]");
    if (k > 0 && !(ts[k] > ts[k - 1])) throw ConfigError("sample times must be strictly increasing");
  }
}

}  // namespace

std::vector<double> geometric_sample_times(double t_end, std::size_t count, double t_min) {
  if (!(t_end > 0.0) || count < 1) throw ConfigError("bad sample grid");
  // Early default start so trapezoid integrals resolve stiff transients.
  if (t_min <= 0.0) t_min = 1e-6 * t_end;
  if (!(t_min < t_end)) throw ConfigError("sample t_min must be below t_end");
  std::vector<double> ts;
  ts.reserve(count + 1);
  ts.push_back(0.0);
  if (count == 1) {
    ts.push_back(t_end);
    return ts;
  }
  double lr = std::log(t_end / t_min) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) ts.push_back(t_min * std::exp(lr * static_cast<double>(k)));
  ts.back() = t_end;
  return ts;
}

StepResult step_adaptive(const StateVector& state, const KernelSpec& kernel, double dt,
                         const IntegratorConfig& cfg) {
  ResolvedConfig rc = resolve(cfg);
  if (!(dt >= rc.dt_min && dt <= rc.dt_max))
    throw std::invalid_argument("step_adaptive: dt outside [dt_min, dt_max]");

  const std::size_t n = state.n;
  StepResult res;
  res.next = state;

  for (double v : state.f) {
    if (v < -cfg.negativity_tol) {
      res.accepted = false;
      res.error = std::numeric_limits<double>::infinity();
      return res;  // entry state violates positivity beyond tolerance
    }
  }

  RhsEvaluator ev(kernel, n, RhsPath::Auto);
  Dopri5 stepper(ev);
  std::vector<double> k1(n), k7(n), y5(n), err(n);
  ev.derivative(state.f, k1);
  stepper.stage(state.f, k1, dt, y5, err, k7);
  res.error = error_ratio(state.f, y5, err, cfg.abs_tol, cfg.rel_tol);

  bool negative = false;
  for (double v : y5)
    if (v < -cfg.negativity_tol) negative = true;
  if (res.error > 1.0 || negative) {
    res.accepted = false;
    return res;
  }

  res.accepted = true;
  res.next.t = state.t + dt;
  res.next.f = std::move(y5);
  for (std::size_t i = 0; i < n; ++i) {
    if (res.next.f[i] < 0.0) {
      res.clamped_mass += static_cast<double>(i + 1) * (-res.next.f[i]);
      res.next.f[i] = 0.0;
    }
  }
  return res;
}

StateVector step_semi_implicit(const StateVector& state, const KernelSpec& kernel, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_semi_implicit: dt must be positive");
  RhsEvaluator ev(kernel, state.n, RhsPath::Auto);
  std::vector<double> birth(state.n), rate(state.n);
  ev.parts(state.f, birth, rate);
  StateVector out = state;
  out.t = state.t + dt;
  for (std::size_t i = 0; i < state.n; ++i)
    out.f[i] = (state.f[i] + dt * birth[i]) / (1.0 + dt * rate[i]);
  return out;
}

namespace {

class TrajectoryRecorder {
 public:
  TrajectoryRecorder(TimeSeries& ts, const std::vector<double>& sample_times,
                     std::span<const double> omega)
      : ts_(ts), samples_(sample_times), omega_(omega) {}

  // Emits every pending sample with time in (t0, t1]; state and derivative
  // values at the endpoints define the cubic Hermite interpolant.
  void advance(double t0, std::span<const double> y0, std::span<const double> d0, double t1,
               std::span<const double> y1, std::span<const double> d1, double diss_at_t0,
               double clamped_total) {
    double h = t1 - t0;
    double s0 = sum_weighted(omega_, y0);
    while (next_ < samples_.size() && samples_[next_] <= t1) {
      double tau = samples_[next_];
      double s = (tau - t0) / h;
      std::vector<double> snap(y0.size());
      for (std::size_t i = 0; i < y0.size(); ++i)
        snap[i] = std::max(0.0, hermite(y0[i], y1[i], d0[i], d1[i], h, s));
      double stau = sum_weighted(omega_, snap);
      double diss = diss_at_t0 + (tau - t0) * 0.5 * (s0 * s0 + stau * stau);
      push(tau, std::move(snap), diss, clamped_total);
      ++next_;
    }
  }

  void emit_initial(std::span<const double> y0) {
    if (next_ < samples_.size() && samples_[next_] == 0.0) {
      std::vector<double> snap(y0.size());
      for (std::size_t i = 0; i < y0.size(); ++i) snap[i] = std::max(0.0, y0[i]);
      push(0.0, std::move(snap), 0.0, 0.0);
      ++next_;
    }
  }

  bool done() const { return next_ >= samples_.size(); }

 private:
  void push(double t, std::vector<double>&& snap, double diss, double clamped) {
    ts_.times.push_back(t);
    ts_.moments.push_back(moments_of(snap));
    ts_.dissipation.push_back(diss);
    ts_.clamped_mass.push_back(clamped);
    ts_.states.push_back(std::move(snap));
  }

  TimeSeries& ts_;
  const std::vector<double>& samples_;
  std::span<const double> omega_;
  std::size_t next_ = 0;
};

TimeSeries integrate_adaptive(const StateVector& init, const KernelSpec& kernel,
                              const IntegratorConfig& cfg, RhsPath path, TimeSeries ts) {
  const std::size_t n = init.n;
  ResolvedConfig rc = resolve(cfg);
  RhsEvaluator ev(kernel, n, path);
  Dopri5 stepper(ev);

  std::vector<double> y = init.f;
  std::vector<double> k1(n), k7(n), y5(n), err(n);
  ev.derivative(y, k1);

  const std::vector<double> sample_times = default_samples(cfg);
  check_samples(sample_times, cfg.t_end);
  TrajectoryRecorder rec(ts, sample_times, ev.omega());
  rec.emit_initial(y);

  // Auto initial step from the scaled size of the initial derivative.
  double dt = rc.dt_init;
  if (dt <= 0.0) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    dt = (d0 < 1e-8 || d1 < 1e-8) ? 1e-6 * cfg.t_end : 0.01 * d0 / d1;
    dt = std::clamp(dt, rc.dt_min, rc.dt_max);
  }

  double t = 0.0;
  double diss = 0.0, clamped_total = 0.0;
  bool last_rejected = false;

  while (t < cfg.t_end) {
    const bool final_step = dt >= cfg.t_end - t;
    if (final_step) dt = cfg.t_end - t;
    stepper.stage(y, k1, dt, y5, err, k7);
    double ratio = error_ratio(y, y5, err, cfg.abs_tol, cfg.rel_tol);

    bool negative = false;
    for (double v : y5)
      if (v < -cfg.negativity_tol) negative = true;

    if (ratio > 1.0 || negative) {
      ++ts.stats.rejected;
      double fac = negative && ratio <= 1.0
                       ? 0.5
                       : std::max(kMinFactor, kSafety * std::pow(ratio, -0.2));
      dt *= std::min(fac, 1.0);
      if (dt < rc.dt_min)
        throw StiffnessError(t, "step size underflow at t = " + std::to_string(t));
      last_rejected = true;
      continue;
    }

    ++ts.stats.accepted;
    double t1 = final_step ? cfg.t_end : t + dt;
    double clamp_here = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (y5[i] < 0.0) {
        clamp_here += static_cast<double>(i + 1) * (-y5[i]);
        y5[i] = 0.0;
      }
    }
    clamped_total += clamp_here;

    double s0 = sum_weighted(ev.omega(), y);
    double s1 = sum_weighted(ev.omega(), y5);
    rec.advance(t, y, k1, t1, y5, k7, diss, clamped_total);
    diss += dt * 0.5 * (s0 * s0 + s1 * s1);
    for (std::size_t i = 0; i < n; ++i)
      ts.deriv_l1[i] += dt * 0.5 * (std::abs(k1[i]) + std::abs(k7[i]));

    y.swap(y5);
    if (clamp_here > 0.0)
      ev.derivative(y, k1);  // clamping invalidates the FSAL derivative
    else
      k1.swap(k7);
    t = t1;

    double grow = ratio == 0.0 ? kMaxFactor
                               : std::min(kMaxFactor, kSafety * std::pow(ratio, -0.2));
    if (last_rejected) grow = std::min(grow, 1.0);
    last_rejected = false;
    dt = std::clamp(dt * grow, rc.dt_min, rc.dt_max);
  }
  return ts;
}

TimeSeries integrate_semi_implicit(const StateVector& init, const KernelSpec& kernel,
                                   const IntegratorConfig& cfg, RhsPath path, TimeSeries ts) {
  const std::size_t n = init.n;
  ResolvedConfig rc = resolve(cfg);
  RhsEvaluator ev(kernel, n, path);

  double dt = rc.dt_init > 0.0 ? rc.dt_init : cfg.t_end / 4096.0;

  const std::vector<double> sample_times = default_samples(cfg);
  check_samples(sample_times, cfg.t_end);
  TrajectoryRecorder rec(ts, sample_times, ev.omega());

  std::vector<double> y = init.f, y1(n);
  std::vector<double> birth(n), rate(n), d0(n), d1(n);
  ev.parts(y, birth, rate);
  for (std::size_t i = 0; i < n; ++i) d0[i] = birth[i] - y[i] * rate[i];
  rec.emit_initial(y);

  double t = 0.0, diss = 0.0;
  while (t < cfg.t_end) {
    const bool final_step = dt >= cfg.t_end - t;
    double h = final_step ? cfg.t_end - t : dt;
    for (std::size_t i = 0; i < n; ++i) y1[i] = (y[i] + h * birth[i]) / (1.0 + h * rate[i]);
    double t1 = final_step ? cfg.t_end : t + h;
    ev.parts(y1, birth, rate);
    for (std::size_t i = 0; i < n; ++i) d1[i] = birth[i] - y1[i] * rate[i];

    double s0 = sum_weighted(ev.omega(), y);
    double s1 = sum_weighted(ev.omega(), y1);
    rec.advance(t, y, d0, t1, y1, d1, diss, 0.0);
    diss += h * 0.5 * (s0 * s0 + s1 * s1);
    for (std::size_t i = 0; i < n; ++i)
      ts.deriv_l1[i] += h * 0.5 * (std::abs(d0[i]) + std::abs(d1[i]));

    ++ts.stats.accepted;
    y.swap(y1);
    d0.swap(d1);
    t = t1;
  }
  return ts;
}

}  // namespace

TimeSeries integrate(const StateVector& init, const KernelSpec& kernel,
                     const IntegratorConfig& cfg, RhsPath path) {
  if (init.f.size() != init.n) throw std::invalid_argument("state length mismatch");
  for (double v : init.f)
    if (v < -cfg.negativity_tol) throw std::invalid_argument("initial state has negative entries");

  TimeSeries ts;
  ts.n = init.n;
  ts.deriv_l1.assign(init.n, 0.0);
  ts.initial_moments = moments_of(init.f);
  ts.hypothesis_unclassified =
      classify_hypothesis(kernel, 64).tag == HypothesisClass::Tag::Unclassified;

  if (cfg.method == Method::AdaptiveExplicit)
    return integrate_adaptive(init, kernel, cfg, path, std::move(ts));
  return integrate_semi_implicit(init, kernel, cfg, path, std::move(ts));
}

TimeSeries integrate(const InitResult& init, const KernelSpec& kernel,
                     const IntegratorConfig& cfg, RhsPath path) {
  TimeSeries ts = integrate(init.state, kernel, cfg, path);
  ts.discarded_number = init.discarded_number;
  ts.discarded_mass = init.discarded_mass;
  return ts;
}

}  // namespace rbk
