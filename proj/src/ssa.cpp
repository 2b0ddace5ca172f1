#include "rbk/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rbk/errors.hpp"
#include "rbk/parallel.hpp"

namespace rbk {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

// Uniform in (0, 1], safe for -log.
double uniform_pos(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

struct PairRates {
  // Ordered scan over occupied pairs (i <= j); total W and selection by a
  // single uniform draw keep the event log reproducible.
  double total = 0.0;
  std::vector<std::size_t> occupied;

  void rebuild(const std::vector<std::int64_t>& counts) {
    occupied.clear();
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (counts[k] > 0) occupied.push_back(k + 1);
  }

  double rate(const KernelSpec& kernel, const std::vector<std::int64_t>& counts, double volume,
              std::size_t i, std::size_t j) const {
    double ni = static_cast<double>(counts[i - 1]);
    if (i == j) return kernel.eval(i, i) * ni * (ni - 1.0) / (2.0 * volume);
    double nj = static_cast<double>(counts[j - 1]);
    return kernel.eval(i, j) * ni * nj / volume;
  }

  double total_rate(const KernelSpec& kernel, const std::vector<std::int64_t>& counts,
                    double volume) {
    double w = 0.0;
    for (std::size_t a = 0; a < occupied.size(); ++a)
      for (std::size_t b = a; b < occupied.size(); ++b)
        w += rate(kernel, counts, volume, occupied[a], occupied[b]);
    return w;
  }
};

}  // namespace

SsaTrajectory ssa_run(const InitialData& init, std::size_t n, const KernelSpec& kernel,
                      double volume, double t_end, std::uint64_t seed,
                      std::span<const double> sample_times, const SsaOptions& options) {
  if (!(volume > 0.0)) throw ConfigError("ssa volume must be positive");

  const InitResult ir = init_state(init, n);
  SsaState state;
  state.volume = volume;
  state.seed = seed;
  state.counts.assign(n, 0);
  double rounding = 0.0;
  std::int64_t total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    auto c = static_cast<std::int64_t>(std::llround(volume * ir.state.f[k]));
    state.counts[k] = c;
    total += c;
    rounding += std::abs(static_cast<double>(c) / volume - ir.state.f[k]);
  }
  if (total == 0) throw ConfigError("ssa initial configuration has no particles");

  SsaTrajectory traj;
  traj.seed = seed;
  traj.rounding_residual = rounding;

  std::uint64_t mix = seed;
  std::mt19937_64 rng(splitmix64(mix));

  PairRates pairs;
  pairs.rebuild(state.counts);

  auto snapshot = [&](double t) {
    std::vector<double> dens(n);
    for (std::size_t k = 0; k < n; ++k) dens[k] = static_cast<double>(state.counts[k]) / volume;
    traj.times.push_back(t);
    traj.moments.push_back(moments_of(dens));
    traj.density.push_back(std::move(dens));
  };

  std::size_t next_sample = 0;
  // Samples strictly before an event see the pre-event configuration; the
  // jump process is right-continuous.
  auto emit_before = [&](double t) {
    while (next_sample < sample_times.size() && sample_times[next_sample] < t) {
      snapshot(sample_times[next_sample]);
      ++next_sample;
    }
  };
  auto emit_through = [&](double t) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
      snapshot(sample_times[next_sample]);
      ++next_sample;
    }
  };

  double t = 0.0;
  while (t < t_end) {
    double w = pairs.total_rate(kernel, state.counts, volume);
    if (w <= 0.0) break;  // no admissible event remains
    double wait = -std::log(uniform_pos(rng)) / w;
    double t_next = t + wait;
    if (t_next > t_end) {
      t = t_end;
      break;
    }
    emit_before(t_next);

    // Select the event pair proportionally to its rate term.
    double target = uniform_pos(rng) * w;
    std::size_t ei = 0, ej = 0;
    double acc = 0.0;
    for (std::size_t a = 0; a < pairs.occupied.size() && ei == 0; ++a) {
      for (std::size_t b = a; b < pairs.occupied.size(); ++b) {
        double rab = pairs.rate(kernel, state.counts, volume, pairs.occupied[a], pairs.occupied[b]);
        if (rab <= 0.0) continue;
        acc += rab;
        if (acc >= target) {
          ei = pairs.occupied[a];
          ej = pairs.occupied[b];
          break;
        }
      }
    }
    if (ei == 0) {  // round-off at target ~ w: keep the last positive pair
      for (std::size_t a = pairs.occupied.size(); a-- > 0 && ei == 0;) {
        for (std::size_t b = pairs.occupied.size(); b-- > a && ei == 0;) {
          if (pairs.rate(kernel, state.counts, volume, pairs.occupied[a], pairs.occupied[b]) > 0.0) {
            ei = pairs.occupied[a];
            ej = pairs.occupied[b];
          }
        }
      }
    }

    if (ei == ej) {
      state.counts[ei - 1] -= 2;  // size-0 product vanishes
    } else {
      state.counts[ei - 1] -= 1;
      state.counts[ej - 1] -= 1;
      state.counts[(ej - ei) - 1] += 1;
    }
    t = t_next;
    ++traj.events;
    if (options.record_events) traj.event_log.push_back({t, ei, ej});
    pairs.rebuild(state.counts);
  }

  emit_through(t_end);
  state.t = t_end;
  traj.final_state = state;
  return traj;
}

SsaEnsemble ssa_ensemble(const InitialData& init, std::size_t n, const KernelSpec& kernel,
                         double volume, double t_end, std::span<const std::uint64_t> seeds,
                         std::span<const double> sample_times) {
  if (seeds.size() < 2) throw ConfigError("ssa ensemble needs at least 2 seeds");

  const std::size_t reps = seeds.size();
  std::vector<SsaTrajectory> runs(reps);
  parallel_for(reps, [&](std::size_t k) {
    runs[k] = ssa_run(init, n, kernel, volume, t_end, seeds[k], sample_times);
  });

  const std::size_t s = sample_times.size();
  SsaEnsemble ens;
  ens.times.assign(sample_times.begin(), sample_times.end());
  ens.mean_m0.assign(s, 0.0);
  ens.se_m0.assign(s, 0.0);
  ens.mean_mhalf.assign(s, 0.0);
  ens.se_mhalf.assign(s, 0.0);
  ens.mean_m1.assign(s, 0.0);
  ens.se_m1.assign(s, 0.0);
  ens.mean_density.assign(s, std::vector<double>(n, 0.0));
  ens.se_density.assign(s, std::vector<double>(n, 0.0));
  for (const auto& run : runs) ens.events_per_replicate.push_back(run.events);

  auto reduce = [&](auto value, std::vector<double>& mean, std::vector<double>& se) {
    for (std::size_t k = 0; k < s; ++k) {
      double sum = 0.0;
      for (const auto& run : runs) sum += value(run, k);
      double mu = sum / static_cast<double>(reps);
      double var = 0.0;
      for (const auto& run : runs) {
        double d = value(run, k) - mu;
        var += d * d;
      }
      var /= static_cast<double>(reps - 1);
      mean[k] = mu;
      se[k] = std::sqrt(var / static_cast<double>(reps));
    }
  };
  reduce([](const SsaTrajectory& r, std::size_t k) { return r.moments[k].m0; }, ens.mean_m0,
         ens.se_m0);
  reduce([](const SsaTrajectory& r, std::size_t k) { return r.moments[k].mhalf; }, ens.mean_mhalf,
         ens.se_mhalf);
  reduce([](const SsaTrajectory& r, std::size_t k) { return r.moments[k].m1; }, ens.mean_m1,
         ens.se_m1);

  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const auto& run : runs) sum += run.density[k][i];
      double mu = sum / static_cast<double>(reps);
      double var = 0.0;
      for (const auto& run : runs) {
        double d = run.density[k][i] - mu;
        var += d * d;
      }
      var /= static_cast<double>(reps - 1);
      ens.mean_density[k][i] = mu;
      ens.se_density[k][i] = std::sqrt(var / static_cast<double>(reps));
    }
  }
  return ens;
}

std::vector<double> ssa_drift(const SsaState& state, const KernelSpec& kernel) {
  const std::size_t n = state.counts.size();
  const double v = state.volume;
  std::vector<double> drift(n, 0.0);

  for (std::size_t i = 1; i <= n; ++i) {
    if (state.counts[i - 1] <= 0) continue;
    double ni = static_cast<double>(state.counts[i - 1]);

    // Equal pair: removes two size-i clusters.
    double diag_rate = kernel.eval(i, i) * ni * (ni - 1.0) / (2.0 * v);
    drift[i - 1] += diag_rate * (-2.0) / v;

    for (std::size_t j = i + 1; j <= n; ++j) {
      if (state.counts[j - 1] <= 0) continue;
      double nj = static_cast<double>(state.counts[j - 1]);
      double rate = kernel.eval(i, j) * ni * nj / v;
      drift[i - 1] += rate * (-1.0) / v;
      drift[j - 1] += rate * (-1.0) / v;
      drift[(j - i) - 1] += rate * (+1.0) / v;
    }
  }
  return drift;
}

}  // namespace rbk
