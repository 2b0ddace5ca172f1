#ifndef RBK_SSA_HPP
#define RBK_SSA_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rbk/kernel.hpp"
#include "rbk/state.hpp"

namespace rbk {

// Finite-volume particle configuration. counts[k] holds the number of
// size-(k+1) clusters; a collision of sizes i and j leaves one cluster of
// size |i-j|, and size-0 products vanish, so the support never grows.
struct SsaState {
  std::vector<std::int64_t> counts;
  double volume = 1.0;
  double t = 0.0;
  std::uint64_t seed = 0;
};

struct SsaEvent {
  double t;
  std::size_t i, j;  // colliding sizes, i <= j
};

struct SsaTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> density;  // N_i / V snapshots
  std::vector<MomentVector> moments;         // empirical moments of N_i / V
  std::size_t events = 0;
  SsaState final_state;
  double rounding_residual = 0.0;  // sum_i |N_i(0)/V - f_i^in|
  std::uint64_t seed = 0;
  std::vector<SsaEvent> event_log;  // filled only when requested
};

struct SsaOptions {
  bool record_events = false;
};

// Exact event-driven simulation with rates
//   theta_{i,j} N_i N_j / V            (i != j)
//   theta_{i,i} N_i (N_i - 1) / (2V)   (equal sizes),
// exponential waiting times, and the replicate stream derived from the seed
// by a SplitMix64 mix feeding mt19937_64. Identical seed and inputs give a
// bit-identical event log.
SsaTrajectory ssa_run(const InitialData& init, std::size_t n, const KernelSpec& kernel,
                      double volume, double t_end, std::uint64_t seed,
                      std::span<const double> sample_times, const SsaOptions& options = {});

struct SsaEnsemble {
  std::vector<double> times;
  std::vector<double> mean_m0, se_m0;
  std::vector<double> mean_mhalf, se_mhalf;
  std::vector<double> mean_m1, se_m1;
  std::vector<std::vector<double>> mean_density, se_density;
  std::vector<std::size_t> events_per_replicate;
};

// Replicates run concurrently on independent streams; the reduction is
// deterministic in seed-list order.
SsaEnsemble ssa_ensemble(const InitialData& init, std::size_t n, const KernelSpec& kernel,
                         double volume, double t_end, std::span<const std::uint64_t> seeds,
                         std::span<const double> sample_times);

// Expected instantaneous drift of N_i / V at the given configuration, by
// direct enumeration of the event space. Matches rhs_naive of the empirical
// density plus the finite-volume diagonal correction theta_{i,i} f_i / V.
std::vector<double> ssa_drift(const SsaState& state, const KernelSpec& kernel);

// SplitMix64 output stream; also used to derive replicate seeds.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace rbk

#endif
