#ifndef RBK_SERIES_IO_HPP
#define RBK_SERIES_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "rbk/integrate.hpp"

namespace rbk {

enum class SeriesMode { Moments, Full };

// Moments mode writes `t,M0,Mhalf,M1,dissipation,clamped_mass` rows at 17
// significant digits (lossless for 64-bit floats). Full mode additionally
// writes the per-size densities to states_path_for(path).
void write_series(const TimeSeries& series, const std::filesystem::path& path, SeriesMode mode);

std::filesystem::path states_path_for(const std::filesystem::path& path);

std::string format_g17(double v);

struct MomentRows {
  std::vector<double> t, m0, mhalf, m1, dissipation, clamped_mass;
};

MomentRows read_moments_csv(const std::filesystem::path& path);

// Moment-level trajectory reconstructed from a stored CSV: no per-size
// snapshots or derivative accumulators, so checks that need them report
// "not evaluated".
TimeSeries series_from_moments(const MomentRows& rows, std::size_t n);

}  // namespace rbk

#endif
