#include "rbk/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rbk/errors.hpp"

namespace rbk {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path states_path_for(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  std::filesystem::path ext = p.extension();
  p.replace_extension();
  p += ".states";
  p += ext;
  return p;
}

void write_series(const TimeSeries& series, const std::filesystem::path& path, SeriesMode mode) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write series file: " + path.string());
  out << "t,M0,Mhalf,M1,dissipation,clamped_mass\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    out << format_g17(series.times[k]) << ',' << format_g17(series.moments[k].m0) << ','
        << format_g17(series.moments[k].mhalf) << ',' << format_g17(series.moments[k].m1) << ','
        << format_g17(series.dissipation[k]) << ',' << format_g17(series.clamped_mass[k]) << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());

  if (mode == SeriesMode::Full) {
    std::filesystem::path spath = states_path_for(path);
    std::ofstream sout(spath);
    if (!sout) throw ConfigError("cannot write states file: " + spath.string());
    sout << 't';
    for (std::size_t i = 1; i <= series.n; ++i) sout << ",f_" << i;
    sout << '\n';
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      sout << format_g17(series.times[k]);
      for (std::size_t i = 0; i < series.n; ++i) sout << ',' << format_g17(series.states[k][i]);
      sout << '\n';
    }
    if (!sout) throw ConfigError("write failed: " + spath.string());
  }
}

MomentRows read_moments_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read series file: " + path.string());
  MomentRows rows;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty series file: " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    double vals[6];
    for (int c = 0; c < 6; ++c) {
      if (!std::getline(ss, tok, ','))
        throw ConfigError("malformed series row in " + path.string());
      vals[c] = std::stod(tok);
    }
    rows.t.push_back(vals[0]);
    rows.m0.push_back(vals[1]);
    rows.mhalf.push_back(vals[2]);
    rows.m1.push_back(vals[3]);
    rows.dissipation.push_back(vals[4]);
    rows.clamped_mass.push_back(vals[5]);
  }
  return rows;
}

TimeSeries series_from_moments(const MomentRows& rows, std::size_t n) {
  if (rows.t.empty()) throw ConfigError("series file holds no samples");
  TimeSeries ts;
  ts.n = n;
  ts.times = rows.t;
  ts.dissipation = rows.dissipation;
  ts.clamped_mass = rows.clamped_mass;
  for (std::size_t k = 0; k < rows.t.size(); ++k) {
    MomentVector m;
    m.m0 = rows.m0[k];
    m.mhalf = rows.mhalf[k];
    m.m1 = rows.m1[k];
    ts.moments.push_back(m);
  }
  ts.initial_moments = ts.moments.front();
  return ts;
}

}  // namespace rbk
