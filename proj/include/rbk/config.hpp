#ifndef RBK_CONFIG_HPP
#define RBK_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rbk/integrate.hpp"
#include "rbk/kernel.hpp"
#include "rbk/rhs.hpp"
#include "rbk/state.hpp"

namespace rbk {

// Fully validated run configuration. Parsed from a line-oriented
// `key = value` file with dotted section keys; unknown keys are errors and
// the digest is stable under line reordering.
struct RunConfig {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  KernelSpec kernel;
  InitialData init;
  IntegratorConfig integrator;
  RhsPath rhs_path = RhsPath::Auto;
  std::vector<std::size_t> tail_r = {1, 4, 16};
  std::size_t random_checks = 200;
  std::uint64_t digest = 0;
};

// Throws ConfigError carrying every collected problem, one per line, with
// input line numbers where available.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// FNV-1a over the sorted canonical `key=value` pairs.
std::uint64_t config_digest(const std::string& text);

}  // namespace rbk

#endif
