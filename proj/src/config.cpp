#include "rbk/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rbk/errors.hpp"

namespace rbk {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

using Pairs = std::map<std::string, Entry>;

Pairs tokenize(const std::string& text, std::vector<std::string>& errors) {
  Pairs pairs;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    auto [it, inserted] = pairs.emplace(key, Entry{value, lineno});
    if (!inserted)
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key +
                       "' (first on line " + std::to_string(it->second.line) + ")");
  }
  return pairs;
}

const std::vector<std::string> kKnownKeys = {
    "n",
    "seed",
    "kernel.family",
    "kernel.alpha",
    "kernel.scale",
    "kernel.c",
    "kernel.A",
    "kernel.table",
    "init.family",
    "init.size",
    "init.density",
    "init.ratio",
    "init.p",
    "init.table",
    "integrator.method",
    "integrator.abs_tol",
    "integrator.rel_tol",
    "integrator.dt_init",
    "integrator.dt_min",
    "integrator.dt_max",
    "integrator.negativity_tol",
    "integrator.t_end",
    "integrator.samples",
    "integrator.sample_t_min",
    "rhs.path",
    "diagnostics.r_list",
    "diagnostics.random_checks",
};

class Reader {
 public:
  Reader(const Pairs& pairs, std::vector<std::string>& errors) : pairs_(pairs), errors_(errors) {}

  bool has(const std::string& key) const { return pairs_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback = "") {
    auto it = pairs_.find(key);
    return it == pairs_.end() ? fallback : it->second.value;
  }

  double num(const std::string& key, double fallback) {
    auto it = pairs_.find(key);
    if (it == pairs_.end()) return fallback;
    return parse_double(it->second);
  }

  double required_num(const std::string& key) {
    auto it = pairs_.find(key);
    if (it == pairs_.end()) {
      errors_.push_back("missing required key '" + key + "'");
      return 0.0;
    }
    return parse_double(it->second);
  }

  std::uint64_t uint(const std::string& key, std::uint64_t fallback) {
    auto it = pairs_.find(key);
    if (it == pairs_.end()) return fallback;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(it->second.value.data(),
                                   it->second.value.data() + it->second.value.size(), v);
    if (ec != std::errc() || p != it->second.value.data() + it->second.value.size()) {
      errors_.push_back("line " + std::to_string(it->second.line) + ": '" + key +
                        "' must be a nonnegative integer");
      return fallback;
    }
    return v;
  }

  std::vector<double> list(const std::string& key) {
    auto it = pairs_.find(key);
    std::vector<double> out;
    if (it == pairs_.end()) return out;
    std::istringstream ss(it->second.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        errors_.push_back("line " + std::to_string(it->second.line) + ": '" + key +
                          "' has a non-numeric entry '" + tok + "'");
      }
    }
    return out;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = pairs_.find(key);
    return it == pairs_.end() ? 0 : it->second.line;
  }

 private:
  double parse_double(const Entry& e) {
    try {
      std::size_t used = 0;
      double v = std::stod(e.value, &used);
      if (used != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      errors_.push_back("line " + std::to_string(e.line) + ": expected a number, got '" + e.value +
                        "'");
      return 0.0;
    }
  }

  const Pairs& pairs_;
  std::vector<std::string>& errors_;
};

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t config_digest(const std::string& text) {
  std::vector<std::string> errors;
  Pairs pairs = tokenize(text, errors);
  std::string canonical;
  for (const auto& [key, entry] : pairs) {  // std::map iterates in key order
    canonical += key;
    canonical += '=';
    canonical += entry.value;
    canonical += '\n';
  }
  return fnv1a(canonical);
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  Pairs pairs = tokenize(text, errors);

  for (const auto& [key, entry] : pairs) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
      errors.push_back("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
  }

  Reader rd(pairs, errors);
  RunConfig cfg;

  double n_val = rd.required_num("n");
  if (n_val < 2 || n_val != static_cast<double>(static_cast<std::size_t>(n_val)))
    errors.push_back("'n' must be an integer >= 2");
  else
    cfg.n = static_cast<std::size_t>(n_val);

  cfg.seed = rd.uint("seed", 0);

  // Kernel section.
  std::string kf = rd.str("kernel.family");
  if (kf.empty()) {
    errors.push_back("missing required key 'kernel.family'");
  } else if (kf == "constant") {
    cfg.kernel = KernelSpec::constant(rd.required_num("kernel.c"));
  } else if (kf == "product") {
    cfg.kernel = KernelSpec::separable_power(rd.required_num("kernel.alpha"),
                                             rd.num("kernel.scale", 1.0));
  } else if (kf == "product_plus_constant") {
    cfg.kernel = KernelSpec::separable_plus_constant(
        rd.required_num("kernel.alpha"), rd.num("kernel.scale", 1.0), rd.required_num("kernel.c"));
  } else if (kf == "product_plus_bounded") {
    cfg.kernel = KernelSpec::separable_plus_bounded(
        rd.required_num("kernel.alpha"), rd.num("kernel.scale", 1.0), rd.required_num("kernel.A"));
  } else if (kf == "table") {
    std::vector<double> entries = rd.list("kernel.table");
    if (entries.empty()) {
      errors.push_back("missing required key 'kernel.table'");
    } else {
      try {
        cfg.kernel = KernelSpec::table(std::move(entries));
      } catch (const ConfigError& e) {
        errors.push_back(std::string(e.what()) + " (line " +
                         std::to_string(rd.line_of("kernel.table")) + ")");
      }
    }
  } else {
    errors.push_back("line " + std::to_string(rd.line_of("kernel.family")) +
                     ": unknown kernel family '" + kf + "'");
  }

  // Initial data section.
  std::string inf = rd.str("init.family");
  if (inf.empty()) {
    errors.push_back("missing required key 'init.family'");
  } else if (inf == "monodisperse") {
    double s = rd.required_num("init.size");
    cfg.init = InitialData::monodisperse(static_cast<std::size_t>(s), rd.num("init.density", 1.0));
    if (s < 1 || s != static_cast<double>(cfg.init.size))
      errors.push_back("'init.size' must be a positive integer");
  } else if (inf == "geometric") {
    cfg.init = InitialData::geometric(rd.required_num("init.ratio"), rd.num("init.density", 1.0));
  } else if (inf == "heavytail") {
    cfg.init = InitialData::heavy_tail(rd.required_num("init.p"), rd.num("init.density", 1.0));
  } else if (inf == "table") {
    cfg.init = InitialData::explicit_table(rd.list("init.table"));
    if (cfg.init.table.empty()) errors.push_back("missing required key 'init.table'");
  } else {
    errors.push_back("line " + std::to_string(rd.line_of("init.family")) +
                     ": unknown init family '" + inf + "'");
  }

  // Integrator section.
  std::string method = rd.str("integrator.method", "adaptive-explicit");
  if (method == "adaptive-explicit") {
    cfg.integrator.method = Method::AdaptiveExplicit;
  } else if (method == "semi-implicit") {
    cfg.integrator.method = Method::SemiImplicit;
  } else {
    errors.push_back("line " + std::to_string(rd.line_of("integrator.method")) +
                     ": unknown integrator method '" + method + "'");
  }
  cfg.integrator.abs_tol = rd.num("integrator.abs_tol", 1e-10);
  cfg.integrator.rel_tol = rd.num("integrator.rel_tol", 1e-8);
  cfg.integrator.dt_init = rd.num("integrator.dt_init", 0.0);
  cfg.integrator.dt_min = rd.num("integrator.dt_min", 0.0);
  cfg.integrator.dt_max = rd.num("integrator.dt_max", 0.0);
  cfg.integrator.negativity_tol = rd.num("integrator.negativity_tol", 1e-12);
  cfg.integrator.t_end = rd.required_num("integrator.t_end");
  if (errors.empty() && !(cfg.integrator.t_end > 0.0))
    errors.push_back("'integrator.t_end' must be positive");

  // Samples: a count, or an explicit comma-separated time list.
  std::string samples = rd.str("integrator.samples");
  double sample_t_min = rd.num("integrator.sample_t_min", 0.0);
  if (errors.empty()) {
    if (samples.empty()) {
      cfg.integrator.sample_times = geometric_sample_times(cfg.integrator.t_end, 256, sample_t_min);
    } else if (samples.find(',') == std::string::npos) {
      double cnt = rd.num("integrator.samples", 256.0);
      if (cnt < 1)
        errors.push_back("'integrator.samples' must be a positive count or a time list");
      else
        cfg.integrator.sample_times = geometric_sample_times(
            cfg.integrator.t_end, static_cast<std::size_t>(cnt), sample_t_min);
    } else {
      cfg.integrator.sample_times = rd.list("integrator.samples");
    }
  }

  std::string path = rd.str("rhs.path", "auto");
  if (path == "naive")
    cfg.rhs_path = RhsPath::Naive;
  else if (path == "fast")
    cfg.rhs_path = RhsPath::Fast;
  else if (path == "auto")
    cfg.rhs_path = RhsPath::Auto;
  else
    errors.push_back("line " + std::to_string(rd.line_of("rhs.path")) + ": unknown rhs path '" +
                     path + "'");

  const bool explicit_r_list = rd.has("diagnostics.r_list");
  if (explicit_r_list) {
    cfg.tail_r.clear();
    for (double v : rd.list("diagnostics.r_list")) {
      if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
        errors.push_back("'diagnostics.r_list' entries must be positive integers");
      else
        cfg.tail_r.push_back(static_cast<std::size_t>(v));
    }
  }
  cfg.random_checks = static_cast<std::size_t>(rd.num("diagnostics.random_checks", 200.0));

  // Cross-section validation that needs n.
  if (errors.empty()) {
    try {
      (void)init_state(cfg.init, cfg.n);
    } catch (const ConfigError& e) {
      errors.push_back(e.what());
    }
    if (cfg.kernel.family() == KernelFamily::Table && cfg.kernel.table_size() < cfg.n)
      errors.push_back("kernel table size cap is below n");
    if (explicit_r_list) {
      for (std::size_t r : cfg.tail_r)
        if (r > cfg.n) errors.push_back("'diagnostics.r_list' entry exceeds n");
    } else {
      std::erase_if(cfg.tail_r, [&](std::size_t r) { return r > cfg.n; });
    }
  }

  if (!errors.empty()) {
    std::string msg = "configuration invalid:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }

  cfg.digest = config_digest(text);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace rbk
