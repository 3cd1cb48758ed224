#include "gtsc/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "gtsc/errors.hpp"
#include "gtsc/limit_laws.hpp"

namespace gtsc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw DomainError("invalid value for " + key + ": '" + value + "'");
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) bad_value(key, value);
  return x;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value);
  return x;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  bad_value(key, value);
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  if (!(grid_min >= 0.0) || grid_n < 1 || (grid_n > 1 && !(grid_max > grid_min))) {
    throw DomainError("grid: requires 0 <= grid-min < grid-max and grid-n >= 1");
  }
  for (double a : alphas) {
    if (!(a > 0.0)) throw DomainError("alphas: values must be > 0");
  }
  if (!(u > 0.0)) throw DomainError("u must be > 0");
  if (n_ruined < 1) throw DomainError("n-ruined must be >= 1");
  if (max_paths < 1) throw DomainError("max-paths must be >= 1");
  if (epsilon && !(*epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  if (barrier && !(*barrier > 0.0)) throw DomainError("barrier must be > 0");
  if (horizon && !(*horizon > 0.0)) throw DomainError("horizon must be > 0");
  if (workers < 0) throw DomainError("workers must be >= 0");
}

std::vector<double> RunConfig::grid() const { return linear_grid(grid_min, grid_max, grid_n); }

SimScheme RunConfig::scheme(const RegimeReport& report) const {
  SimScheme s;
  s.epsilon = epsilon.value_or(0.05);
  s.use_gaussian_correction = gaussian_correction;
  s.dt = dt;
  s.barrier = barrier ? *barrier : default_barrier(model, report);
  s.horizon = horizon ? *horizon : 50.0 * (u + s.barrier) / model.q;
  s.seed = seed;
  s.validate();
  return s;
}

void set_option(RunConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "q") {
    c.model.q = to_double(key, value);
  } else if (key == "dH") {
    c.model.d_H = to_double(key, value);
  } else if (key == "c") {
    c.model.c = to_double(key, value);
  } else if (key == "alpha") {
    c.model.alpha = to_double(key, value);
  } else if (key == "rho") {
    c.model.rho = to_double(key, value);
  } else if (key == "seed") {
    c.seed = to_integer<std::uint64_t>(key, value);
  } else if (key == "out") {
    c.out = trim(value);
  } else if (key == "grid-min") {
    c.grid_min = to_double(key, value);
  } else if (key == "grid-max") {
    c.grid_max = to_double(key, value);
  } else if (key == "grid-n") {
    c.grid_n = to_integer<int>(key, value);
  } else if (key == "alphas") {
    c.alphas.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) c.alphas.push_back(to_double(key, item));
  } else if (key == "u") {
    c.u = to_double(key, value);
  } else if (key == "n-ruined") {
    c.n_ruined = to_integer<long>(key, value);
  } else if (key == "max-paths") {
    c.max_paths = to_integer<long>(key, value);
  } else if (key == "epsilon") {
    c.epsilon = to_double(key, value);
  } else if (key == "dt") {
    c.dt = to_double(key, value);
  } else if (key == "barrier") {
    c.barrier = to_double(key, value);
  } else if (key == "horizon") {
    c.horizon = to_double(key, value);
  } else if (key == "workers") {
    c.workers = to_integer<int>(key, value);
  } else if (key == "gaussian-correction") {
    c.gaussian_correction = to_bool(key, value);
  } else {
    throw DomainError("unknown configuration key '" + key + "'");
  }
}

void apply_config_stream(RunConfig& config, std::istream& in) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(number) + ": expected key = value");
    }
    set_option(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file " + path);
  apply_config_stream(config, in);
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  return to_integer<std::uint64_t>(kSeedEnvVar, env);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string metadata_header(const RunConfig& c, const RegimeReport* report,
                            bool include_simulation) {
  std::ostringstream out;
  const auto line = [&](const char* key, const std::string& value) {
    out << "# " << key << '=' << value << '\n';
  };
  line("q", format_number(c.model.q));
  line("dH", format_number(c.model.d_H));
  line("c", format_number(c.model.c));
  line("alpha", format_number(c.model.alpha));
  line("rho", format_number(c.model.rho));
  line("seed", std::to_string(c.seed));
  line("grid-min", format_number(c.grid_min));
  line("grid-max", format_number(c.grid_max));
  line("grid-n", std::to_string(c.grid_n));
  if (!c.out.empty()) line("out", c.out);
  if (!c.alphas.empty()) {
    std::string list;
    for (double a : c.alphas) list += (list.empty() ? "" : ",") + format_number(a);
    line("alphas", list);
  }
  if (include_simulation) {
    line("u", format_number(c.u));
    line("n-ruined", std::to_string(c.n_ruined));
    line("max-paths", std::to_string(c.max_paths));
    if (c.epsilon) line("epsilon", format_number(*c.epsilon));
    line("dt", format_number(c.dt));
    if (c.barrier) line("barrier", format_number(*c.barrier));
    if (c.horizon) line("horizon", format_number(*c.horizon));
    line("workers", std::to_string(c.workers));
    line("gaussian-correction", c.gaussian_correction ? "true" : "false");
  }
  if (report != nullptr) {
    line("regime", std::string(to_string(report->regime)));
    line("f_alpha", format_number(report->f_alpha));
    if (report->nu0) line("nu0", format_number(*report->nu0));
    if (report->m_star) line("m_star", format_number(*report->m_star));
    if (report->beta1) line("beta1", format_number(*report->beta1));
    if (report->beta2) line("beta2", format_number(*report->beta2));
  }
  return out.str();
}

bool is_derived_key(const std::string& key) {
  return key == "regime" || key == "nu0" || key == "beta1" || key == "beta2" ||
         key.find('_') != std::string::npos;
}

RunConfig parse_metadata_header(std::istream& in) {
  RunConfig c;
  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(1, eq - 1));
    if (is_derived_key(key)) continue;
    set_option(c, key, line.substr(eq + 1));
  }
  return c;
}

}  // namespace gtsc
