#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gtsc/gtsc_model.hpp"
#include "gtsc/simulator.hpp"

namespace gtsc {

/// Environment variable consulted for the default seed.
inline constexpr const char* kSeedEnvVar = "GTSC_SEED";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Options shared by the command-line tools. Keys match the long flag names
/// (q, dH, c, alpha, rho, seed, grid-min, ...).
struct RunConfig {
  GtscParams model{};
  std::uint64_t seed = kDefaultSeed;
  std::string out;  ///< empty: standard output

  double grid_min = 0.0;
  double grid_max = 20.0;
  int grid_n = 41;
  std::vector<double> alphas;  ///< optional alpha sweep

  double u = 20.0;
  long n_ruined = 10'000;
  long max_paths = 50'000'000;
  std::optional<double> epsilon;  ///< unset: a fixed 0.05 default
  double dt = 0.05;
  std::optional<double> barrier;  ///< unset: default_barrier
  std::optional<double> horizon;  ///< unset: 50 (u + barrier) / q
  int workers = 0;
  bool gaussian_correction = false;

  /// Throws DomainError naming the offending key.
  void validate() const;
  std::vector<double> grid() const;
  SimScheme scheme(const RegimeReport& report) const;

  bool operator==(const RunConfig&) const = default;
};

/// Assigns one key. Throws DomainError for unknown keys or unparsable values.
void set_option(RunConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` lines; `#` starts a comment.
void apply_config_stream(RunConfig& config, std::istream& in);
void apply_config_file(RunConfig& config, const std::string& path);

/// Seed from kSeedEnvVar when set, else kDefaultSeed.
std::uint64_t default_seed();

/// Shortest round-trip representation (17 significant digits).
std::string format_number(double x);

/// `# key=value` lines echoing the model, seed and grid (plus regime constants when
/// a report is given). parse_metadata_header reads them back; derived keys
/// (regime, nu0, beta1, beta2 and any key containing an underscore) are skipped
/// on the way in.
std::string metadata_header(const RunConfig& config, const RegimeReport* report = nullptr,
                            bool include_simulation = false);
RunConfig parse_metadata_header(std::istream& in);
bool is_derived_key(const std::string& key);

}  // namespace gtsc
