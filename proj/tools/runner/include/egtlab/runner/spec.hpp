#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "egtlab/basins.hpp"
#include "egtlab/dynamics.hpp"
#include "egtlab/games.hpp"
#include "egtlab/repeated.hpp"
#include "egtlab/serialize.hpp"
#include "egtlab/spatial.hpp"

namespace egt::runner {

inline constexpr int kSchemaVersion = 1;

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"nash", "evolve", "basins", "repeated", "sweep", "spatial"};
  return kinds;
}

struct ValidationIssue {
  std::string path;    ///< dotted field path, e.g. "dynamics.assortment"
  std::string reason;
};

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

struct ValidateOptions {
  /// Subcommand the spec is run under; a run spec naming another experiment is an error.
  std::optional<std::string> experiment;
  /// Relative "file" references are resolved against this directory.
  std::filesystem::path base_dir = ".";
  /// Used when the run spec has no seed. Unset means draw one from std::random_device.
  std::optional<std::uint64_t> fallback_seed;
};

struct Validated {
  Json spec;  ///< normalized: every default filled in, file references inlined
  std::vector<ValidationIssue> errors;
  bool seed_generated = false;
  bool ok() const { return errors.empty(); }
};

/// Checks a parsed run spec and fills in defaults. Never throws on bad input;
/// every problem is reported with its field path.
Validated validate(const Json& raw, const ValidateOptions& options = {});

/// Like validate() but throws SpecError when anything is wrong.
Json normalize(const Json& raw, const ValidateOptions& options = {});

// Builders for a normalized spec. They assume validate() succeeded.
MatrixGame build_game(const Json& game_spec);
std::vector<StrategyAutomaton> build_roster(const Json& roster_spec);
RepeatedGameParams build_params(const Json& params_spec);
DynamicsConfig build_dynamics(const Json& dynamics_spec, std::uint64_t seed);
/// The spec's game, or the game induced by its roster.
MatrixGame resolve_game(const Json& spec);

}  // namespace egt::runner
