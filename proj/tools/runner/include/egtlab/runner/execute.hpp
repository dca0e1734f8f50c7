#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "egtlab/serialize.hpp"

namespace egt::runner {

struct Artifact {
  std::string name;  ///< file name inside the output directory
  std::string contents;
};

/// Runs a normalized spec and returns its output files in memory. The result
/// depends only on the run spec, never on `threads`.
std::vector<Artifact> produce(const Json& spec, unsigned threads = 1);

/// Writes `contents` to a temporary file next to `path`, then renames it into
/// place, so `path` is either absent or complete.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

struct RunOptions {
  unsigned threads = 1;
  bool seed_generated = false;
  /// Command-line values that replaced spec fields, recorded in the manifest.
  Json overrides = Json::object();
};

struct RunResult {
  std::filesystem::path out_dir;
  std::vector<std::string> files;  ///< artifacts, then manifest.json last
  Json manifest;
};

/// produce() followed by atomic writes into spec.output.dir and a
/// manifest.json that can be passed back as a spec to repeat the run.
RunResult execute(const Json& spec, const RunOptions& options = {});

}  // namespace egt::runner
