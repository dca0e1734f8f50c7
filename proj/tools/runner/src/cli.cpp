#include "egtlab/runner/cli.hpp"
#include "egtlab/runner/execute.hpp"
#include "egtlab/runner/spec.hpp"

#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "egtlab/version.hpp"

namespace egt::runner {

namespace {

void report(std::ostream& os, const Json& j) { os << j.dump() << '\n'; }

int fail(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  report(err, Json{{"status", "error"}, {"kind", kind}, {"message", message}});
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evolutionary game theory experiment runner", "egtlab"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string spec_path, out_dir;
  std::uint64_t seed = 0, samples = 0;
  unsigned threads = 1;
  std::vector<CLI::App*> subs;
  for (const auto& kind : experiment_kinds()) {
    CLI::App* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    sub->add_option("--spec", spec_path, "JSON run spec (or a manifest from an earlier run)")->required();
    sub->add_option("--seed", seed, "override the run spec's seed");
    sub->add_option("--samples", samples, "override the sample count (basins, sweep)");
    sub->add_option("--out", out_dir, "override the output directory");
    sub->add_option("--threads", threads, "worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 256u));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    return fail(err, kExitUsage, "usage", e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string kind = sub->get_name();

  std::ifstream in(spec_path);
  if (!in) return fail(err, kExitUsage, "usage", "cannot open spec file '" + spec_path + "'");
  Json raw;
  try {
    raw = Json::parse(in);
  } catch (const std::exception& e) {
    return fail(err, kExitUsage, "parse", "spec file '" + spec_path + "' is not valid JSON: " + e.what());
  }
  if (raw.is_object() && raw.contains("schema_version") && raw.contains("spec")) raw = Json(raw.at("spec"));
  if (!raw.is_object()) return fail(err, kExitUsage, "validation", "run spec must be a JSON object");

  Json overrides = Json::object();
  if (sub->count("--seed")) {
    raw["seed"] = seed;
    overrides["seed"] = seed;
  }
  if (sub->count("--samples")) {
    if (kind != "basins" && kind != "sweep")
      return fail(err, kExitUsage, "usage", "--samples only applies to basins and sweep");
    raw["samples"] = samples;
    overrides["samples"] = samples;
  }
  if (sub->count("--out")) {
    if (!raw.contains("output") || !raw["output"].is_object()) raw["output"] = Json::object();
    raw["output"]["dir"] = out_dir;
    overrides["out"] = out_dir;
  }

  ValidateOptions vopt;
  vopt.experiment = kind;
  vopt.base_dir = std::filesystem::path(spec_path).parent_path();
  if (vopt.base_dir.empty()) vopt.base_dir = ".";
  Validated v = validate(raw, vopt);
  if (!v.ok()) {
    Json errors = Json::array();
    for (const auto& i : v.errors) errors.push_back(Json{{"path", i.path}, {"reason", i.reason}});
    report(err, Json{{"status", "error"}, {"kind", "validation"}, {"errors", errors}});
    return kExitUsage;
  }

  RunOptions ropt;
  ropt.threads = threads;
  ropt.seed_generated = v.seed_generated;
  ropt.overrides = overrides;
  try {
    const RunResult r = execute(v.spec, ropt);
    report(out, Json{{"status", "ok"},
                     {"experiment", kind},
                     {"seed", v.spec.at("seed")},
                     {"out_dir", r.out_dir.string()},
                     {"files", r.files}});
  } catch (const std::exception& e) {
    return fail(err, kExitFailure, "runtime", e.what());
  }
  return kExitOk;
}

}  // namespace egt::runner
