#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "egtlab/rng.hpp"
#include "egtlab/runner/cli.hpp"
#include "egtlab/runner/execute.hpp"
#include "egtlab/runner/spec.hpp"
#include "support.hpp"

using namespace egt;
using namespace egt::runner;
using testing_support::data_dir;
using testing_support::read_file;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  Json out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "egtlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (!out.str().empty() && out.str().front() == '{') r.out = Json::parse(out.str());
  if (!err.str().empty()) r.err = Json::parse(err.str());
  return r;
}

fs::path write_spec(const fs::path& dir, const std::string& name, const Json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

bool has_issue(const Validated& v, const std::string& path) {
  for (const auto& i : v.errors)
    if (i.path == path) return true;
  return false;
}

std::vector<fs::path> spec_files() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(data_dir() / "specs")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

ValidateOptions in_specs_dir() {
  ValidateOptions o;
  o.base_dir = data_dir() / "specs";
  o.fallback_seed = 1;
  return o;
}

}  // namespace

TEST(Validate, MinimalNashSpec) {
  const Validated v = validate(Json{{"experiment", "nash"}, {"game", "pd"}});
  ASSERT_TRUE(v.ok());
  EXPECT_TRUE(v.seed_generated);
  EXPECT_TRUE(v.spec.at("seed").is_number_unsigned());
  EXPECT_EQ(v.spec.at("mixed"), true);
}

TEST(Validate, FallbackSeed) {
  ValidateOptions o;
  o.fallback_seed = 99;
  const Validated v = validate(Json{{"experiment", "nash"}, {"game", "pd"}}, o);
  EXPECT_EQ(v.spec.at("seed"), 99u);
  EXPECT_TRUE(v.seed_generated);
  const Validated w = validate(Json{{"experiment", "nash"}, {"game", "pd"}, {"seed", 5}}, o);
  EXPECT_EQ(w.spec.at("seed"), 5u);
  EXPECT_FALSE(w.seed_generated);
}

TEST(Validate, FieldPaths) {
  const Json bad{{"experiment", "evolve"}, {"game", "pd"}, {"dynamics", {{"assortment", 1.5}}}};
  const Validated v = validate(bad);
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(has_issue(v, "dynamics.assortment"));

  EXPECT_TRUE(has_issue(validate(Json{{"game", "pd"}}), "experiment"));
  EXPECT_TRUE(has_issue(validate(Json{{"experiment", "dance"}}), "experiment"));
  EXPECT_TRUE(has_issue(validate(Json{{"experiment", "nash"}, {"game", "chess"}}), "game"));
  EXPECT_TRUE(has_issue(validate(Json{{"experiment", "nash"}, {"game", "pd"}, {"colour", 1}}), "colour"));
  EXPECT_TRUE(has_issue(validate(Json{{"experiment", "nash"}, {"game", "pd"}, {"seed", -1}}), "seed"));
  const Json bad_eps{{"experiment", "repeated"}, {"repeated", {{"epsilon", 1.0}}}};
  EXPECT_TRUE(has_issue(validate(bad_eps), "repeated.epsilon"));
  const Json bad_roster{{"experiment", "repeated"}, {"roster", {"TFT", "NOBODY"}}};
  EXPECT_TRUE(has_issue(validate(bad_roster), "roster[1]"));
}

TEST(Validate, ExperimentMustMatchSubcommand) {
  ValidateOptions o;
  o.experiment = "basins";
  EXPECT_FALSE(validate(Json{{"experiment", "nash"}, {"game", "pd"}}, o).ok());
}

TEST(Validate, NormalizeThrowsSpecError) {
  try {
    normalize(Json{{"experiment", "evolve"}, {"game", "pd"}, {"dynamics", {{"step_size", 0}}}});
    FAIL();
  } catch (const SpecError& e) {
    ASSERT_FALSE(e.issues().empty());
    EXPECT_EQ(e.issues()[0].path, "dynamics.step_size");
  }
}

TEST(Validate, NormalizationIsIdempotent) {
  for (const auto& f : spec_files()) {
    const Json raw = Json::parse(read_file(f));
    const Json once = normalize(raw, in_specs_dir());
    const Json twice = normalize(once, in_specs_dir());
    EXPECT_EQ(once, twice) << f;
  }
}

TEST(Validate, AllShippedSpecsAreValid) {
  for (const auto& f : spec_files()) {
    const Validated v = validate(Json::parse(read_file(f)), in_specs_dir());
    EXPECT_TRUE(v.ok()) << f << ": " << (v.ok() ? "" : v.errors[0].path + " " + v.errors[0].reason);
  }
}

TEST(Execute, NashOnPd) {
  TempDir tmp("nash");
  Json spec = normalize(Json{{"experiment", "nash"}, {"game", "pd"}, {"seed", 1}});
  spec["output"]["dir"] = tmp.path().string();
  const RunResult r = execute(spec);
  const Json nash = Json::parse(read_file(tmp.path() / "nash.json"));
  ASSERT_EQ(nash.at("pure_nash").size(), 1u);
  EXPECT_EQ(nash["pure_nash"][0]["row"], "Defect");
  EXPECT_EQ(nash["pure_nash"][0]["col"], "Defect");
  EXPECT_EQ(r.files.back(), "manifest.json");
  const Json m = Json::parse(read_file(tmp.path() / "manifest.json"));
  for (const char* key : {"schema_version", "spec", "seed", "generator", "versions", "wall_time_seconds", "rng"})
    EXPECT_TRUE(m.contains(key)) << key;
  EXPECT_EQ(m.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(m.at("rng"), std::string(Rng::kGeneratorId));
}

TEST(Execute, NoTemporaryFilesRemain) {
  TempDir tmp("atomic");
  Json spec = normalize(Json::parse(read_file(data_dir() / "specs" / "evolve_stag_hunt.json")), in_specs_dir());
  spec["output"]["dir"] = tmp.path().string();
  execute(spec);
  for (const auto& e : fs::directory_iterator(tmp.path()))
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos) << e.path();
}

TEST(Execute, WriteAtomicReplaces) {
  TempDir tmp("write");
  write_atomic(tmp.path() / "x.txt", "one");
  write_atomic(tmp.path() / "x.txt", "two");
  EXPECT_EQ(read_file(tmp.path() / "x.txt"), "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(tmp.path()), fs::directory_iterator{}), 1);
}

TEST(Execute, ProduceIgnoresThreadCount) {
  Json spec = normalize(Json::parse(read_file(data_dir() / "specs" / "basins_ndg.json")), in_specs_dir());
  spec["samples"] = 300;
  const auto a = produce(spec, 1);
  const auto b = produce(spec, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].contents, b[i].contents) << a[i].name;
  }
}

TEST(Cli, StagHuntBasinsHareShare) {
  TempDir tmp("basins");
  const auto r = cli({"basins", "--spec", (data_dir() / "specs" / "basins_stag_hunt.json").string(), "--out",
                      tmp.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json b = Json::parse(read_file(tmp.path() / "basins.json"));
  double hare = -1;
  for (const auto& a : b.at("attractors"))
    if (a.at("label") == "Hare") hare = a.at("fraction");
  EXPECT_GE(hare, 0.64);
  EXPECT_LE(hare, 0.69);
}

TEST(Cli, ManifestRerunIsByteIdentical) {
  TempDir first("rerun-a"), second("rerun-b");
  const auto a = cli({"basins", "--spec", (data_dir() / "specs" / "basins_ndg.json").string(), "--samples", "400",
                      "--out", first.path().string()});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const Json manifest = Json::parse(read_file(first.path() / "manifest.json"));
  EXPECT_EQ(manifest.at("overrides").at("samples"), 400);
  EXPECT_EQ(manifest.at("threads"), 1);

  const auto b = cli({"basins", "--spec", (first.path() / "manifest.json").string(), "--threads", "3", "--out",
                      second.path().string()});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  for (const auto& f : {"basins.csv", "basins.json"})
    EXPECT_EQ(read_file(first.path() / f), read_file(second.path() / f)) << f;
  const Json m2 = Json::parse(read_file(second.path() / "manifest.json"));
  EXPECT_EQ(m2.at("seed"), manifest.at("seed"));
  EXPECT_EQ(m2.at("spec").at("samples"), 400);
}

TEST(Cli, GeneratedSeedIsRecorded) {
  TempDir tmp("seed");
  const auto spec = write_spec(tmp.path(), "s.json", Json{{"experiment", "nash"}, {"game", "pd"}});
  const auto r = cli({"nash", "--spec", spec.string(), "--out", (tmp.path() / "o").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json m = Json::parse(read_file(tmp.path() / "o" / "manifest.json"));
  EXPECT_EQ(m.at("seed_generated"), true);
  EXPECT_EQ(m.at("seed"), r.out.at("seed"));
  EXPECT_EQ(m.at("spec").at("seed"), m.at("seed"));
}

TEST(Cli, SeedOverrideIsRecorded) {
  TempDir tmp("override");
  const auto spec = write_spec(tmp.path(), "s.json", Json{{"experiment", "nash"}, {"game", "pd"}, {"seed", 3}});
  const auto r = cli({"nash", "--spec", spec.string(), "--seed", "17", "--out", (tmp.path() / "o").string()});
  ASSERT_EQ(r.code, kExitOk);
  const Json m = Json::parse(read_file(tmp.path() / "o" / "manifest.json"));
  EXPECT_EQ(m.at("seed"), 17);
  EXPECT_EQ(m.at("overrides").at("seed"), 17);
  EXPECT_EQ(m.at("seed_generated"), false);
}

TEST(Cli, Errors) {
  TempDir tmp("errors");
  const auto missing = cli({"nash", "--spec", (tmp.path() / "nope.json").string()});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_EQ(missing.err.at("status"), "error");

  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"juggle", "--spec", "x"}).err.at("kind"), "usage");

  const auto text = tmp.path() / "bad.json";
  std::ofstream(text) << "{ not json";
  EXPECT_EQ(cli({"nash", "--spec", text.string()}).err.at("kind"), "parse");

  const auto invalid = write_spec(tmp.path(), "invalid.json",
                                  Json{{"experiment", "evolve"}, {"game", "pd"}, {"dynamics", {{"assortment", 1.5}}}});
  const auto v = cli({"evolve", "--spec", invalid.string()});
  EXPECT_EQ(v.code, kExitUsage);
  EXPECT_EQ(v.err.at("kind"), "validation");
  EXPECT_EQ(v.err.at("errors")[0].at("path"), "dynamics.assortment");

  const auto nash = write_spec(tmp.path(), "nash.json", Json{{"experiment", "nash"}, {"game", "pd"}});
  EXPECT_EQ(cli({"nash", "--spec", nash.string(), "--samples", "5"}).code, kExitUsage);
  EXPECT_EQ(cli({"basins", "--spec", nash.string()}).err.at("kind"), "validation");
  EXPECT_EQ(cli({"nash", "--spec", nash.string(), "--threads", "0"}).code, kExitUsage);
}

TEST(Cli, RealBinary) {
  TempDir tmp("binary");
  const std::string cmd = std::string("\"") + EGTLAB_CLI + "\" nash --spec \"" +
                          (data_dir() / "specs" / "nash_pd.json").string() + "\" --out \"" +
                          (tmp.path() / "o").string() + "\" > \"" + (tmp.path() / "stdout.txt").string() + "\"";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(Json::parse(read_file(tmp.path() / "stdout.txt")).at("status"), "ok");
  EXPECT_TRUE(fs::exists(tmp.path() / "o" / "nash.json"));

  const std::string bad = std::string("\"") + EGTLAB_CLI + "\" nash --spec /nonexistent.json 2> \"" +
                          (tmp.path() / "stderr.txt").string() + "\"";
  const int status = std::system(bad.c_str());
  EXPECT_NE(status, 0);
  EXPECT_EQ(Json::parse(read_file(tmp.path() / "stderr.txt")).at("status"), "error");
}
