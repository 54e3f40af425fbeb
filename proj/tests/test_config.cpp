#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gcalc/config.hpp"
#include "gcalc/errors.hpp"
#include "gcalc/manifest.hpp"

using namespace gcalc;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    Config::from_json(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const Config c;
  const auto doc = c.to_json();
  EXPECT_EQ(Config::from_json(doc).to_json(), doc);
}

TEST(Config, EditedDocumentRoundTrip) {
  auto doc = Config{}.to_json();
  doc["gamma"] = {{"kind", "interval1d"}, {"sigma_low", 0.3}, {"sigma_high", 1.4}};
  doc["pde"]["grid_points"] = 1001;
  doc["pde"]["boundary_policy"] = "clamp";
  doc["sde"]["params"] = {{"nu", 0.5}};
  doc["jensen"]["coefficients"] = {1.0, 2.0};
  const auto once = Config::from_json(doc).to_json();
  EXPECT_EQ(once, doc);
  EXPECT_EQ(Config::from_json(once).to_json(), once);
}

TEST(Config, CommentsAccepted) {
  const auto doc = Config::parse_document(R"({
    // seeds
    "paths": {"seed": 7 /* inline */}
  })");
  EXPECT_EQ(Config::from_json(doc).paths.seed, 7u);
  EXPECT_THROW(Config::parse_document("{ nope"), ConfigError);
}

TEST(Config, FieldLevelErrors) {
  EXPECT_EQ(field_of({{"paths", {{"n_paths", -1}}}}), "paths.n_paths");
  EXPECT_EQ(field_of({{"paths", {{"sed", 1}}}}), "paths.sed");
  EXPECT_EQ(field_of({{"plots", json::object()}}), "plots");
  EXPECT_EQ(field_of({{"risk", {{"sigma_low", 0.5}}}}), "risk.sigma_low");
  EXPECT_EQ(field_of({{"risk", {{"sigma_high", 0.9}}}}), "risk.sigma_high");
  EXPECT_EQ(field_of({{"pde", {{"cfl_factor", 0.7}}}}), "pde");
  EXPECT_EQ(field_of({{"price", {{"payoff", {{"op", "nope"}}}}}}), "price.payoff");
  EXPECT_EQ(field_of({{"gamma", {{"kind", "cube"}}}}), "gamma.kind");
  EXPECT_EQ(field_of({{"sde", {{"horizon", "one"}}}}), "sde.horizon");
}

TEST(Config, EnvironmentOverrides) {
  json doc = {{"paths", {{"seed", 1}}}};
  apply_env_overrides(doc, {{"GCALC_SEED", "99"},
                            {"GCALC_PATHS", "123"},
                            {"GCALC_GRID_POINTS", "501"},
                            {"GCALC_RISK__CLAIM", "neg_qv"},
                            {"GCALC_OUT", "ignored"}});
  const auto c = Config::from_json(doc);
  EXPECT_EQ(c.paths.seed, 99u);
  EXPECT_EQ(c.paths.n_paths, 123u);
  EXPECT_EQ(c.pde.n_points, 501u);
  EXPECT_EQ(c.risk.claim, "neg_qv");
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "gcalc_config_test.json";
  std::ofstream(path) << R"({"suite": {"pde_tolerance": 0.001}})";
  EXPECT_DOUBLE_EQ(Config::load(path.string()).suite.pde_tolerance, 0.001);
  std::filesystem::remove(path);
  EXPECT_THROW(Config::load("/nonexistent/gcalc.json"), ConfigError);
}

TEST(Manifest, Sha256KnownAnswers) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, RecordsOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "gcalc_manifest_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "r.json") << "abc";
  RunManifest m;
  m.command = "price";
  m.seeds = {5};
  m.add_output(dir / "r.json", dir);
  const auto j = m.to_json();
  EXPECT_EQ(j["outputs"][0]["path"], "r.json");
  EXPECT_EQ(j["outputs"][0]["sha256"], sha256_hex("abc"));
  EXPECT_EQ(j["tool_version"], kToolVersion);
  std::filesystem::remove_all(dir);
}
