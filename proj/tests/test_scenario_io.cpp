#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "tp/scenario_io.hpp"

namespace tp::io {
namespace {

using nlohmann::json;

std::string field_of(const json& doc) {
  try {
    (void)validate(scenario_from_json(doc));
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<valid>";
}

json canonical_json() { return scenario_to_json(testing::canonical_scenario()); }

TEST(ScenarioJson, LoadsCanonicalFile) {
  const LoadedScenario loaded = load_scenario(TP_SCENARIO_DIR "/canonical.json");
  const Scenario& s = loaded.scenario;
  EXPECT_EQ(s.jurisdiction_2.tax_rate, 0.3);
  EXPECT_EQ(s.jurisdiction_2.enforcement_theta, 0.8);
  EXPECT_EQ(s.division_1.domestic_sales, 50.0);
  EXPECT_EQ(s.band.limit_above, 20.0);
  EXPECT_EQ(s.trade_quantity, 100.0);
  EXPECT_EQ(loaded.digest.size(), 16u);
  EXPECT_TRUE(loaded.warnings.empty());
}

TEST(ScenarioJson, RoundTripPreservesEveryField) {
  oracle::SplitMix64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Scenario s = testing::random_interior_scenario(rng, rng.uniform(1.1, 5.0));
    const json doc = scenario_to_json(s);
    const Scenario back = scenario_from_json(json::parse(doc.dump()));
    EXPECT_EQ(scenario_to_json(back), doc);
  }
}

TEST(ScenarioJson, UnknownKeysAreErrors) {
  json doc = canonical_json();
  doc["band"]["R"] = 2;
  EXPECT_EQ(field_of(doc), "band.R");
  doc = canonical_json();
  doc["jurisdictions"][1]["thetta"] = 0.8;
  EXPECT_EQ(field_of(doc), "jurisdictions[1].thetta");
  doc = canonical_json();
  doc["comment"] = "x";
  EXPECT_EQ(field_of(doc), "comment");
}

TEST(ScenarioJson, MissingAndMistypedFields) {
  json doc = canonical_json();
  doc["divisions"][0].erase("cost_linear");
  EXPECT_EQ(field_of(doc), "divisions[0].cost_linear");
  doc = canonical_json();
  doc["trade_quantity"] = "100";
  EXPECT_EQ(field_of(doc), "trade_quantity");
  doc = canonical_json();
  doc["jurisdictions"].erase(1);
  EXPECT_EQ(field_of(doc), "jurisdictions");
}

TEST(ScenarioJson, InvariantViolationsCarryPaths) {
  json doc = canonical_json();
  doc["band"]["r"] = 0.5;
  EXPECT_EQ(field_of(doc), "band.r");
  doc = canonical_json();
  doc["jurisdictions"][1]["theta"] = 1.2;
  EXPECT_EQ(field_of(doc), "jurisdictions[1].theta");
}

TEST(ScenarioDigest, IgnoresFormattingAndKeyOrder) {
  const json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  const json b = json::parse("{\n  \"a\": [1,2],\n  \"b\": 1\n}");
  EXPECT_EQ(scenario_digest(a), scenario_digest(b));
  EXPECT_NE(scenario_digest(a), scenario_digest(json::parse(R"({"b": 2, "a": [1, 2]})")));
}

TEST(LoadScenario, MissingFileIsIoError) {
  EXPECT_THROW(load_scenario("/nonexistent/definitely/missing.json"), IoError);
}

TEST(LoadScenario, MalformedJsonIsValidationError) {
  const auto path = std::filesystem::temp_directory_path() / "tp_malformed.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_scenario(path), ValidationError);
  std::filesystem::remove(path);
}

TEST(RunRecord, AppendsOneJsonLinePerCall) {
  const auto dir = std::filesystem::temp_directory_path() / "tp_manifest_test";
  std::filesystem::remove_all(dir);
  const auto manifest = dir / "runs" / "manifest.log";
  append_run_record(manifest, {"2026-01-01T00:00:00Z", "tp solve a.json", "abc", {}, 0});
  append_run_record(manifest, {utc_timestamp_now(), "tp sweep a.json", "abc", {"out.csv"}, 0});

  std::ifstream in(manifest);
  std::string line;
  std::vector<json> lines;
  while (std::getline(in, line)) lines.push_back(json::parse(line));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["timestamp"], "2026-01-01T00:00:00Z");
  EXPECT_EQ(lines[1]["outputs"][0], "out.csv");
  const std::string ts = lines[1]["timestamp"];
  EXPECT_EQ(ts.size(), 20u);
  EXPECT_EQ(ts.back(), 'Z');
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace tp::io
