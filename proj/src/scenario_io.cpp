#include "tp/scenario_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace tp::io {

namespace {

using nlohmann::json;

const json& require_object(const json& node, const std::string& path,
                           std::initializer_list<std::string_view> keys) {
  if (!node.is_object()) throw ValidationError(path.empty() ? "$" : path, "expected an object");
  const std::string prefix = path.empty() ? "" : path + ".";
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (const auto k : keys) known = known || key == k;
    if (!known) throw ValidationError(prefix + key, "unknown key");
  }
  for (const auto k : keys) {
    if (!node.contains(k)) throw ValidationError(prefix + std::string(k), "missing required key");
  }
  return node;
}

double number_at(const json& node, const std::string& path, std::string_view key) {
  const json& value = node.at(std::string(key));
  const std::string field = (path.empty() ? "" : path + ".") + std::string(key);
  if (!value.is_number()) throw ValidationError(field, "expected a number");
  return value.get<double>();
}

const json& pair_at(const json& node, std::string_view key) {
  const json& value = node.at(std::string(key));
  if (!value.is_array() || value.size() != 2)
    throw ValidationError(std::string(key), "expected an array of exactly 2 objects");
  return value;
}

Jurisdiction jurisdiction_from(const json& node, const std::string& path) {
  require_object(node, path, {"tax_rate", "theta", "unit_penalty"});
  return {number_at(node, path, "tax_rate"), number_at(node, path, "theta"),
          number_at(node, path, "unit_penalty")};
}

DivisionEconomics division_from(const json& node, const std::string& path) {
  require_object(node, path,
                 {"sales", "revenue_linear", "revenue_quadratic", "cost_linear", "cost_quadratic"});
  return {number_at(node, path, "sales"), number_at(node, path, "revenue_linear"),
          number_at(node, path, "revenue_quadratic"), number_at(node, path, "cost_linear"),
          number_at(node, path, "cost_quadratic")};
}

}  // namespace

Scenario scenario_from_json(const json& document) {
  require_object(document, "", {"jurisdictions", "divisions", "trade_quantity", "band"});
  const json& jurisdictions = pair_at(document, "jurisdictions");
  const json& divisions = pair_at(document, "divisions");
  const json& band = require_object(document.at("band"), "band", {"w", "limit_above", "limit_below", "r"});

  Scenario s;
  s.jurisdiction_1 = jurisdiction_from(jurisdictions[0], "jurisdictions[0]");
  s.jurisdiction_2 = jurisdiction_from(jurisdictions[1], "jurisdictions[1]");
  s.division_1 = division_from(divisions[0], "divisions[0]");
  s.division_2 = division_from(divisions[1], "divisions[1]");
  s.trade_quantity = number_at(document, "", "trade_quantity");
  s.band = {number_at(band, "band", "w"), number_at(band, "band", "limit_above"),
            number_at(band, "band", "limit_below"), number_at(band, "band", "r")};
  return s;
}

json scenario_to_json(const Scenario& s) {
  const auto jurisdiction = [](const Jurisdiction& j) {
    return json{{"tax_rate", j.tax_rate}, {"theta", j.enforcement_theta},
                {"unit_penalty", j.unit_penalty}};
  };
  const auto division = [](const DivisionEconomics& d) {
    return json{{"sales", d.domestic_sales},
                {"revenue_linear", d.revenue_linear},
                {"revenue_quadratic", d.revenue_quadratic},
                {"cost_linear", d.cost_linear},
                {"cost_quadratic", d.cost_quadratic}};
  };
  return json{
      {"jurisdictions", json::array({jurisdiction(s.jurisdiction_1), jurisdiction(s.jurisdiction_2)})},
      {"divisions", json::array({division(s.division_1), division(s.division_2)})},
      {"trade_quantity", s.trade_quantity},
      {"band",
       {{"w", s.band.arms_length_price},
        {"limit_above", s.band.limit_above},
        {"limit_below", s.band.limit_below},
        {"r", s.band.convexity}}}};
}

std::string scenario_digest(const json& document) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : document.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << hash;
  return out.str();
}

LoadedScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");

  json document;
  try {
    document = json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("$", std::string("malformed JSON: ") + e.what());
  }
  LoadedScenario loaded;
  loaded.scenario = scenario_from_json(document);
  loaded.warnings = validate(loaded.scenario);
  loaded.digest = scenario_digest(document);
  return loaded;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void append_run_record(const std::filesystem::path& manifest, const RunRecord& record) {
  std::error_code ec;
  if (manifest.has_parent_path()) std::filesystem::create_directories(manifest.parent_path(), ec);
  if (ec) throw IoError("cannot create '" + manifest.parent_path().string() + "': " + ec.message());

  const json line{{"timestamp", record.timestamp},
                  {"command_line", record.command_line},
                  {"scenario_digest", record.scenario_digest},
                  {"outputs", record.output_paths},
                  {"exit_code", record.exit_code}};
  std::ofstream out(manifest, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open manifest '" + manifest.string() + "'");
  out << line.dump() << '\n';
  if (!out) throw IoError("cannot write manifest '" + manifest.string() + "'");
}

}  // namespace tp::io
