#include <sstream>

#include "doctest.h"
#include "mecbf/config.hpp"
#include "mecbf/records.hpp"
#include "support.hpp"
#include "json.hpp"

using namespace mecbf;
using doctest::Approx;

TEST_CASE("empty config gives the default scenario") {
  const ScenarioConfig c = parse_config_text("");
  CHECK(same_config(c, ScenarioConfig{}));
  CHECK(c.dims.n_bs == 64);
  CHECK(c.p_bs == Approx(10.0));
  CHECK(c.compute.task_bits == 1e6);
  CHECK(c.compute.compression == 0.01);
}

TEST_CASE("config keys") {
  const ScenarioConfig c = parse_config_text(
      "scenario:\n  n_bs_antennas: 16\n  p_ua_w: 0.05\nsim:\n  algorithm: heuristic\n"
      "ssca.schedule: geometric\nn_rf_a: 2\n");
  CHECK(c.dims.n_bs == 16);
  CHECK(c.p_ua == 0.05);
  CHECK(c.algorithm == Algorithm::kHeuristic);
  CHECK(c.schedule.kind == ScheduleKind::kGeometric);

  try {
    parse_config_text("scenario:\n  n_bs_antennas: -1\n");
    FAIL("expected a violation");
  } catch (const ConfigError& e) {
    CHECK_FALSE(e.problems().empty());
    CHECK(std::string(e.what()).find("N > 0") != std::string::npos);
  }
  try {
    parse_config_text("scenario.bogus: 1\nsim.frames: many\n");
    FAIL("expected errors");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 2);
    CHECK(std::string(e.what()).find("scenario.bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("sim.frames: 3\nsim:\n  frames: 4\n"), ConfigError);
}

TEST_CASE("config round trip and digest") {
  ScenarioConfig c = desk_scale();
  c.p_ua = 0.1234567890123;
  c.geometry = LinkGeometry::with_users(7.0, 123.25);
  c.schedule.kind = ScheduleKind::kGeometric;
  c.seed = 18446744073709551557ULL;
  const std::string text = serialize_config(c);
  const ScenarioConfig back = parse_config_text(text);
  CHECK(same_config(back, c));
  CHECK(serialize_config(back) == text);
  CHECK(config_digest(back) == config_digest(c));
  CHECK(config_digest(c).size() == 64);
  c.p_ua = 0.2;
  CHECK(config_digest(back) != config_digest(c));
  for (const std::string& k : config_keys()) CHECK(text.find(k + ":") != std::string::npos);
}

TEST_CASE("manifest") {
  const RunManifest m = make_manifest(ScenarioConfig{}, "mecbf run");
  const auto j = nlohmann::json::parse(manifest_json(m));
  CHECK(j.at("config_digest") == config_digest(ScenarioConfig{}));
  CHECK(j.at("artifact_version") == kArtifactVersion);
  CHECK(j.at("started_utc").get<std::string>().size() == 20);
}

namespace {

std::vector<SlotRecord> sample_records() {
  std::vector<SlotRecord> v;
  RngStream rng = test::rng_for(90);
  for (int i = 0; i < 20; ++i) {
    SlotRecord r;
    r.superframe = i / 10;
    r.frame = i % 5;
    r.slot = i;
    r.algorithm = i % 2 ? "pcccp" : "ideal-csi";
    r.rho = rng.uniform(0.0, 1.0);
    r.r1 = rng.uniform(0.0, 3e9);
    r.r2 = 1.0 / 3.0;
    r.r3 = i == 3 ? 0.0 : rng.uniform(0.0, 3e9);
    r.t_total = i == 7 ? std::numeric_limits<double>::infinity() : rng.uniform(1e-4, 1e-2);
    r.latency_case = 1 + i % 4;
    r.penalty = 1e-9 * i;
    r.flags = i == 7 ? "infinite-latency" : (i == 4 ? "regularized-uplink|degenerate-A1" : "");
    r.failed = i == 7;
    v.push_back(r);
  }
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string t;
  while (std::getline(ss, t, ',')) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("CSV emission") {
  CHECK(emit_results({}, OutputFormat::kCsv) == std::string(kSlotCsvHeader) + "\n");
  const auto recs = sample_records();
  const std::string csv = slot_csv(recs);
  const auto back = parse_slot_csv(csv);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(same_emitted(back[i], recs[i]));
    CHECK(back[i].failed == recs[i].failed);
  }
  CHECK(slot_csv(back) == csv);
  CHECK(csv.find("0.333333333333,") != std::string::npos);
  CHECK_THROWS_AS(parse_slot_csv("a,b\n"), std::invalid_argument);
}

TEST_CASE("JSON emission") {
  const auto recs = sample_records();
  const std::string js = emit_results(recs, OutputFormat::kJson);
  const auto j = nlohmann::json::parse(js);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.at(0).items()) keys.push_back(k);
  auto header = tokens(kSlotCsvHeader);
  std::sort(keys.begin(), keys.end());
  std::sort(header.begin(), header.end());
  CHECK(keys == header);
  const auto back = parse_slot_json(js);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(same_emitted(back[i], recs[i]));
  CHECK(emit_results(back, OutputFormat::kJson) == js);
}

TEST_CASE("sweep emission") {
  SweepRow r;
  r.axis = "p_ua";
  r.value = 0.05;
  r.algorithm = "pcccp";
  r.mean_t_total = 1.5e-3;
  r.trials = 20;
  const std::string csv = sweep_csv({r, r});
  CHECK(csv.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(nlohmann::json::parse(sweep_json({r})).at(0).at("trials") == 20);
}
