#include "doctest.h"
#include "mecbf/harness.hpp"
#include "support.hpp"

using namespace mecbf;
using doctest::Approx;

namespace {

ScenarioConfig small(Algorithm a, int frames = 2, int slots = 3) {
  ScenarioConfig c = desk_scale();
  c.algorithm = a;
  c.frames = frames;
  c.slots = slots;
  c.trials = 1;
  return c;
}

bool has_flag(const SlotRecord& r, const std::string& f) {
  return ("|" + r.flags + "|").find("|" + f + "|") != std::string::npos;
}

}  // namespace

TEST_CASE("defaults follow the simulated setup") {
  const ScenarioConfig c;
  CHECK(c.frames == 100);
  CHECK(c.slots == 100);
  CHECK(c.dims.n_bs == 64);
  CHECK(c.p_bs == Approx(db_to_linear(40.0, DbMode::kMilliwatt)));
  CHECK(c.violations().empty());
  CHECK(c.effective_csi_delay() == Approx(4e-3 * (2.0 * 4.0) / (8.0 * 64.0)));
  CHECK(c.rician_factor() == Approx(1.0 / 1.5));

  ScenarioConfig bad = c;
  bad.frames = 0;
  bad.p_ua = -1.0;
  CHECK(bad.violations().size() >= 2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("algorithm and axis names") {
  for (Algorithm a : {Algorithm::kPcccp, Algorithm::kHeuristic, Algorithm::kBinary, Algorithm::kIdealCsi}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK(to_string(Algorithm::kIdealCsi) == "ideal-csi");
  CHECK_THROWS_AS(parse_algorithm("greedy"), std::invalid_argument);
  CHECK(parse_axis("p_ua") == SweepAxis::kPowerUa);
  CHECK_THROWS_AS(parse_axis("x"), std::invalid_argument);
}

TEST_CASE("axis application") {
  const ScenarioConfig c;
  CHECK(apply_axis(c, SweepAxis::kPowerUa, 0.05).p_ua == 0.05);
  const ScenarioConfig far = apply_axis(c, SweepAxis::kDistanceY, 200.0);
  CHECK(far.geometry.user_a[1] == 200.0);
  CHECK(far.geometry.user_b[1] == 200.0);
  CHECK(apply_axis(c, SweepAxis::kComputeRatio, 4.0).compute.edge_bps == Approx(4.0 * c.compute.local_bps));
  CHECK(apply_axis(c, SweepAxis::kRician, 2.5).rician_factor() == Approx(2.5));
  CHECK(apply_axis(c, SweepAxis::kPhaseBits, 4).phase_bits == 4);
  CHECK_THROWS_AS(apply_axis(c, SweepAxis::kPhaseBits, 2.5), std::invalid_argument);
}

TEST_CASE("CSI overhead") {
  const SystemDims d;
  CHECK(csi_overhead(d, 100, 1, CsiScheme::kTwoTimescale) == 1776);
  CHECK(csi_overhead(d, 100, 1, CsiScheme::kSingleTimescale) == 57600);
  CHECK(csi_overhead(d, 100, 8, CsiScheme::kTwoTimescale) == 1776 * 8);
  // One slot: the full-CSI term on top of one effective-CSI report.
  const std::uint64_t full = csi_overhead(d, 1, 1, CsiScheme::kSingleTimescale);
  CHECK(csi_overhead(d, 1, 1, CsiScheme::kTwoTimescale) == full + (4 * 2 + 2 * 2));
  // More BS antennas widen the gap.
  auto ratio = [](int n) {
    const SystemDims dn = SystemDims::with_streams(n, 8, 8, 4, 2, 2);
    return static_cast<double>(csi_overhead(dn, 100, 1, CsiScheme::kSingleTimescale)) /
           static_cast<double>(csi_overhead(dn, 100, 1, CsiScheme::kTwoTimescale));
  };
  CHECK(ratio(128) > ratio(64));
  CHECK_THROWS_AS(csi_overhead(d, 0, 1, CsiScheme::kTwoTimescale), std::invalid_argument);
}

TEST_CASE("zero channels trigger the degenerate path") {
  const ScenarioConfig c = small(Algorithm::kHeuristic);
  const SystemDims& d = c.dims;
  RngStream rng = test::rng_for(80);
  const AnalogSet a = AnalogSet::random(rng, d);
  ChannelTriple zero{CMatrix::Zero(d.n_bs, d.n_a), CMatrix::Zero(d.n_b, d.n_bs), CMatrix::Zero(d.n_b, d.n_a)};
  const SlotRecord r = run_slot(a, {zero, zero}, c);
  CHECK(r.r1 == Approx(0.0));
  CHECK(r.failed);
  CHECK(has_flag(r, "no-link"));

  // Only the D2D link dead: full offloading, no failure.
  ChannelTriple part{test::random_matrix(rng, d.n_bs, d.n_a, 1e-5),
                     test::random_matrix(rng, d.n_b, d.n_bs, 1e-5), CMatrix::Zero(d.n_b, d.n_a)};
  const SlotRecord q = run_slot(a, {part, part}, c);
  CHECK(q.rho == 1.0);
  CHECK_FALSE(q.failed);
}

TEST_CASE("slot records") {
  const ScenarioConfig c = small(Algorithm::kBinary);
  const SuperframeResult r = run_superframe(c);
  REQUIRE(r.slots.size() == 6);
  REQUIRE(r.frames.size() == 2);
  for (const SlotRecord& s : r.slots) {
    CHECK((s.rho == 0.0 || s.rho == 1.0));
    CHECK(s.algorithm == "binary");
    CHECK(s.t_total > 0.0);
  }
  CHECK(r.slots[4].frame == 1);
  CHECK(r.slots[4].slot == 1);
}

TEST_CASE("pcccp slots do not lose to the heuristic") {
  ScenarioConfig hc = small(Algorithm::kHeuristic, 2, 4);
  ScenarioConfig pc = hc;
  pc.algorithm = Algorithm::kPcccp;
  int wins = 0, n = 0;
  for (int t = 0; t < 3; ++t) {
    const auto h = run_trial(hc, t).slots;
    const auto p = run_trial(pc, t).slots;
    REQUIRE(h.size() == p.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      wins += p[i].t_total <= h[i].t_total + 1e-6 ? 1 : 0;
      ++n;
    }
  }
  CHECK(wins >= 0.9 * n);
}

TEST_CASE("static channels make the CSI delay irrelevant") {
  ScenarioConfig a = small(Algorithm::kHeuristic);
  a.doppler_hz = 0.0;
  a.tau_csi = 0.0;
  ScenarioConfig b = a;
  b.tau_csi = 7e-3;
  const auto ra = run_superframe(a).slots;
  const auto rb = run_superframe(b).slots;
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].t_total == rb[i].t_total);
    CHECK(ra[i].rho == rb[i].rho);
  }
}

TEST_CASE("runs are reproducible and trials differ") {
  ScenarioConfig c = small(Algorithm::kPcccp);
  c.superframes = 2;
  const auto a = run_trial(c, 0).slots;
  const auto b = run_trial(c, 0).slots;
  const auto other = run_trial(c, 1).slots;
  REQUIRE(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t_total == b[i].t_total);
    CHECK(a[i].r3 == b[i].r3);
  }
  CHECK(a[0].t_total != other[0].t_total);
  CHECK(a[6].superframe == 1);
}

TEST_CASE("analog learning shortens latency") {
  ScenarioConfig c = desk_scale();
  c.algorithm = Algorithm::kHeuristic;
  c.frames = 100;
  c.slots = 2;
  double first = 0.0, last = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const SuperframeResult r = run_trial(c, t);
    for (int f = 0; f < 10; ++f) first += r.frames[f].mean_t_total;
    for (int f = 90; f < 100; ++f) last += r.frames[f].mean_t_total;
  }
  CHECK(last < first);
}

TEST_CASE("sweep rows") {
  ScenarioConfig c = small(Algorithm::kHeuristic, 1, 2);
  c.trials = 2;
  const std::vector<double> v = {0.01, 0.05, 0.1, 0.15, 0.2};
  const auto rows = run_sweep(c, SweepAxis::kPowerUa, v, {Algorithm::kHeuristic, Algorithm::kBinary});
  REQUIRE(rows.size() == 10);
  for (const SweepRow& r : rows) {
    CHECK(r.axis == "p_ua");
    CHECK(r.trials == 2);
    CHECK(r.slots == 4);
    CHECK(r.stderr_t_total >= 0.0);
  }
}

TEST_CASE("analog learning trace") {
  ScenarioConfig c = desk_scale();
  c.frames = 30;
  const LearningResult r = learn_analog(c, 0, 20);
  REQUIRE(r.capacity.size() == 31);
  REQUIRE(r.sample_objective.size() == 30);
  CHECK(r.capacity.back() > r.capacity.front());

  c.frames = 5;
  const ConvergenceResult conv = convergence_run(c, 5);
  CHECK_FALSE(conv.uplink.trace.empty());
  CHECK(conv.uplink.penalty < c.pcccp.delta2);
}
