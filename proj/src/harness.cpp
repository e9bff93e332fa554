#include "mecbf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecbf/offload.hpp"

namespace mecbf {
namespace {

std::uint64_t tag(StreamPurpose p) { return static_cast<std::uint64_t>(p); }

std::uint64_t pack(int hi, int lo) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(hi)) << 32) |
         static_cast<std::uint32_t>(lo);
}

struct LinkProcesses {
  ChannelProcess up, down, d2d;

  ChannelTriple triple() const { return {up.matrix(), down.matrix(), d2d.matrix()}; }

  LinkProcesses evolved(double dt) const {
    return {evolve_channel(up, dt), evolve_channel(down, dt), evolve_channel(d2d, dt)};
  }
};

// Angles for one super frame; gains are drawn too but replaced per frame.
LinkProcesses superframe_processes(const ScenarioConfig& cfg, int trial, int superframe) {
  const RngStream base(cfg.seed, static_cast<std::uint64_t>(trial));
  const std::vector<double> var = path_variances(cfg.num_paths, cfg.los_variance, cfg.nlos_variance);
  const SystemDims& d = cfg.dims;
  const LinkGeometry& g = cfg.geometry;
  auto make = [&](int link, int n_rx, int n_tx, double dist, double beta) {
    RngStream rng = base.derive(tag(StreamPurpose::kAngles), static_cast<std::uint64_t>(superframe),
                                static_cast<std::uint64_t>(link));
    ChannelProcess p;
    p.paths = draw_paths(rng, var);
    p.n_rx = n_rx;
    p.n_tx = n_tx;
    p.doppler_hz = cfg.doppler_hz;
    p.power_gain = path_loss(dist, beta, g.c0_db, g.d0);
    return p;
  };
  return {make(1, d.n_bs, d.n_a, g.uplink_distance(), g.beta_up),
          make(2, d.n_b, d.n_bs, g.downlink_distance(), g.beta_down),
          make(3, d.n_b, d.n_a, g.d2d_distance(), g.beta_d2d)};
}

LinkProcesses with_fresh_gains(const LinkProcesses& procs, RngStream rng) {
  LinkProcesses out = procs;
  for (ChannelProcess* p : {&out.up, &out.down, &out.d2d}) {
    redraw_gains(rng, p->paths);
    p->elapsed_s = 0.0;
  }
  return out;
}

LinkProcesses frame_processes(const ScenarioConfig& cfg, const LinkProcesses& sf_procs,
                              int trial, int superframe, int frame) {
  const RngStream base(cfg.seed, static_cast<std::uint64_t>(trial));
  return with_fresh_gains(sf_procs,
                          base.derive(tag(StreamPurpose::kGains), pack(superframe, frame)));
}

AnalogSet initial_analog(const ScenarioConfig& cfg, int trial) {
  RngStream rng = RngStream(cfg.seed, static_cast<std::uint64_t>(trial))
                      .derive(tag(StreamPurpose::kAnalogInit));
  return AnalogSet::random(rng, cfg.dims);
}

AnalogSet used_phases(const AnalogSet& a, int bits) { return bits > 0 ? a.quantized(bits) : a; }

void add_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += '|';
  flags += f;
}

const LinkParams& link_params(const ScenarioConfig& cfg, LinkKind kind) {
  switch (kind) {
    case LinkKind::kUplink:
      return cfg.uplink;
    case LinkKind::kDownlink:
      return cfg.downlink;
    case LinkKind::kD2d:
      break;
  }
  return cfg.d2d;
}

const CMatrix& channel_of(const ChannelTriple& h, LinkKind kind) {
  switch (kind) {
    case LinkKind::kUplink:
      return h.h1;
    case LinkKind::kDownlink:
      return h.h2;
    case LinkKind::kD2d:
      break;
  }
  return h.h3;
}

// Mean and standard error of `xs`.
std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kPcccp:
      return "pcccp";
    case Algorithm::kHeuristic:
      return "heuristic";
    case Algorithm::kBinary:
      return "binary";
    case Algorithm::kIdealCsi:
      return "ideal-csi";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "pcccp") return Algorithm::kPcccp;
  if (name == "heuristic") return Algorithm::kHeuristic;
  if (name == "binary") return Algorithm::kBinary;
  if (name == "ideal-csi") return Algorithm::kIdealCsi;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> v = validate_dims(dims);
  auto need = [&](bool ok, const char* what) {
    if (!ok) v.emplace_back(what);
  };
  need(pa.p_max > 0.0, "pa.p_max > 0");
  need(p_ua > 0.0, "p_ua > 0");
  need(p_bs > 0.0, "p_bs > 0");
  for (const LinkParams* l : {&uplink, &downlink, &d2d}) {
    need(l->bandwidth_hz > 0.0, "bandwidth > 0");
    need(l->noise_w > 0.0, "noise > 0");
  }
  need(compute.task_bits > 0.0, "task_bits > 0");
  need(compute.compression >= 0.0 && compute.compression <= 1.0, "compression in [0, 1]");
  need(compute.local_bps > 0.0, "local_bps > 0");
  need(compute.edge_bps > 0.0, "edge_bps > 0");
  need(num_paths >= 1, "num_paths >= 1");
  need(los_variance > 0.0 && nlos_variance > 0.0, "path variances > 0");
  need(doppler_hz >= 0.0, "doppler_hz >= 0");
  need(tau_csi >= 0.0, "tau_csi >= 0");
  need(slot_s > 0.0, "slot_s > 0");
  need(frames >= 1, "frames >= 1");
  need(slots >= 1, "slots >= 1");
  need(superframes >= 1, "superframes >= 1");
  need(csi_bits >= 1, "csi_bits >= 1");
  need(phase_bits >= 0 && phase_bits <= 24, "phase_bits in [0, 24]");
  need(trials >= 1, "trials >= 1");
  need(varpi > 0.0, "varpi > 0");
  need(ideal_csi_iterations >= 1, "ideal_csi_iterations >= 1");
  need(max_failure_rate >= 0.0 && max_failure_rate <= 1.0, "max_failure_rate in [0, 1]");
  need(geometry.beta_up > 0.0 && geometry.beta_down > 0.0 && geometry.beta_d2d > 0.0,
       "path-loss exponents > 0");
  need(geometry.d0 > 0.0, "d0 > 0");
  need(geometry.uplink_distance() > 0.0 && geometry.downlink_distance() > 0.0 &&
           geometry.d2d_distance() > 0.0,
       "distinct node positions");
  try {
    schedule.validate();
  } catch (const std::invalid_argument& e) {
    v.emplace_back(e.what());
  }
  try {
    pcccp.validate();
  } catch (const std::invalid_argument& e) {
    v.emplace_back(e.what());
  }
  return v;
}

void ScenarioConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& s : v) msg += "\n  " + s;
  throw std::invalid_argument(msg);
}

double ScenarioConfig::rician_factor() const {
  return los_variance / (nlos_variance * static_cast<double>(num_paths - 1));
}

double ScenarioConfig::effective_csi_delay() const {
  return static_cast<double>(dims.n_rfb * dims.n_rf) / static_cast<double>(dims.n_b * dims.n_bs) *
         tau_csi;
}

NoiseTriple ScenarioConfig::noise() const {
  return {uplink.noise_w, downlink.noise_w, d2d.noise_w};
}

ScenarioConfig desk_scale(ScenarioConfig base) {
  base.dims = SystemDims::with_streams(16, 4, 4, 4, 2, 2);
  base.trials = 20;
  return base;
}

LinkRole make_role(LinkKind kind, const AnalogMatrices& m, const ChannelTriple& h,
                   const ScenarioConfig& cfg) {
  LinkRole r;
  r.kind = kind;
  r.noise = link_params(cfg, kind).noise_w;
  r.p_max = cfg.pa.p_max;
  switch (kind) {
    case LinkKind::kUplink:
      r.tx_analog = m.fa;
      r.rx_analog = m.u1;
      r.power_budget = cfg.p_ua;
      r.streams = cfg.dims.d1;
      break;
    case LinkKind::kDownlink:
      r.tx_analog = m.u2;
      r.rx_analog = m.fb;
      r.power_budget = cfg.p_bs;
      r.streams = cfg.dims.d2;
      break;
    case LinkKind::kD2d:
      r.tx_analog = m.fa;
      r.rx_analog = m.fb;
      r.power_budget = cfg.p_ua;
      r.streams = cfg.dims.d3;
      break;
  }
  r.h = channel_of(h, kind);
  return r;
}

SlotRecord run_slot(const AnalogSet& analog, const SlotChannels& ch, const ScenarioConfig& cfg) {
  SlotRecord rec;
  rec.algorithm = to_string(cfg.algorithm);
  const AnalogMatrices m(analog);
  PcccpConfig pc = cfg.pcccp;
  pc.record_trace = false;
  pc.check_blocks = false;

  double predicted[3] = {0.0, 0.0, 0.0};
  double actual[3] = {0.0, 0.0, 0.0};
  const LinkKind kinds[3] = {LinkKind::kUplink, LinkKind::kDownlink, LinkKind::kD2d};
  for (int k = 0; k < 3; ++k) {
    const LinkRole role = make_role(kinds[k], m, ch.designed, cfg);
    const LinkParams& lp = link_params(cfg, kinds[k]);
    try {
      CMatrix w;
      if (cfg.algorithm == Algorithm::kHeuristic) {
        w = waterfilling_heuristic(role);
        rec.objective[k] = std::numeric_limits<double>::quiet_NaN();
      } else {
        const PcccpResult res = pcccp_solve(role, pc);
        w = res.w;
        rec.penalty = std::max(rec.penalty, res.penalty);
        rec.objective[k] = res.objective;
        if (!res.converged) {
          add_flag(rec.flags, "unconverged-" + to_string(kinds[k]));
          rec.failed = true;
        }
        if (res.state.regularized) add_flag(rec.flags, "regularized-" + to_string(kinds[k]));
      }
      predicted[k] = link_rate(role.rx_analog, role.h, role.tx_analog, w, lp);
      actual[k] = link_rate(role.rx_analog, channel_of(ch.actual, kinds[k]), role.tx_analog, w, lp);
    } catch (const std::exception&) {
      add_flag(rec.flags, "solver-error-" + to_string(kinds[k]));
      rec.failed = true;
    }
  }
  rec.r1 = actual[0];
  rec.r2 = actual[1];
  rec.r3 = actual[2];

  const DelayCoeffs k_pred = delay_coeffs(cfg.compute, predicted[0], predicted[1], predicted[2]);
  const DelayCoeffs k_act = delay_coeffs(cfg.compute, rec.r1, rec.r2, rec.r3);
  try {
    const OffloadSolution s =
        cfg.algorithm == Algorithm::kBinary ? binary_offload(k_pred) : optimal_rho(k_pred);
    rec.rho = s.rho;
    if (s.fallback) add_flag(rec.flags, "degenerate-" + s.branch);
  } catch (const std::domain_error&) {
    add_flag(rec.flags, "no-link");
    rec.failed = true;
    rec.rho = 0.0;
  }
  const LatencyBreakdown b = total_latency(rec.rho, k_act);
  rec.t_total = b.total;
  rec.latency_case = b.active_case;
  if (!std::isfinite(rec.t_total)) {
    add_flag(rec.flags, "infinite-latency");
    rec.failed = true;
  }
  return rec;
}

SuperframeResult run_superframe(const ScenarioConfig& cfg, int trial, int superframe,
                                TrialCarry& carry) {
  if (!carry.started) {
    carry.analog = initial_analog(cfg, trial);
    carry.weights = Weights{};
    carry.started = true;
  }
  SuperframeResult out;
  out.weights = carry.weights;
  const NoiseTriple noise = cfg.noise();
  const bool ideal = cfg.algorithm == Algorithm::kIdealCsi;
  const double design_delay = ideal ? cfg.tau_csi : cfg.effective_csi_delay();
  const LinkProcesses sf_procs = superframe_processes(cfg, trial, superframe);
  SurrogateState state = SurrogateState::initial(cfg.dims, cfg.varpi);

  double bits_up = 0.0, bits_down = 0.0, bits_d2d = 0.0;
  for (int f = 0; f < cfg.frames; ++f) {
    const LinkProcesses procs = frame_processes(cfg, sf_procs, trial, superframe, f);
    FrameTrace trace;
    trace.superframe = superframe;
    trace.frame = f;
    double sum_t = 0.0;
    int used = 0;
    for (int s = 0; s < cfg.slots; ++s) {
      const LinkProcesses measured = procs.evolved(s * cfg.slot_s);
      SlotChannels ch{measured.triple(), measured.evolved(design_delay).triple()};
      if (ideal) {
        // Full-CSI analog refinement on the delayed channel every slot.
        for (int it = 0; it < cfg.ideal_csi_iterations; ++it) {
          const SurrogateState fresh = SurrogateState::initial(cfg.dims, cfg.varpi);
          carry.analog =
              ssca_iterate(carry.analog, fresh, ch.designed, carry.weights, noise, 1.0, 1.0).analog;
        }
      }
      SlotRecord rec = run_slot(used_phases(carry.analog, cfg.phase_bits), ch, cfg);
      rec.superframe = superframe;
      rec.frame = f;
      rec.slot = s;
      if (!rec.failed) {
        sum_t += rec.t_total;
        ++used;
        const double l = cfg.compute.task_bits;
        const double a = cfg.compute.compression;
        bits_up += rec.rho * l;
        bits_down += a * rec.rho * l;
        bits_d2d += a * (1.0 - rec.rho) * l;
      }
      out.slots.push_back(std::move(rec));
    }
    trace.mean_t_total = used > 0 ? sum_t / used : std::numeric_limits<double>::quiet_NaN();
    if (!ideal) {
      const double age = std::max(0.0, cfg.slots * cfg.slot_s - cfg.tau_csi);
      const ChannelTriple sample = procs.evolved(age).triple();
      const auto [eps, gamma] = step_schedule(state.t + 1, cfg.schedule);
      SscaStep step = ssca_iterate(carry.analog, state, sample, carry.weights, noise, eps, gamma);
      trace.sample_objective = step.sample_objective;
      carry.analog = std::move(step.analog);
      state = std::move(step.state);
    } else {
      trace.sample_objective =
          weighted_capacity(carry.analog, procs.evolved(cfg.slots * cfg.slot_s).triple(),
                            carry.weights, noise)
              .weighted;
    }
    out.frames.push_back(trace);
  }
  carry.weights = Weights::from_bits(bits_up, bits_down, bits_d2d);
  return out;
}

SuperframeResult run_superframe(const ScenarioConfig& cfg) {
  cfg.validate();
  TrialCarry carry;
  return run_superframe(cfg, 0, 0, carry);
}

SuperframeResult run_trial(const ScenarioConfig& cfg, int trial) {
  cfg.validate();
  TrialCarry carry;
  SuperframeResult all;
  for (int sf = 0; sf < cfg.superframes; ++sf) {
    SuperframeResult r = run_superframe(cfg, trial, sf, carry);
    all.slots.insert(all.slots.end(), r.slots.begin(), r.slots.end());
    all.frames.insert(all.frames.end(), r.frames.begin(), r.frames.end());
    if (sf == 0) all.weights = r.weights;
  }
  return all;
}

std::uint64_t csi_overhead(const SystemDims& d, int slots, int zeta, CsiScheme scheme) {
  if (zeta < 1) throw std::invalid_argument("csi_overhead: zeta must be >= 1");
  if (slots < 1) throw std::invalid_argument("csi_overhead: slots must be >= 1");
  using U = std::uint64_t;
  const U full = U(d.n_bs) * U(d.n_b) + U(d.n_a) * U(d.n_b);
  const U ts = U(slots);
  if (scheme == CsiScheme::kSingleTimescale) return U(zeta) * ts * full;
  const U eff = U(d.n_rf) * U(d.n_rfb) + U(d.n_rfa) * U(d.n_rfb);
  return U(zeta) * (full + ts * eff);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPowerUa:
      return "p_ua";
    case SweepAxis::kDistanceY:
      return "d_y";
    case SweepAxis::kComputeRatio:
      return "eta";
    case SweepAxis::kRician:
      return "psi";
    case SweepAxis::kCsiDelay:
      return "tau_csi";
    case SweepAxis::kPhaseBits:
      return "phase_bits";
  }
  return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::kPowerUa, SweepAxis::kDistanceY, SweepAxis::kComputeRatio,
                      SweepAxis::kRician, SweepAxis::kCsiDelay, SweepAxis::kPhaseBits}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig c = base;
  switch (axis) {
    case SweepAxis::kPowerUa:
      c.p_ua = value;
      break;
    case SweepAxis::kDistanceY:
      c.geometry.user_a[1] = value;
      c.geometry.user_b[1] = value;
      break;
    case SweepAxis::kComputeRatio:
      c.compute.edge_bps = value * c.compute.local_bps;
      break;
    case SweepAxis::kRician:
      if (!(value > 0.0) || c.num_paths < 2) {
        throw std::invalid_argument("rician sweep needs psi > 0 and at least two paths");
      }
      c.nlos_variance = c.los_variance / (value * static_cast<double>(c.num_paths - 1));
      break;
    case SweepAxis::kCsiDelay:
      c.tau_csi = value;
      break;
    case SweepAxis::kPhaseBits:
      if (value < 0.0 || value != std::floor(value)) {
        throw std::invalid_argument("phase_bits sweep needs non-negative integers");
      }
      c.phase_bits = static_cast<int>(value);
      break;
  }
  return c;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                const std::vector<double>& values,
                                const std::vector<Algorithm>& algorithms) {
  std::vector<SweepRow> rows;
  for (double value : values) {
    for (Algorithm algo : algorithms) {
      ScenarioConfig cfg = apply_axis(base, axis, value);
      cfg.algorithm = algo;
      cfg.validate();
      SweepRow row;
      row.axis = to_string(axis);
      row.value = value;
      row.algorithm = to_string(algo);
      row.trials = cfg.trials;
      std::vector<double> trial_means;
      double rho_sum = 0.0;
      int rho_n = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        const SuperframeResult r = run_trial(cfg, t);
        double sum = 0.0;
        int n = 0;
        for (const SlotRecord& s : r.slots) {
          ++row.slots;
          if (s.failed) {
            ++row.failed_slots;
            continue;
          }
          sum += s.t_total;
          rho_sum += s.rho;
          ++n;
          ++rho_n;
        }
        if (n > 0) trial_means.push_back(sum / n);
      }
      std::tie(row.mean_t_total, row.stderr_t_total) = mean_stderr(trial_means);
      row.mean_rho = rho_n > 0 ? rho_sum / rho_n : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
    }
  }
  return rows;
}

LearningResult learn_analog(const ScenarioConfig& cfg, int trial, int mc_samples) {
  cfg.validate();
  if (mc_samples < 1) throw std::invalid_argument("learn_analog: mc_samples must be >= 1");
  const NoiseTriple noise = cfg.noise();
  const Weights w{};
  const LinkProcesses sf_procs = superframe_processes(cfg, trial, 0);
  const RngStream eval = RngStream(cfg.seed, static_cast<std::uint64_t>(trial))
                             .derive(tag(StreamPurpose::kEvaluation));
  // Common evaluation channels for every frame.
  std::vector<ChannelTriple> eval_set;
  eval_set.reserve(static_cast<std::size_t>(mc_samples));
  for (int s = 0; s < mc_samples; ++s) {
    eval_set.push_back(with_fresh_gains(sf_procs, eval.derive(static_cast<std::uint64_t>(s))).triple());
  }
  auto mc = [&](const AnalogSet& a) {
    double sum = 0.0;
    for (const ChannelTriple& h : eval_set) sum += weighted_capacity(a, h, w, noise).weighted;
    return sum / mc_samples;
  };

  LearningResult out;
  out.initial = initial_analog(cfg, trial);
  AnalogSet analog = out.initial;
  SurrogateState state = SurrogateState::initial(cfg.dims, cfg.varpi);
  out.capacity.push_back(mc(analog));
  for (int f = 0; f < cfg.frames; ++f) {
    const LinkProcesses procs = frame_processes(cfg, sf_procs, trial, 0, f);
    const double age = std::max(0.0, cfg.slots * cfg.slot_s - cfg.tau_csi);
    const auto [eps, gamma] = step_schedule(state.t + 1, cfg.schedule);
    SscaStep step = ssca_iterate(analog, state, procs.evolved(age).triple(), w, noise, eps, gamma);
    out.sample_objective.push_back(step.sample_objective);
    analog = std::move(step.analog);
    state = std::move(step.state);
    out.capacity.push_back(mc(analog));
  }
  out.final_analog = analog;
  return out;
}

ConvergenceResult convergence_run(const ScenarioConfig& cfg, int mc_samples) {
  ConvergenceResult out;
  out.learning = learn_analog(cfg, 0, mc_samples);
  const LinkProcesses procs =
      frame_processes(cfg, superframe_processes(cfg, 0, 0), 0, 0, cfg.frames);
  const AnalogMatrices m(used_phases(out.learning.final_analog, cfg.phase_bits));
  const LinkRole role = make_role(LinkKind::kUplink, m, procs.triple(), cfg);
  PcccpConfig pc = cfg.pcccp;
  pc.record_trace = true;
  out.uplink = pcccp_solve(role, pc);
  return out;
}

}  // namespace mecbf
