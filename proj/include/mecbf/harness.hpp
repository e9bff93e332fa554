// Two-timescale simulation: super frames of T_f frames of T_s slots. Analog
// matrices learn once per frame from a full CSI sample; digital precoders and
// the offloading ratio are redesigned every slot from effective CSI.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mecbf/channel.hpp"
#include "mecbf/core.hpp"
#include "mecbf/pcccp.hpp"
#include "mecbf/rate_latency.hpp"
#include "mecbf/ssca.hpp"

namespace mecbf {

enum class Algorithm { kPcccp, kHeuristic, kBinary, kIdealCsi };

std::string to_string(Algorithm a);
/// Accepts "pcccp", "heuristic", "binary", "ideal-csi".
Algorithm parse_algorithm(const std::string& name);

struct PaParams {
  double p_max = 1.0;  // watt of output per PA
};

struct ScenarioConfig {
  SystemDims dims;
  LinkGeometry geometry;
  PaParams pa;
  double p_ua = 0.1;   // user A PA budget, watt
  double p_bs = 10.0;  // BS PA budget, watt
  LinkParams uplink;
  LinkParams downlink;
  LinkParams d2d;
  ComputeParams compute;

  int num_paths = 16;
  double los_variance = 1.0;
  double nlos_variance = 0.1;

  double doppler_hz = 70.0;
  double tau_csi = 4e-3;   // full-CSI delay, seconds
  double slot_s = 1e-3;    // slot duration, seconds
  int frames = 100;        // T_f
  int slots = 100;         // T_s
  int superframes = 1;
  int csi_bits = 8;        // zeta
  int phase_bits = 0;      // 0 keeps continuous analog phases

  Algorithm algorithm = Algorithm::kPcccp;
  int trials = 1;
  std::uint64_t seed = 1;

  double varpi = 5.0;
  StepSchedule schedule;
  int ideal_csi_iterations = 5;  // per-slot analog refinement of the ideal-csi arm
  PcccpConfig pcccp;
  double max_failure_rate = 0.05;

  /// Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;
  void validate() const;

  /// LOS variance over summed NLOS variance.
  double rician_factor() const;
  /// Full-CSI delay scaled by the effective/full CSI size ratio.
  double effective_csi_delay() const;
  NoiseTriple noise() const;
};

/// The desk-scale dims used for quick runs (N=16, N_a=N_b=4, N_rf=4,
/// N_rfa=N_rfb=2) with 20 trials.
ScenarioConfig desk_scale(ScenarioConfig base = {});

struct SlotRecord {
  int superframe = 0;
  int frame = 0;
  int slot = 0;
  std::string algorithm;
  double rho = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;  // actual rates, bit/s
  double t_total = 0.0;
  int latency_case = 0;
  double penalty = 0.0;  // worst final penalty of the three link solves
  std::string flags;     // '|'-separated, empty when clean
  double objective[3] = {0.0, 0.0, 0.0};
  bool failed = false;
};

/// Channels of the three links as seen by the designer and as experienced.
struct SlotChannels {
  ChannelTriple designed;
  ChannelTriple actual;
};

/// Digital design, offloading ratio and latency for one slot with the
/// analog phases held fixed.
SlotRecord run_slot(const AnalogSet& analog, const SlotChannels& channels,
                    const ScenarioConfig& config);

struct FrameTrace {
  int superframe = 0;
  int frame = 0;
  double sample_objective = 0.0;  // weighted capacity of the frame-end sample
  double mean_t_total = 0.0;      // over non-failed slots of the frame
};

/// State carried between super frames of one trial.
struct TrialCarry {
  AnalogSet analog;
  Weights weights;
  bool started = false;
};

struct SuperframeResult {
  std::vector<SlotRecord> slots;
  std::vector<FrameTrace> frames;
  Weights weights;  // weights used during this super frame
};

/// One super frame of trial `trial`, continuing from `carry`.
SuperframeResult run_superframe(const ScenarioConfig& config, int trial, int superframe,
                                TrialCarry& carry);
/// First super frame of trial 0.
SuperframeResult run_superframe(const ScenarioConfig& config);

/// config.superframes super frames of one trial.
SuperframeResult run_trial(const ScenarioConfig& config, int trial);

enum class CsiScheme { kTwoTimescale, kSingleTimescale };

/// CSI feedback bits per frame.
std::uint64_t csi_overhead(const SystemDims& dims, int slots, int zeta, CsiScheme scheme);

enum class SweepAxis { kPowerUa, kDistanceY, kComputeRatio, kRician, kCsiDelay, kPhaseBits };

std::string to_string(SweepAxis axis);
/// Accepts "p_ua", "d_y", "eta", "psi", "tau_csi", "phase_bits".
SweepAxis parse_axis(const std::string& name);

/// Copy of `base` with one axis set to `value`.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::string algorithm;
  double mean_t_total = 0.0;
  double stderr_t_total = 0.0;
  double mean_rho = 0.0;
  int trials = 0;
  int slots = 0;
  int failed_slots = 0;
};

/// Mean over trials of each trial's mean latency, per (value, algorithm).
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                const std::vector<double>& values,
                                const std::vector<Algorithm>& algorithms);

/// Analog learning without digital design: per-frame Monte-Carlo weighted
/// capacity of the current analog matrices under fixed weights.
struct LearningResult {
  std::vector<double> capacity;  // capacity[0] at the initial analog matrices
  std::vector<double> sample_objective;
  AnalogSet initial;
  AnalogSet final_analog;
};

LearningResult learn_analog(const ScenarioConfig& config, int trial, int mc_samples);

struct ConvergenceResult {
  LearningResult learning;
  PcccpResult uplink;  // one penalty solve at the learned analog matrices
};

ConvergenceResult convergence_run(const ScenarioConfig& config, int mc_samples);

/// Builds the digital design problem of `kind` from analog phases and channels.
LinkRole make_role(LinkKind kind, const AnalogMatrices& analog, const ChannelTriple& h,
                   const ScenarioConfig& config);

}  // namespace mecbf
