// Long-term analog beamforming by stochastic successive convex
// approximation: each frame folds one channel sample into a recursively
// averaged quadratic surrogate of the negated weighted sum capacity, jumps
// to the surrogate minimizer and takes a damped step toward it.
#pragma once

#include <array>
#include <utility>

#include "mecbf/channel.hpp"
#include "mecbf/core.hpp"

namespace mecbf {

/// Phases of the four analog matrices.
struct AnalogSet {
  RMatrix u1;  // BS receive, N x N_rf
  RMatrix u2;  // BS transmit, N x N_rf
  RMatrix fa;  // user A, N_a x N_rfa
  RMatrix fb;  // user B, N_b x N_rfb

  static AnalogSet random(RngStream& rng, const SystemDims& dims);
  static AnalogSet zeros(const SystemDims& dims);

  AnalogSet quantized(int bits) const;
};

/// Unit-modulus matrices e^{j theta} for each block.
struct AnalogMatrices {
  CMatrix u1, u2, fa, fb;
  explicit AnalogMatrices(const AnalogSet& phases);
};

/// Link weights of the long-term objective; non-negative and summing to 1.
struct Weights {
  double w1 = 1.0 / 3.0;
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;

  /// Normalizes per-link transmitted bit totals. All-zero totals give equal
  /// weights.
  static Weights from_bits(double bits_up, double bits_down, double bits_d2d);
  void validate() const;
};

using NoiseTriple = std::array<double, 3>;

struct CapacityTerms {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;  // bits/s/Hz
  double weighted = 0.0;
};

/// w1 C1 + w2 C2 + w3 C3 for one channel sample.
CapacityTerms weighted_capacity(const AnalogSet& analog, const ChannelTriple& h,
                                const Weights& w, const NoiseTriple& noise);

/// d g / d theta for each of the four phase blocks (real matrices).
struct PhaseGradients {
  RMatrix u1, u2, fa, fb;
};

PhaseGradients capacity_gradients(const AnalogSet& analog, const ChannelTriple& h,
                                  const Weights& w, const NoiseTriple& noise);

/// Recursively averaged surrogate of the negated objective.
struct SurrogateState {
  double value = 0.0;
  RMatrix f_u1, f_u2, f_fa, f_fb;
  double varpi = 5.0;  // proximal weight
  int t = -1;          // index of the last folded sample

  static SurrogateState initial(const SystemDims& dims, double varpi);
};

/// value <- (1-eps) value - eps g, f_X <- (1-eps) f_X - eps dg/dtheta_X.
SurrogateState surrogate_update(const SurrogateState& state, double sample_g,
                                const PhaseGradients& sample_grads, double eps);

/// Closed-form minimizer theta_X - f_X / (2 varpi).
AnalogSet surrogate_minimize(const SurrogateState& state, const AnalogSet& analog);

/// Value of the quadratic surrogate at `theta` around the expansion point.
double surrogate_value(const SurrogateState& state, const AnalogSet& expansion,
                       const AnalogSet& theta);

enum class ScheduleKind { kPolynomial, kGeometric };

struct StepSchedule {
  ScheduleKind kind = ScheduleKind::kPolynomial;
  double eps_exponent = 0.6;    // polynomial: eps = (1+t)^-a
  double gamma_exponent = 0.9;  // polynomial: gamma = (1+t)^-b
  double eps_base = 0.6;        // geometric: eps = base^t
  double gamma_base = 0.9;

  void validate() const;
};

/// (eps^t, gamma^t).
std::pair<double, double> step_schedule(int t, const StepSchedule& schedule);

struct SscaStep {
  AnalogSet analog;
  SurrogateState state;
  double sample_objective = 0.0;  // g at the pre-update point
};

/// One frame of the long-term update using channel sample `h`.
SscaStep ssca_iterate(const AnalogSet& analog, const SurrogateState& state,
                      const ChannelTriple& h, const Weights& w, const NoiseTriple& noise,
                      double eps, double gamma);

}  // namespace mecbf
