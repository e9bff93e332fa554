// Optimal offloading ratio for the piecewise-linear protocol latency.
#pragma once

#include <string>

#include "mecbf/rate_latency.hpp"

namespace mecbf {

struct OffloadSolution {
  double rho = 0.0;
  char situation = 'A';  // 'A': K_L/K1 >= K3/K_E, 'B' otherwise, 'D' degenerate
  std::string branch;    // "A1", "A2", "B1", "B2", "B4", "grid", or a degenerate tag
  double latency = 0.0;  // total latency at rho
  bool fallback = false;
};

/// Closed-form minimizer of total_latency over rho in [0, 1].
/// Zero-rate links: no uplink or downlink forces local computing, no D2D link
/// forces full offloading; both unusable throws std::domain_error.
OffloadSolution optimal_rho(const DelayCoeffs& k);

/// Grid search over {0, step, ..., 1} plus the breakpoints of the latency
/// curve, evaluated with the event-driven timeline.
OffloadSolution brute_force_rho(const DelayCoeffs& k, double grid_step);

/// Better of rho = 0 and rho = 1.
OffloadSolution binary_offload(const DelayCoeffs& k);

}  // namespace mecbf
