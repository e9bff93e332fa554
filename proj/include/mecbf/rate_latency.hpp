// Link rates, delay coefficients and end-to-end latency of the partial
// offloading protocol (user A -> BS edge server -> user B, with the local
// share sent A -> B over D2D).
#pragma once

#include <string>
#include <vector>

#include "mecbf/core.hpp"

namespace mecbf {

struct LinkParams {
  double bandwidth_hz = 100e6;
  double noise_w = 1e-12;
};

/// B log2 det[I + (1/s2) A^H H F W W^H F^H H^H A (A^H A)^-1] for receive
/// analog A, transmit analog F and digital precoder W. Throws
/// RankDeficientError when A^H A is singular.
double link_rate(const CMatrix& rx_analog, const CMatrix& h, const CMatrix& tx_analog,
                 const CMatrix& w, const LinkParams& params);

/// Spectral efficiency of the link with W W^H = I (bits/s/Hz).
double link_capacity(const CMatrix& rx_analog, const CMatrix& h, const CMatrix& tx_analog,
                     const LinkParams& params);

/// log det[I + (1/s2) X X^H G^-1] in nats for X = effective channel times
/// precoder and G the receive Gram matrix. Shared by the rate and capacity
/// routines.
double log_det_rate_nats(const CMatrix& x, const CMatrix& gram, double noise);

struct ComputeParams {
  double task_bits = 1e6;        // L
  double compression = 0.01;     // alpha
  double local_bps = 200e6;      // F_L
  double edge_bps = 1600e6;      // F_E
};

/// Full-task delays. Zero-rate links yield +inf and set `degenerate`.
struct DelayCoeffs {
  double k_local = 0.0;  // L/F_L
  double k_edge = 0.0;   // L/F_E
  double k_up = 0.0;     // L/R1
  double k_down = 0.0;   // alpha L/R2
  double k_d2d = 0.0;    // alpha L/R3
  bool degenerate = false;

  bool finite() const;
};

DelayCoeffs delay_coeffs(const ComputeParams& compute, double r1, double r2, double r3);

struct LatencyBreakdown {
  double t_local = 0.0;
  double t_edge = 0.0;
  double t_up = 0.0;
  double t_down = 0.0;
  double t_d2d = 0.0;
  double total = 0.0;
  int active_case = 0;  // 1..4
};

/// Piecewise-linear protocol latency for offloading ratio rho.
LatencyBreakdown total_latency(double rho, const DelayCoeffs& k);

/// Case label (1..4) from the ordering of the partial delays.
int latency_case(double rho, const DelayCoeffs& k);

struct TimelineEvent {
  double time = 0.0;
  std::string what;
};

struct TimelineResult {
  LatencyBreakdown breakdown;
  std::vector<TimelineEvent> events;  // sorted by time
  double d2d_start = 0.0;
  double d2d_end = 0.0;
  double downlink_start = 0.0;
};

/// Discrete-event simulation of the protocol. User A's radio serves the
/// uplink first, local compute runs in parallel, the D2D transfer needs the
/// local result and a free radio, and the BS may only start the downlink once
/// the edge result is ready and user B's receiver has finished the D2D
/// transfer (user A has priority).
TimelineResult timeline_oracle(double rho, const DelayCoeffs& k, bool record_events = true);

}  // namespace mecbf
