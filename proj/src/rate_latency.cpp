#include "mecbf/rate_latency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace mecbf {
namespace {

double log_det_hpd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw RankDeficientError("log_det: matrix is not positive definite");
  }
  const CMatrix& factor = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < factor.rows(); ++i) s += std::log(factor(i, i).real());
  return 2.0 * s;
}

// rho * k with the convention 0 * inf = 0 for unused links.
double share(double rho, double k) { return rho == 0.0 ? 0.0 : rho * k; }

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("offloading ratio must lie in [0, 1]");
  }
}

}  // namespace

double log_det_rate_nats(const CMatrix& x, const CMatrix& gram, double noise) {
  if (!(noise > 0.0)) throw std::invalid_argument("noise power must be positive");
  if (x.rows() != gram.rows() || gram.rows() != gram.cols()) {
    throw std::invalid_argument("log_det_rate: dimension mismatch");
  }
  // det(I + X X^H G^-1 / s2) = det(G + X X^H / s2) / det(G)
  const CMatrix g = 0.5 * (gram + gram.adjoint());
  const double log_det_gram = log_det_hpd(g);
  CMatrix m = g;
  m.noalias() += (x * x.adjoint()) / noise;
  m = 0.5 * (m + m.adjoint());
  return log_det_hpd(m) - log_det_gram;
}

double link_rate(const CMatrix& rx_analog, const CMatrix& h, const CMatrix& tx_analog,
                 const CMatrix& w, const LinkParams& params) {
  if (rx_analog.rows() != h.rows() || h.cols() != tx_analog.rows() ||
      tx_analog.cols() != w.rows()) {
    throw std::invalid_argument("link_rate: dimension mismatch");
  }
  const CMatrix x = rx_analog.adjoint() * h * tx_analog * w;
  const CMatrix gram = rx_analog.adjoint() * rx_analog;
  return params.bandwidth_hz * log_det_rate_nats(x, gram, params.noise_w) / std::log(2.0);
}

double link_capacity(const CMatrix& rx_analog, const CMatrix& h, const CMatrix& tx_analog,
                     const LinkParams& params) {
  if (rx_analog.rows() != h.rows() || h.cols() != tx_analog.rows()) {
    throw std::invalid_argument("link_capacity: dimension mismatch");
  }
  const CMatrix x = rx_analog.adjoint() * h * tx_analog;
  const CMatrix gram = rx_analog.adjoint() * rx_analog;
  return log_det_rate_nats(x, gram, params.noise_w) / std::log(2.0);
}

bool DelayCoeffs::finite() const {
  return std::isfinite(k_local) && std::isfinite(k_edge) && std::isfinite(k_up) &&
         std::isfinite(k_down) && std::isfinite(k_d2d);
}

DelayCoeffs delay_coeffs(const ComputeParams& c, double r1, double r2, double r3) {
  if (!(c.task_bits > 0.0) || c.compression < 0.0 || c.compression > 1.0 ||
      !(c.local_bps > 0.0) || !(c.edge_bps > 0.0)) {
    throw std::invalid_argument("delay_coeffs: invalid compute parameters");
  }
  DelayCoeffs k;
  const double inf = std::numeric_limits<double>::infinity();
  const double result_bits = c.compression * c.task_bits;
  auto ratio = [&](double bits, double rate) {
    if (bits == 0.0) return 0.0;
    if (!(rate > 0.0)) {
      k.degenerate = true;
      return inf;
    }
    return bits / rate;
  };
  k.k_local = c.task_bits / c.local_bps;
  k.k_edge = c.task_bits / c.edge_bps;
  k.k_up = ratio(c.task_bits, r1);
  k.k_down = ratio(result_bits, r2);
  k.k_d2d = ratio(result_bits, r3);
  return k;
}

int latency_case(double rho, const DelayCoeffs& k) {
  check_rho(rho);
  const double up = share(rho, k.k_up);
  const double local = share(1.0 - rho, k.k_local);
  const double edge = share(rho, k.k_edge);
  const double d2d = share(1.0 - rho, k.k_d2d);
  if (up >= local) return edge >= d2d ? 1 : 2;
  return up + edge < local + d2d ? 3 : 4;
}

LatencyBreakdown total_latency(double rho, const DelayCoeffs& k) {
  check_rho(rho);
  LatencyBreakdown b;
  b.t_local = share(1.0 - rho, k.k_local);
  b.t_edge = share(rho, k.k_edge);
  b.t_up = share(rho, k.k_up);
  b.t_down = share(rho, k.k_down);
  b.t_d2d = share(1.0 - rho, k.k_d2d);
  if (b.t_up >= b.t_local) {
    b.total = b.t_up + std::max(b.t_edge, b.t_d2d) + b.t_down;
  } else {
    b.total = std::max(b.t_up + b.t_edge, b.t_local + b.t_d2d) + b.t_down;
  }
  b.active_case = latency_case(rho, k);
  return b;
}

TimelineResult timeline_oracle(double rho, const DelayCoeffs& k, bool record_events) {
  check_rho(rho);
  enum Activity { kUplink, kLocal, kEdge, kD2d, kDownlink, kCount };
  const char* names[kCount] = {"uplink", "local-compute", "edge-compute", "d2d", "downlink"};
  const double duration[kCount] = {share(rho, k.k_up), share(1.0 - rho, k.k_local),
                                   share(rho, k.k_edge), share(1.0 - rho, k.k_d2d),
                                   share(rho, k.k_down)};

  double start[kCount];
  double finish[kCount];
  bool started[kCount] = {};
  bool done[kCount] = {};
  bool radio_a_busy = false;    // user A transmitter
  bool receiver_b_busy = false;  // user B receiver

  TimelineResult out;
  using Completion = std::pair<double, int>;
  std::priority_queue<Completion, std::vector<Completion>, std::greater<>> pending;
  double now = 0.0;

  auto begin = [&](int a) {
    started[a] = true;
    start[a] = now;
    finish[a] = now + duration[a];
    // Zero-length activities (an unused branch of the split) leave no trace.
    if (record_events && duration[a] > 0.0) {
      out.events.push_back({now, std::string(names[a]) + " start"});
    }
    if (a == kUplink || a == kD2d) radio_a_busy = true;
    if (a == kD2d || a == kDownlink) receiver_b_busy = true;
    pending.push({finish[a], a});
  };

  // Greedy dispatch of every activity whose prerequisites hold at `now`.
  auto dispatch = [&] {
    if (!started[kUplink] && !radio_a_busy) begin(kUplink);
    if (!started[kLocal]) begin(kLocal);
    if (!started[kEdge] && done[kUplink]) begin(kEdge);
    if (!started[kD2d] && done[kLocal] && done[kUplink] && !radio_a_busy && !receiver_b_busy) {
      begin(kD2d);
    }
    // The BS defers to user A: no downlink until the D2D transfer is over.
    if (!started[kDownlink] && done[kEdge] && done[kD2d] && !receiver_b_busy) begin(kDownlink);
  };

  dispatch();
  while (!pending.empty()) {
    // Retire every completion at the earliest time before dispatching.
    now = pending.top().first;
    while (!pending.empty() && pending.top().first == now) {
      const int a = pending.top().second;
      pending.pop();
      done[a] = true;
      if (record_events && duration[a] > 0.0) {
        out.events.push_back({now, std::string(names[a]) + " end"});
      }
      if (a == kUplink || a == kD2d) radio_a_busy = false;
      if (a == kD2d || a == kDownlink) receiver_b_busy = false;
    }
    dispatch();
  }

  LatencyBreakdown& b = out.breakdown;
  b.t_up = duration[kUplink];
  b.t_local = duration[kLocal];
  b.t_edge = duration[kEdge];
  b.t_d2d = duration[kD2d];
  b.t_down = duration[kDownlink];
  b.total = finish[kDownlink];
  out.d2d_start = start[kD2d];
  out.d2d_end = finish[kD2d];
  out.downlink_start = start[kDownlink];

  // Case from the observed schedule: did the D2D wait for the uplink, and
  // did the edge result wait for the D2D transfer?
  const bool d2d_waited_for_uplink = finish[kUplink] >= finish[kLocal];
  const bool edge_ready_before_d2d_done = finish[kEdge] < finish[kD2d];
  if (d2d_waited_for_uplink) {
    b.active_case = edge_ready_before_d2d_done ? 2 : 1;
  } else {
    b.active_case = edge_ready_before_d2d_done ? 3 : 4;
  }
  return out;
}

}  // namespace mecbf
