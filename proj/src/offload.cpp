#include "mecbf/offload.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mecbf {
namespace {

OffloadSolution make(double rho, char situation, std::string branch, const DelayCoeffs& k) {
  OffloadSolution s;
  s.rho = rho;
  s.situation = situation;
  s.branch = std::move(branch);
  s.latency = total_latency(rho, k).total;
  return s;
}

OffloadSolution degenerate(const DelayCoeffs& k) {
  const bool edge_path_dead = !std::isfinite(k.k_up) || !std::isfinite(k.k_down);
  const bool d2d_dead = !std::isfinite(k.k_d2d);
  if (edge_path_dead && d2d_dead) {
    throw std::domain_error("optimal_rho: neither the edge path nor the D2D link is usable");
  }
  if (!std::isfinite(k.k_local) || !std::isfinite(k.k_edge)) {
    throw std::domain_error("optimal_rho: non-finite compute delay");
  }
  OffloadSolution s = edge_path_dead ? make(0.0, 'D', "no-edge-path", k)
                                     : make(1.0, 'D', "no-d2d", k);
  s.fallback = true;
  return s;
}

}  // namespace

OffloadSolution optimal_rho(const DelayCoeffs& k) {
  if (!k.finite()) return degenerate(k);
  const double kl = k.k_local, ke = k.k_edge, k1 = k.k_up, k2 = k.k_down, k3 = k.k_d2d;
  if (!(k1 > 0.0) || !(ke > 0.0)) {
    // Free edge path: the situation test divides by these.
    return brute_force_rho(k, 1e-5);
  }
  const bool local_slope_up = k2 - kl - k3 >= 0.0;
  if (kl / k1 >= k3 / ke) {
    if (local_slope_up) return make(0.0, 'A', "A1", k);
    return make((k3 + kl) / (k3 + kl + k1 + ke), 'A', "A2", k);
  }
  const bool middle_slope_up = k2 + k1 - k3 >= 0.0;
  if (!local_slope_up && !middle_slope_up) return make(k3 / (k3 + ke), 'B', "B1", k);
  if (!local_slope_up && middle_slope_up) return make(kl / (k1 + kl), 'B', "B2", k);
  if (local_slope_up && middle_slope_up) return make(0.0, 'B', "B4", k);
  // K2 >= K_L + K3 implies K2 >= K3, which contradicts K2 + K1 < K3.
  throw std::logic_error("optimal_rho: impossible branch B3 reached");
}

OffloadSolution brute_force_rho(const DelayCoeffs& k, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("brute_force_rho: grid_step must be > 0");
  std::vector<double> candidates;
  const auto n = static_cast<long>(std::floor(1.0 / grid_step));
  candidates.reserve(static_cast<std::size_t>(n) + 6);
  for (long i = 0; i <= n; ++i) candidates.push_back(static_cast<double>(i) * grid_step);
  candidates.push_back(1.0);
  auto add = [&](double num, double den) {
    if (den > 0.0 && std::isfinite(num) && std::isfinite(den)) {
      const double r = num / den;
      if (r >= 0.0 && r <= 1.0) candidates.push_back(r);
    }
  };
  add(k.k_local, k.k_up + k.k_local);
  add(k.k_d2d, k.k_d2d + k.k_edge);
  add(k.k_d2d + k.k_local, k.k_d2d + k.k_local + k.k_up + k.k_edge);
  add(k.k_local, k.k_local);  // rho = 1 guard if the grid misses it

  OffloadSolution best;
  best.latency = std::numeric_limits<double>::infinity();
  best.situation = 'G';
  best.branch = "grid";
  for (double rho : candidates) {
    const double t = timeline_oracle(rho, k, false).breakdown.total;
    if (t < best.latency) {
      best.latency = t;
      best.rho = rho;
    }
  }
  return best;
}

OffloadSolution binary_offload(const DelayCoeffs& k) {
  const double t0 = total_latency(0.0, k).total;
  const double t1 = total_latency(1.0, k).total;
  OffloadSolution s = t1 < t0 ? make(1.0, 'X', "edge", k) : make(0.0, 'X', "local", k);
  return s;
}

}  // namespace mecbf
