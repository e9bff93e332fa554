#include "mecbf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "mecbf/config.hpp"
#include "mecbf/harness.hpp"
#include "mecbf/offload.hpp"
#include "mecbf/pa.hpp"
#include "mecbf/pcccp.hpp"
#include "mecbf/rate_latency.hpp"
#include "mecbf/records.hpp"
#include "mecbf/ssca.hpp"

namespace mecbf {
namespace {

constexpr std::uint64_t kSeed = 20240611;

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RngStream test_rng(std::uint64_t id) {
  return RngStream(kSeed, id).derive(static_cast<std::uint64_t>(StreamPurpose::kTest));
}

double log_uniform(RngStream& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

DelayCoeffs random_coeffs(RngStream& rng) {
  DelayCoeffs k;
  k.k_local = log_uniform(rng, 1e-4, 1e-1);
  k.k_edge = log_uniform(rng, 1e-4, 1e-1);
  k.k_up = log_uniform(rng, 1e-4, 1e-1);
  k.k_down = log_uniform(rng, 1e-4, 1e-1);
  k.k_d2d = log_uniform(rng, 1e-4, 1e-1);
  return k;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

CMatrix random_matrix(RngStream& rng, int r, int c, double var = 1.0) {
  CMatrix x(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) x(i, j) = rng.complex_normal(var);
  return x;
}

// Desk-scale channels for one random instance, drawn the way the harness does.
ChannelTriple random_triple(RngStream& rng, const ScenarioConfig& cfg) {
  const std::vector<double> var = path_variances(cfg.num_paths, cfg.los_variance, cfg.nlos_variance);
  const SystemDims& d = cfg.dims;
  const LinkGeometry& g = cfg.geometry;
  auto link = [&](int n_rx, int n_tx, double dist, double beta) {
    ChannelProcess p;
    p.paths = draw_paths(rng, var);
    p.n_rx = n_rx;
    p.n_tx = n_tx;
    p.power_gain = path_loss(dist, beta, g.c0_db, g.d0);
    return p.matrix();
  };
  return {link(d.n_bs, d.n_a, g.uplink_distance(), g.beta_up),
          link(d.n_b, d.n_bs, g.downlink_distance(), g.beta_down),
          link(d.n_b, d.n_a, g.d2d_distance(), g.beta_d2d)};
}

// --- 1 ---------------------------------------------------------------------

bool latency_vs_timeline(std::string& detail) {
  RngStream rng = test_rng(1);
  int cases[5] = {0, 0, 0, 0, 0};
  double worst = 0.0;
  int bad_case = 0;
  for (int i = 0; i < 10000; ++i) {
    const DelayCoeffs k = random_coeffs(rng);
    const double rho = i % 50 == 0 ? (i % 100 == 0 ? 0.0 : 1.0) : rng.uniform(0.0, 1.0);
    const LatencyBreakdown f = total_latency(rho, k);
    const LatencyBreakdown t = timeline_oracle(rho, k, false).breakdown;
    worst = std::max(worst, std::abs(f.total - t.total) / std::max(f.total, t.total));
    if (f.active_case != t.active_case) ++bad_case;
    ++cases[f.active_case];
  }
  detail = "worst rel " + fmt("%.2e", worst) + ", case mismatches " + std::to_string(bad_case) +
           ", cases 1-4: " + std::to_string(cases[1]) + "/" + std::to_string(cases[2]) + "/" +
           std::to_string(cases[3]) + "/" + std::to_string(cases[4]);
  return worst <= 1e-12 && bad_case == 0 && cases[1] > 0 && cases[2] > 0 && cases[3] > 0 &&
         cases[4] > 0;
}

// --- 2 ---------------------------------------------------------------------

bool offload_vs_grid(std::string& detail) {
  RngStream rng = test_rng(2);
  const double step = 1e-5;
  int rho_off = 0, t_off = 0, dominance = 0;
  double worst_t = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const DelayCoeffs k = random_coeffs(rng);
    const OffloadSolution cf = optimal_rho(k);
    const OffloadSolution bf = brute_force_rho(k, step);
    const double rel = std::abs(cf.latency - bf.latency) / bf.latency;
    worst_t = std::max(worst_t, rel);
    if (rel > 1e-4) ++t_off;
    // A flat optimum admits many minimizers; only a strictly worse rho counts.
    if (std::abs(cf.rho - bf.rho) > step + 1e-15 &&
        !rel_close(total_latency(bf.rho, k).total, cf.latency, 1e-12)) {
      ++rho_off;
    }
    const double t_star = total_latency(cf.rho, k).total;
    if (t_star > std::min(total_latency(0.0, k).total, total_latency(1.0, k).total)) ++dominance;
  }
  detail = "rho off " + std::to_string(rho_off) + ", T off " + std::to_string(t_off) +
           " (worst " + fmt("%.2e", worst_t) + "), dominance violations " +
           std::to_string(dominance);
  return rho_off == 0 && t_off == 0 && dominance == 0;
}

// --- 3 ---------------------------------------------------------------------

bool pa_identities(std::string& detail) {
  const double pmax = 1.7;
  const double q = 0.25 * pmax;
  const bool continuous =
      pa_power(q, pmax) == 2.0 * std::sqrt(q * pmax) / kPi &&
      6.0 * std::sqrt(q * pmax) / kPi - 2.0 * pmax / kPi == pa_power(q, pmax);
  RngStream rng = test_rng(3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(0.0, std::sqrt(pmax));
    worst = std::max(worst, std::abs(h_of_vout(v, pmax) - pa_power(v * v, pmax)));
  }
  const double end = pa_power(pmax, pmax);
  detail = "continuity " + std::string(continuous ? "exact" : "broken") + ", worst |h-P| " +
           fmt("%.1e", worst) + ", P(Pmax) " + fmt("%.15g", end);
  return continuous && worst <= 1e-14 && std::abs(end - 4.0 * pmax / kPi) <= 1e-14;
}

// --- 4 ---------------------------------------------------------------------

RMatrix& block(AnalogSet& a, int b) { return b == 0 ? a.u1 : b == 1 ? a.u2 : b == 2 ? a.fa : a.fb; }
const RMatrix& block(const PhaseGradients& g, int b) {
  return b == 0 ? g.u1 : b == 1 ? g.u2 : b == 2 ? g.fa : g.fb;
}

bool gradient_check(std::string& detail) {
  const SystemDims d = SystemDims::with_streams(4, 2, 2, 2, 2, 2);
  const Weights w{0.5, 0.3, 0.2};
  const NoiseTriple n{0.5, 0.7, 0.9};
  const double h = 1e-6;
  double worst = 0.0;
  for (std::uint64_t seed : {7, 8, 9}) {
    RngStream rng(seed, 0);
    const AnalogSet a = AnalogSet::random(rng, d);
    ChannelTriple ch;
    ch.h1 = random_matrix(rng, d.n_bs, d.n_a);
    ch.h2 = random_matrix(rng, d.n_b, d.n_bs);
    ch.h3 = random_matrix(rng, d.n_b, d.n_a);
    const PhaseGradients g = capacity_gradients(a, ch, w, n);
    for (int b = 0; b < 4; ++b) {
      const RMatrix& gb = block(g, b);
      for (Eigen::Index i = 0; i < gb.rows(); ++i) {
        for (Eigen::Index j = 0; j < gb.cols(); ++j) {
          AnalogSet p = a, m = a;
          block(p, b)(i, j) += h;
          block(m, b)(i, j) -= h;
          const double fd = (weighted_capacity(p, ch, w, n).weighted -
                             weighted_capacity(m, ch, w, n).weighted) / (2.0 * h);
          // Entries near zero are compared on the scale of an O(1) capacity.
          worst = std::max(worst, std::abs(fd - gb(i, j)) / std::max(1e-2, std::abs(fd)));
        }
      }
    }
  }
  detail = "worst rel err " + fmt("%.2e", worst) + " over seeds 7, 8, 9";
  return worst < 1e-5;
}

// --- 5 ---------------------------------------------------------------------

bool pcccp_convergence(std::string& detail) {
  const ScenarioConfig cfg = desk_scale();
  PcccpConfig pc = cfg.pcccp;
  pc.record_trace = false;
  pc.check_blocks = true;
  int below = 0, infeasible = 0;
  double worst_rise = 0.0, worst_residual = 0.0;
  const int n = 50;
  for (int i = 0; i < n; ++i) {
    RngStream rng = test_rng(500 + static_cast<std::uint64_t>(i));
    const AnalogMatrices m(AnalogSet::random(rng, cfg.dims));
    const ChannelTriple h = random_triple(rng, cfg);
    const LinkRole role = make_role(static_cast<LinkKind>(i % 3), m, h, cfg);
    const PcccpResult r = pcccp_solve(role, pc);
    worst_rise = std::max(worst_rise, r.worst_block_increase);
    if (r.penalty < pc.delta2) ++below;
    const PaPowerReport rep = total_pa_power(role.tx_analog, r.w_raw, role.p_max);
    const double residual = std::max({0.0, rep.total - role.power_budget,
                                      rep.max_output - role.p_max});
    worst_residual = std::max(worst_residual, residual);
    if (residual > 10.0 * std::sqrt(pc.delta2)) ++infeasible;
  }
  detail = "penalty < 1e-8 in " + std::to_string(below) + "/" + std::to_string(n) +
           ", worst block rise " + fmt("%.1e", worst_rise) + ", worst constraint residual " +
           fmt("%.1e", worst_residual);
  return worst_rise <= 1e-9 && below >= 0.95 * n && infeasible == 0;
}

// --- 6 ---------------------------------------------------------------------

bool wmmse_equivalence(std::string& detail) {
  RngStream rng = test_rng(6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n_rf_rx = 2 + i % 3, n_rx = n_rf_rx + 2, n_rf_tx = 2 + (i / 3) % 2;
    const int dstreams = std::min(n_rf_rx, n_rf_tx);
    const double noise = log_uniform(rng, 1e-2, 1e1);
    const CMatrix a = unit_modulus(RMatrix::NullaryExpr(n_rx, n_rf_rx, [&] {
      return rng.uniform(0.0, 2.0 * kPi);
    }));
    const CMatrix h_ef = random_matrix(rng, n_rf_rx, n_rf_tx);
    const CMatrix w = random_matrix(rng, n_rf_tx, dstreams, 0.5);
    const CMatrix v = mmse_receiver(h_ef, w, a, noise);
    const CMatrix e = mse_matrix(v, h_ef, w, a, noise);
    const CMatrix z = e.inverse();
    const CMatrix zh = 0.5 * (z + z.adjoint());
    const double transformed = dstreams - wmmse_objective(zh, e);
    const CMatrix gram = a.adjoint() * a;
    const CMatrix x = h_ef * w;
    const double rate = log_det_rate_nats(x, gram, noise);
    worst = std::max(worst, std::abs(transformed - rate) / std::max(1.0, std::abs(rate)));
  }
  detail = "worst rel err " + fmt("%.2e", worst);
  return worst <= 1e-9;
}

// --- 7 ---------------------------------------------------------------------

bool ssca_learning(std::string& detail) {
  ScenarioConfig cfg = desk_scale();
  cfg.frames = 100;
  bool ok = true;
  detail.clear();
  for (ScheduleKind kind : {ScheduleKind::kGeometric, ScheduleKind::kPolynomial}) {
    cfg.schedule.kind = kind;
    int improved = 0;
    double gain = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const LearningResult r = learn_analog(cfg, t, 50);
      if (r.capacity.back() > r.capacity.front()) ++improved;
      gain += (r.capacity.back() - r.capacity.front()) / cfg.trials;
    }
    if (!detail.empty()) detail += "; ";
    detail += std::string(kind == ScheduleKind::kGeometric ? "geometric " : "polynomial ") +
              std::to_string(improved) + "/" + std::to_string(cfg.trials) +
              " improved, mean gain " + fmt("%.3f bit/s/Hz", gain);
    ok = ok && improved >= 19;
  }
  return ok;
}

// --- 8 ---------------------------------------------------------------------

bool csi_overhead_check(std::string& detail) {
  const SystemDims d;  // full-size dims
  bool ok = true;
  for (int zeta : {1, 8, 16}) {
    const std::uint64_t two = csi_overhead(d, 100, zeta, CsiScheme::kTwoTimescale);
    const std::uint64_t one = csi_overhead(d, 100, zeta, CsiScheme::kSingleTimescale);
    ok = ok && two == 1776ULL * zeta && one == 57600ULL * zeta;
    if (zeta == 8) {
      detail = "zeta 8: " + std::to_string(two) + " vs " + std::to_string(one) + " bits, ratio " +
               fmt("%.1f", static_cast<double>(one) / static_cast<double>(two));
    }
  }
  return ok;
}

// --- 9 ---------------------------------------------------------------------

ScenarioConfig trend_base() {
  ScenarioConfig cfg = desk_scale();
  cfg.frames = 10;
  cfg.slots = 5;
  return cfg;
}

std::vector<double> column(const std::vector<SweepRow>& rows, const std::string& algo,
                           double SweepRow::*field) {
  std::vector<double> out;
  for (const SweepRow& r : rows)
    if (r.algorithm == algo) out.push_back(r.*field);
  return out;
}

bool trends(std::string& detail) {
  const ScenarioConfig base = trend_base();
  const std::vector<Algorithm> two = {Algorithm::kPcccp};
  bool ok = true;

  const std::vector<double> p_ua = {0.02, 0.05, 0.1, 0.15, 0.2};
  const auto rows_p = run_sweep(base, SweepAxis::kPowerUa, p_ua, two);
  const double s_p = spearman(p_ua, column(rows_p, "pcccp", &SweepRow::mean_t_total));
  ok = ok && s_p <= -0.9;
  detail = "P_UA rs " + fmt("%.2f", s_p);

  const std::vector<double> d_y = {20, 50, 100, 200, 400};
  const auto rows_d = run_sweep(base, SweepAxis::kDistanceY, d_y, two);
  const std::vector<double> rho = column(rows_d, "pcccp", &SweepRow::mean_rho);
  const double s_d = spearman(d_y, rho);
  ok = ok && s_d <= -0.9 && rho.back() < 0.1;
  detail += "; D_y rs(rho) " + fmt("%.2f", s_d) + " rho(400) " + fmt("%.3f", rho.back());

  const auto rows_q = run_sweep(base, SweepAxis::kPhaseBits, {0, 5}, two);
  const std::vector<double> tq = column(rows_q, "pcccp", &SweepRow::mean_t_total);
  const double q_gap = std::abs(tq[1] - tq[0]) / tq[0];
  ok = ok && q_gap < 0.05;
  detail += "; 5-bit gap " + fmt("%.2f%%", 100.0 * q_gap);

  const std::vector<double> tau = {0.0, 2e-3, 4e-3, 6e-3, 8e-3};
  const auto rows_t = run_sweep(base, SweepAxis::kCsiDelay, tau, {Algorithm::kPcccp, Algorithm::kIdealCsi});
  const std::vector<double> t2 = column(rows_t, "pcccp", &SweepRow::mean_t_total);
  const std::vector<double> ti = column(rows_t, "ideal-csi", &SweepRow::mean_t_total);
  const auto [lo, hi] = std::minmax_element(t2.begin(), t2.end());
  const double spread = (*hi - *lo) / *lo;
  const double s_i = spearman(tau, ti);
  const double rise = ti.back() - ti.front();
  ok = ok && spread < 0.10 && s_i >= 0.9 && rise > *hi - *lo;
  detail += "; tau spread " + fmt("%.2f%%", 100.0 * spread) + ", ideal-csi rs " +
            fmt("%.2f", s_i) + " rise " + fmt("%.1f%%", 100.0 * rise / ti.front());

  int failed = 0, slots = 0;
  for (const auto* rows : {&rows_p, &rows_d, &rows_q, &rows_t}) {
    for (const SweepRow& r : *rows) {
      failed += r.failed_slots;
      slots += r.slots;
    }
  }
  detail += "; failed slots " + std::to_string(failed) + "/" + std::to_string(slots);
  return ok;
}

// --- 10 --------------------------------------------------------------------

bool determinism(std::string& detail) {
  ScenarioConfig cfg = desk_scale();
  cfg.frames = 3;
  cfg.slots = 3;
  cfg.superframes = 2;
  std::string first, second;
  for (Algorithm a : {Algorithm::kPcccp, Algorithm::kIdealCsi}) {
    cfg.algorithm = a;
    first += slot_csv(run_trial(cfg, 0).slots) + slot_json(run_trial(cfg, 1).slots);
    second += slot_csv(run_trial(cfg, 0).slots) + slot_json(run_trial(cfg, 1).slots);
  }
  detail = std::to_string(first.size()) + " bytes per run, " +
           (first == second ? "identical" : "different");
  return first == second;
}

// --- extra oracles ---------------------------------------------------------

// Textbook water level by bisection on the total power.
RVector waterfill_bisection(const RVector& g, double power) {
  double lo = 0.0, hi = power + 1.0 / g.maxCoeff();
  auto used = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i)
      if (g(i) > 0.0) s += std::max(0.0, mu - 1.0 / g(i));
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (used(mid) < power ? lo : hi) = mid;
  }
  RVector p(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) p(i) = g(i) > 0.0 ? std::max(0.0, lo - 1.0 / g(i)) : 0.0;
  return p;
}

bool waterfill_oracle(std::string& detail) {
  RngStream rng = test_rng(11);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    RVector g(1 + i % 6);
    for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = log_uniform(rng, 1e-3, 1e3);
    const double p = log_uniform(rng, 1e-3, 10.0);
    worst = std::max(worst, (waterfill(g, p) - waterfill_bisection(g, p)).cwiseAbs().maxCoeff() / p);
  }
  detail = "worst |dp|/P " + fmt("%.1e", worst);
  return worst < 1e-9;
}

bool capacity_vs_rate(std::string& detail) {
  // With W W^H = I the precoded rate and the capacity expression coincide.
  RngStream rng = test_rng(12);
  const SystemDims d = SystemDims::with_streams(8, 4, 4, 2, 2, 2);
  const AnalogSet a = AnalogSet::random(rng, d);
  const AnalogMatrices m(a);
  ChannelTriple h;
  h.h1 = random_matrix(rng, d.n_bs, d.n_a);
  h.h2 = random_matrix(rng, d.n_b, d.n_bs);
  h.h3 = random_matrix(rng, d.n_b, d.n_a);
  const NoiseTriple n{0.3, 0.4, 0.5};
  const CapacityTerms c = weighted_capacity(a, h, Weights{}, n);
  const CMatrix eye = CMatrix::Identity(2, 2);
  const double r1 = link_rate(m.u1, h.h1, m.fa, eye, {1.0, n[0]});
  const double r2 = link_rate(m.fb, h.h2, m.u2, eye, {1.0, n[1]});
  const double r3 = link_rate(m.fb, h.h3, m.fa, eye, {1.0, n[2]});
  const double worst = std::max({std::abs(c.c1 - r1), std::abs(c.c2 - r2), std::abs(c.c3 - r3)});
  detail = "worst |C - R| " + fmt("%.1e", worst) + " bit/s/Hz";
  return worst < 1e-10;
}

bool round_trips(std::string& detail) {
  ScenarioConfig cfg = desk_scale();
  cfg.frames = 2;
  cfg.slots = 2;
  cfg.algorithm = Algorithm::kHeuristic;
  const std::vector<SlotRecord> recs = run_superframe(cfg).slots;
  const std::string csv = slot_csv(recs);
  const bool csv_ok = slot_csv(parse_slot_csv(csv)) == csv;
  const std::vector<SlotRecord> back = parse_slot_json(slot_json(recs));
  bool json_ok = back.size() == recs.size();
  for (std::size_t i = 0; json_ok && i < recs.size(); ++i) json_ok = same_emitted(recs[i], back[i]);
  const bool cfg_ok = same_config(parse_config_text(serialize_config(cfg)), cfg);
  detail = std::string("csv ") + (csv_ok ? "ok" : "changed") + ", json " +
           (json_ok ? "ok" : "changed") + ", config " + (cfg_ok ? "ok" : "changed");
  return csv_ok && json_ok && cfg_ok;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: size mismatch");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

CheckResult run_check(const Check& c) {
  CheckResult r;
  r.id = c.id;
  r.title = c.title;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = c.body(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("threw: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.budget_s > 0.0 && r.seconds > c.budget_s) {
    r.passed = false;
    r.detail += "; over time budget of " + fmt("%.0f s", c.budget_s);
  }
  return r;
}

std::string format_result(const CheckResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + r.id + "] " + r.title + ": " + r.detail +
         " (" + fmt("%.2f s", r.seconds) + ")";
}

std::vector<Check> acceptance_checks() {
  return {
      {"1", "latency formula vs event timeline", 5, false, latency_vs_timeline},
      {"2", "closed-form offloading vs grid search", 30, false, offload_vs_grid},
      {"3", "PA model identities", 0, false, pa_identities},
      {"4", "capacity gradients vs finite differences", 10, false, gradient_check},
      {"5", "penalty-CCCP convergence", 120, false, pcccp_convergence},
      {"6", "WMMSE equivalence", 0, false, wmmse_equivalence},
      {"7", "SSCA learning beats random init", 300, true, ssca_learning},
      {"8", "CSI overhead", 0, false, csi_overhead_check},
      {"9", "desk-scale trends", 1800, true, trends},
      {"10", "bitwise determinism", 0, false, determinism},
  };
}

std::vector<Check> extra_oracle_checks() {
  return {
      {"wf", "water-filling vs bisection water level", 0, false, waterfill_oracle},
      {"cap", "capacity equals rate at W = I", 0, false, capacity_vs_rate},
      {"io", "CSV / JSON / config round trips", 0, false, round_trips},
  };
}

}  // namespace mecbf
