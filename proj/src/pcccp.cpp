#include "mecbf/pcccp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mecbf/pa.hpp"

namespace mecbf {
namespace {

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Solves M X = B for Hermitian M, loading the diagonal once when M is not
// numerically positive definite.
CMatrix solve_hpd(const CMatrix& m, const CMatrix& b, bool* regularized) {
  const CMatrix mh = hermitian_part(m);
  Eigen::LLT<CMatrix> llt(mh);
  if (llt.info() == Eigen::Success) {
    CMatrix x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  if (regularized) *regularized = true;
  const double n = static_cast<double>(mh.rows());
  double load = 1e-12 * std::abs(mh.trace().real()) / n;
  if (!(load > 0.0)) load = 1e-300;
  CMatrix loaded = mh;
  loaded.diagonal().array() += load;
  Eigen::LDLT<CMatrix> ldlt(loaded);
  return ldlt.solve(b);
}

RVector row_norms(const CMatrix& fw) {
  RVector r(fw.rows());
  for (Eigen::Index i = 0; i < fw.rows(); ++i) r(i) = fw.row(i).norm();
  return r;
}

// Hermitian inverse square root of Q_F = F^H F.
CMatrix inverse_sqrt(const CMatrix& q) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(q));
  const RVector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0) || ev.minCoeff() <= 1e-12 * top) {
    throw std::invalid_argument("transmit analog matrix has dependent columns");
  }
  const RVector inv_root = ev.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().adjoint();
}

double phi(double p_pa, double row_norm, double x, double p_max) {
  const double a = p_pa - h_of_vout(x, p_max);
  const double b = row_norm - x;
  return a * a + b * b;
}

void record(PcccpResult& r, const PcccpConfig& cfg, const PcccpState& s, int block,
            double objective, double penalty) {
  if (!cfg.record_trace) return;
  r.trace.push_back({s.outer, s.inner, block, objective, penalty, s.varrho});
}

}  // namespace

std::string to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::kUplink:
      return "uplink";
    case LinkKind::kDownlink:
      return "downlink";
    case LinkKind::kD2d:
      return "d2d";
  }
  return "unknown";
}

CMatrix LinkRole::effective() const { return rx_analog.adjoint() * h * tx_analog; }

void LinkRole::validate() const {
  if (h.rows() != rx_analog.rows() || h.cols() != tx_analog.rows()) {
    throw std::invalid_argument("link role: channel does not match the analog matrices");
  }
  if (!(noise > 0.0) || !(power_budget > 0.0) || !(p_max > 0.0)) {
    throw std::invalid_argument("link role: noise, budget and p_max must be positive");
  }
  if (streams < 1 || streams > std::min(tx_analog.cols(), rx_analog.cols())) {
    throw std::invalid_argument("link role: stream count exceeds the RF chains");
  }
}

double saturated_budget(const LinkRole& role) {
  return std::min(role.power_budget, 4.0 * role.num_pa() * role.p_max / kPi);
}

void PcccpConfig::validate() const {
  if (!(varrho0 > 0.0)) throw std::invalid_argument("pcccp: varrho0 must be positive");
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("pcccp: c must lie in (0, 1)");
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) {
    throw std::invalid_argument("pcccp: tolerances must be positive");
  }
  if (max_inner < 1 || max_outer < 1) {
    throw std::invalid_argument("pcccp: iteration limits must be >= 1");
  }
}

CMatrix mse_matrix(const CMatrix& v, const CMatrix& h_ef, const CMatrix& w,
                   const CMatrix& rx_analog, double noise) {
  if (v.rows() != h_ef.rows() || h_ef.cols() != w.rows() || v.cols() != w.cols() ||
      rx_analog.cols() != v.rows()) {
    throw std::invalid_argument("mse_matrix: dimension mismatch");
  }
  const Eigen::Index d = w.cols();
  const CMatrix err = v.adjoint() * h_ef * w - CMatrix::Identity(d, d);
  const CMatrix av = rx_analog * v;
  return hermitian_part(err * err.adjoint() + noise * (av.adjoint() * av));
}

double wmmse_objective(const CMatrix& z, const CMatrix& e) {
  if (z.rows() != z.cols() || e.rows() != z.rows() || e.cols() != z.cols()) {
    throw std::invalid_argument("wmmse_objective: dimension mismatch");
  }
  if ((z - z.adjoint()).norm() > 1e-9 * std::max(1.0, z.norm())) {
    throw std::invalid_argument("wmmse_objective: Z is not Hermitian");
  }
  Eigen::LLT<CMatrix> llt(hermitian_part(z));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("wmmse_objective: Z is not positive definite");
  }
  const CMatrix& factor = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < factor.rows(); ++i) log_det += 2.0 * std::log(factor(i, i).real());
  return (z * e).trace().real() - log_det;
}

CMatrix mmse_receiver(const CMatrix& h_ef, const CMatrix& w, const CMatrix& rx_analog,
                      double noise, bool* regularized) {
  if (h_ef.cols() != w.rows() || rx_analog.cols() != h_ef.rows()) {
    throw std::invalid_argument("mmse_receiver: dimension mismatch");
  }
  if (!(noise > 0.0)) throw std::invalid_argument("mmse_receiver: noise must be positive");
  const CMatrix hw = h_ef * w;
  const CMatrix m = noise * (rx_analog.adjoint() * rx_analog) + hw * hw.adjoint();
  return solve_hpd(m, hw, regularized);
}

double penalty_value(const PcccpState& s, const CMatrix& tx_analog, double budget,
                     double p_max) {
  const RVector norms = row_norms(tx_analog * s.w);
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.p_pa.size(); ++i) {
    const double a = s.p_pa(i) - h_of_vout(s.v_out(i), p_max);
    const double b = norms(i) - s.v_out(i);
    total += a * a + b * b;
  }
  const double c = s.p_pa.sum() - budget;
  return total + c * c;
}

double penalized_objective(const PcccpState& s, const LinkRole& role, const CMatrix& h_ef) {
  const CMatrix e = mse_matrix(s.v, h_ef, s.w, role.rx_analog, role.noise);
  const double pen = penalty_value(s, role.tx_analog, saturated_budget(role), role.p_max);
  return wmmse_objective(s.z, e) + pen / (2.0 * s.varrho);
}

void update_block1(PcccpState& s, const LinkRole& role, const CMatrix& h_ef) {
  s.v = mmse_receiver(h_ef, s.w, role.rx_analog, role.noise, &s.regularized);
  const double budget = saturated_budget(role);
  const double cap = 4.0 * role.p_max / kPi;
  double sum = s.p_pa.sum();
  for (Eigen::Index i = 0; i < s.p_pa.size(); ++i) {
    const double others = sum - s.p_pa(i);
    const double target = 0.5 * (h_of_vout(s.v_out(i), role.p_max) + budget - others);
    s.p_pa(i) = std::clamp(target, 0.0, cap);
    sum = others + s.p_pa(i);
  }
}

double best_vout(double p_pa, double row_norm, double p_max) {
  const double root = std::sqrt(p_max);
  const double pi2 = kPi * kPi;
  const double x1 = std::clamp(pi2 * (2.0 * root * p_pa / kPi + row_norm) / (pi2 + 4.0 * p_max),
                               0.0, 0.5 * root);
  const double x2 = std::clamp(
      pi2 * (6.0 * root * p_pa / kPi + row_norm + 12.0 * p_max * root / pi2) / (pi2 + 36.0 * p_max),
      0.5 * root, root);
  return phi(p_pa, row_norm, x1, p_max) <= phi(p_pa, row_norm, x2, p_max) ? x1 : x2;
}

void update_block2(PcccpState& s, const LinkRole& role, const CMatrix& h_ef) {
  const CMatrix e = mse_matrix(s.v, h_ef, s.w, role.rx_analog, role.noise);
  const Eigen::Index d = e.rows();
  s.z = hermitian_part(solve_hpd(e, CMatrix::Identity(d, d), &s.regularized));
  const RVector norms = row_norms(role.tx_analog * s.w);
  for (Eigen::Index i = 0; i < s.v_out.size(); ++i) {
    s.v_out(i) = best_vout(s.p_pa(i), norms(i), role.p_max);
  }
}

void update_block3(PcccpState& s, const LinkRole& role, const CMatrix& h_ef) {
  const CMatrix& f = role.tx_analog;
  const double k = 1.0 / (2.0 * s.varrho);
  const CMatrix hv = h_ef.adjoint() * s.v;  // H^H V
  const CMatrix m = hv * s.z * hv.adjoint() + k * (f.adjoint() * f);
  CMatrix rhs = hv * s.z;
  const CMatrix fw = f * s.w;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double norm = fw.row(i).norm();
    if (norm < 1e-12) continue;  // kink of the norm: zero subgradient
    rhs += (s.v_out(i) * k / norm) * (f.row(i).adjoint() * fw.row(i));
  }
  s.w = solve_hpd(m, rhs, &s.regularized);
}

PcccpState initial_state(const LinkRole& role, const CMatrix& h_ef, const CMatrix& w0,
                         double varrho0) {
  PcccpState s;
  s.varrho = varrho0;
  s.w = w0;
  s.v = mmse_receiver(h_ef, s.w, role.rx_analog, role.noise, &s.regularized);
  const CMatrix e = mse_matrix(s.v, h_ef, s.w, role.rx_analog, role.noise);
  const Eigen::Index d = e.rows();
  s.z = hermitian_part(solve_hpd(e, CMatrix::Identity(d, d), &s.regularized));
  const double root = std::sqrt(role.p_max);
  const RVector norms = row_norms(role.tx_analog * s.w);
  s.v_out = norms.cwiseMin(root);
  s.p_pa.resize(s.v_out.size());
  for (Eigen::Index i = 0; i < s.v_out.size(); ++i) s.p_pa(i) = h_of_vout(s.v_out(i), role.p_max);
  const double budget = saturated_budget(role);
  const double cap = 4.0 * role.p_max / kPi;
  const double sum = s.p_pa.sum();
  if (sum > 0.0) {
    s.p_pa = (s.p_pa * (budget / sum)).cwiseMin(cap);
  } else {
    s.p_pa.setConstant(budget / static_cast<double>(s.p_pa.size()));
  }
  return s;
}

PcccpResult pcccp_solve(const LinkRole& role, const PcccpConfig& config) {
  role.validate();
  return pcccp_solve(role, config, waterfilling_heuristic(role));
}

PcccpResult pcccp_solve(const LinkRole& role, const PcccpConfig& cfg, const CMatrix& w0) {
  role.validate();
  cfg.validate();
  const CMatrix h_ef = role.effective();
  if (w0.rows() != h_ef.cols() || w0.cols() != role.streams) {
    throw std::invalid_argument("pcccp_solve: initial precoder has the wrong shape");
  }
  const double budget = saturated_budget(role);

  PcccpResult r;
  PcccpState s = initial_state(role, h_ef, w0, cfg.varrho0);
  double outer_prev = penalized_objective(s, role, h_ef);
  record(r, cfg, s, 0, outer_prev, penalty_value(s, role.tx_analog, budget, role.p_max));

  auto after_block = [&](int block, double& prev) {
    const double f = penalized_objective(s, role, h_ef);
    const double rise = (f - prev) / std::max(1.0, std::abs(prev));
    r.worst_block_increase = std::max(r.worst_block_increase, rise);
    if (cfg.record_trace) record(r, cfg, s, block, f, penalty_value(s, role.tx_analog, budget, role.p_max));
    prev = f;
  };

  for (s.outer = 0; s.outer < cfg.max_outer; ++s.outer) {
    double f = penalized_objective(s, role, h_ef);
    for (s.inner = 0; s.inner < cfg.max_inner; ++s.inner) {
      const double start = f;
      if (cfg.check_blocks || cfg.record_trace) {
        update_block1(s, role, h_ef);
        after_block(1, f);
        update_block2(s, role, h_ef);
        after_block(2, f);
        update_block3(s, role, h_ef);
        after_block(3, f);
      } else {
        update_block1(s, role, h_ef);
        update_block2(s, role, h_ef);
        update_block3(s, role, h_ef);
        f = penalized_objective(s, role, h_ef);
      }
      ++r.inner_iterations;
      if (std::abs(f - start) < cfg.delta1) {
        ++s.inner;
        break;
      }
    }
    const double pen = penalty_value(s, role.tx_analog, budget, role.p_max);
    record(r, cfg, s, 0, f, pen);
    r.outer_iterations = s.outer + 1;
    const bool settled = s.outer > 0 && std::abs(f - outer_prev) < cfg.delta1;
    outer_prev = f;
    if (settled && pen < cfg.delta2) {
      r.converged = true;
      break;
    }
    s.varrho *= cfg.c;
  }

  r.penalty = penalty_value(s, role.tx_analog, budget, role.p_max);
  r.objective = penalized_objective(s, role, h_ef);
  r.w_raw = s.w;
  const double scale = feasibility_scale(role.tx_analog, s.w, role.power_budget, role.p_max);
  r.scaled = scale < 1.0;
  r.w = scale * s.w;
  r.state = std::move(s);
  return r;
}

RVector waterfill(const RVector& gains, double power) {
  if (!(power >= 0.0)) throw std::invalid_argument("waterfill: power must be >= 0");
  const Eigen::Index n = gains.size();
  RVector p = RVector::Zero(n);
  if (n == 0) return p;
  if (!(gains.maxCoeff() > 0.0)) {
    p.setConstant(power / static_cast<double>(n));
    return p;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return gains(a) > gains(b); });
  // Largest active set whose water level sits above every member's floor.
  double level = 0.0;
  double inv_sum = 0.0;
  std::size_t active = 0;
  for (std::size_t m = 0; m < order.size(); ++m) {
    const double g = gains(order[m]);
    if (!(g > 0.0)) break;
    const double candidate = (power + inv_sum + 1.0 / g) / static_cast<double>(m + 1);
    if (candidate <= 1.0 / g) break;
    inv_sum += 1.0 / g;
    level = candidate;
    active = m + 1;
  }
  for (std::size_t m = 0; m < active; ++m) {
    p(order[m]) = std::max(0.0, level - 1.0 / gains(order[m]));
  }
  return p;
}

double feasibility_scale(const CMatrix& tx_analog, const CMatrix& w, double budget,
                         double p_max) {
  const PaPowerReport full = total_pa_power(tx_analog, w, p_max);
  double hi = 1.0;
  if (full.max_output > p_max) hi = std::sqrt(p_max / full.max_output) * (1.0 - 1e-12);
  auto fits = [&](double s) {
    const PaPowerReport r = total_pa_power(tx_analog, s * w, p_max);
    return r.ok() && r.total <= budget;
  };
  if (fits(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

CMatrix waterfilling_heuristic(const LinkRole& role) {
  role.validate();
  const CMatrix h_ef = role.effective();
  const CMatrix q_inv_sqrt = inverse_sqrt(role.tx_analog.adjoint() * role.tx_analog);

  // Whiten the combiner noise: A = U S V^H gives A^H A = V S^2 V^H.
  Eigen::JacobiSVD<CMatrix> rx_svd(role.rx_analog, Eigen::ComputeThinV);
  const RVector& sv = rx_svd.singularValues();
  if (!(sv.minCoeff() > 1e-12 * sv.maxCoeff())) {
    throw RankDeficientError("receive analog matrix has dependent columns");
  }
  const CMatrix h_bar = sv.cwiseInverse().asDiagonal() * rx_svd.matrixV().adjoint() * h_ef;

  Eigen::JacobiSVD<CMatrix> svd(h_bar * q_inv_sqrt, Eigen::ComputeFullV);
  const int d = role.streams;
  const RVector s = svd.singularValues();
  RVector gains = RVector::Zero(d);
  for (int k = 0; k < d && k < s.size(); ++k) gains(k) = s(k) * s(k) / role.noise;
  const RVector p = waterfill(gains, role.power_budget);
  const CMatrix w =
      q_inv_sqrt * svd.matrixV().leftCols(d) * p.cwiseSqrt().cast<Complex>().asDiagonal();
  return feasibility_scale(role.tx_analog, w, role.power_budget, role.p_max) * w;
}

}  // namespace mecbf
