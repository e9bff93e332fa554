// Short-term digital beamforming for one link: the WMMSE form of the rate
// with the nonlinear PA budget, solved by a penalty / convex-concave double
// loop, and a cheap water-filling design scaled back into the PA budget.
#pragma once

#include <string>
#include <vector>

#include "mecbf/core.hpp"

namespace mecbf {

enum class LinkKind { kUplink, kDownlink, kD2d };

std::string to_string(LinkKind kind);

/// One link's digital design problem. The PA budget applies to the rows of
/// the transmit analog matrix.
struct LinkRole {
  LinkKind kind = LinkKind::kUplink;
  CMatrix tx_analog;  // F, n_pa x n_rf_tx
  CMatrix rx_analog;  // A, n_rx x n_rf_rx
  CMatrix h;          // full channel, n_rx x n_pa
  double noise = 1e-12;
  double power_budget = 0.1;  // watt of PA consumption
  double p_max = 1.0;         // per-PA output limit
  int streams = 2;

  int num_pa() const { return static_cast<int>(tx_analog.rows()); }
  /// rx^H H tx.
  CMatrix effective() const;
  void validate() const;
};

/// min(P_budget, 4 n_pa P_max / pi): the largest consumption the PAs can reach.
double saturated_budget(const LinkRole& role);

struct PcccpState {
  CMatrix w;   // n_rf_tx x d
  CMatrix v;   // n_rf_rx x d
  CMatrix z;   // d x d
  RVector p_pa;
  RVector v_out;
  double varrho = 0.1;
  int inner = 0;
  int outer = 0;
  bool regularized = false;
};

struct PcccpConfig {
  double varrho0 = 0.1;
  double c = 0.8;
  double delta1 = 1e-3;
  double delta2 = 1e-8;
  int max_inner = 200;
  int max_outer = 100;
  bool record_trace = true;
  /// Evaluate the objective after every block (needed for the trace and
  /// worst_block_increase); otherwise once per inner iteration.
  bool check_blocks = true;

  void validate() const;
};

/// (V^H H W - I)(V^H H W - I)^H + s2 V^H A^H A V.
CMatrix mse_matrix(const CMatrix& v, const CMatrix& h_ef, const CMatrix& w,
                   const CMatrix& rx_analog, double noise);

/// tr(Z E) - log det Z.
double wmmse_objective(const CMatrix& z, const CMatrix& e);

/// [s2 A^H A + H W W^H H^H]^-1 H W. Sets *regularized when the system matrix
/// needed diagonal loading.
CMatrix mmse_receiver(const CMatrix& h_ef, const CMatrix& w, const CMatrix& rx_analog,
                      double noise, bool* regularized = nullptr);

/// Sum of squared residuals of the three equality constraints.
double penalty_value(const PcccpState& s, const CMatrix& tx_analog, double budget,
                     double p_max);

/// wmmse_objective + penalty / (2 varrho).
double penalized_objective(const PcccpState& s, const LinkRole& role, const CMatrix& h_ef);

/// Receiver V and one cyclic sweep over the PA consumptions.
void update_block1(PcccpState& s, const LinkRole& role, const CMatrix& h_ef);
/// Weight matrix Z = E^-1 and the per-PA output amplitudes.
void update_block2(PcccpState& s, const LinkRole& role, const CMatrix& h_ef);
/// Precoder from the linearized penalty.
void update_block3(PcccpState& s, const LinkRole& role, const CMatrix& h_ef);

/// Minimizer of (p - h(x))^2 + (n - x)^2 over x in [0, sqrt(p_max)].
double best_vout(double p_pa, double row_norm, double p_max);

struct PcccpTraceRecord {
  int outer = 0;
  int inner = 0;
  int block = 0;  // 1..3, or 0 for the end of an outer iteration
  double objective = 0.0;
  double penalty = 0.0;
  double varrho = 0.0;
};

struct PcccpResult {
  CMatrix w;      // precoder actually used
  CMatrix w_raw;  // before any feasibility scaling
  PcccpState state;
  bool converged = false;
  bool scaled = false;
  double penalty = 0.0;
  double objective = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  /// Largest increase of the penalized objective over a single block update,
  /// relative to max(1, |objective|). Only tracked with check_blocks.
  double worst_block_increase = 0.0;
  std::vector<PcccpTraceRecord> trace;
};

/// Feasible-leaning starting point built from `w0`.
PcccpState initial_state(const LinkRole& role, const CMatrix& h_ef, const CMatrix& w0,
                         double varrho0);

/// Double loop starting from the water-filling design.
PcccpResult pcccp_solve(const LinkRole& role, const PcccpConfig& config);
PcccpResult pcccp_solve(const LinkRole& role, const PcccpConfig& config, const CMatrix& w0);

/// Water-filling power over the top modes of the whitened channel, then
/// scaled down until the PA budget and the per-PA output limit hold.
CMatrix waterfilling_heuristic(const LinkRole& role);

/// Water-filling of `power` over channel gains, equal split when all vanish.
RVector waterfill(const RVector& gains, double power);

/// Largest s in [0, 1] with s W feasible for the PA budget and output limit.
double feasibility_scale(const CMatrix& tx_analog, const CMatrix& w, double budget,
                         double p_max);

}  // namespace mecbf
