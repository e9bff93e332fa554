// Doherty power-amplifier consumption model.
#pragma once

#include <vector>

#include "mecbf/core.hpp"

namespace mecbf {

/// Consumed power for output power p_out of a PA rated p_max.
/// 2 sqrt(p_out p_max)/pi up to p_max/4, 6 sqrt(p_out p_max)/pi - 2 p_max/pi above.
double pa_power(double p_out, double p_max);

/// Same model written in the output amplitude v_out = sqrt(p_out); breakpoints
/// at sqrt(p_max)/2 and sqrt(p_max).
double h_of_vout(double v_out, double p_max);

/// ||row * W||^2, the output power of one PA.
double per_pa_output(const CVector& analog_row, const CMatrix& w);

struct PaPowerReport {
  double total = 0.0;       // sum of consumed power, watt
  double max_output = 0.0;  // largest per-PA output power, watt
  std::vector<int> overdriven;  // rows whose output exceeds p_max

  bool ok() const { return overdriven.empty(); }
};

/// Sum of pa_power over the rows of analog * W. Rows driven beyond p_max are
/// reported and evaluated on the continued upper branch instead of throwing.
PaPowerReport total_pa_power(const CMatrix& analog, const CMatrix& w, double p_max);

}  // namespace mecbf
