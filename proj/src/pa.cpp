#include "mecbf/pa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecbf {
namespace {

double doherty(double p_out, double p_max) {
  const double root = std::sqrt(p_out * p_max);
  if (p_out <= 0.25 * p_max) return 2.0 * root / kPi;
  return 6.0 * root / kPi - 2.0 * p_max / kPi;
}

}  // namespace

double pa_power(double p_out, double p_max) {
  if (!(p_max > 0.0)) throw std::invalid_argument("pa_power: p_max must be positive");
  if (p_out < 0.0 || p_out > p_max || !std::isfinite(p_out)) {
    throw std::invalid_argument("pa_power: p_out outside [0, p_max]");
  }
  return doherty(p_out, p_max);
}

double h_of_vout(double v_out, double p_max) {
  if (!(p_max > 0.0)) throw std::invalid_argument("h_of_vout: p_max must be positive");
  const double root_max = std::sqrt(p_max);
  if (v_out < 0.0 || v_out > root_max || !std::isfinite(v_out)) {
    throw std::invalid_argument("h_of_vout: v_out outside [0, sqrt(p_max)]");
  }
  if (v_out <= 0.5 * root_max) return 2.0 * v_out * root_max / kPi;
  return 6.0 * v_out * root_max / kPi - 2.0 * p_max / kPi;
}

double per_pa_output(const CVector& analog_row, const CMatrix& w) {
  if (analog_row.size() != w.rows()) {
    throw std::invalid_argument("per_pa_output: dimension mismatch");
  }
  return (analog_row.transpose() * w).squaredNorm();
}

PaPowerReport total_pa_power(const CMatrix& analog, const CMatrix& w, double p_max) {
  if (analog.cols() != w.rows()) throw std::invalid_argument("total_pa_power: dimension mismatch");
  if (!(p_max > 0.0)) throw std::invalid_argument("total_pa_power: p_max must be positive");
  PaPowerReport r;
  const CMatrix out = analog * w;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double p = out.row(i).squaredNorm();
    r.max_output = std::max(r.max_output, p);
    if (p > p_max) r.overdriven.push_back(static_cast<int>(i));
    r.total += doherty(p, p_max);
  }
  return r;
}

}  // namespace mecbf
