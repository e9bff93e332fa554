#include "mecbf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mecbf {

void PathSet::validate() const {
  if (gains.empty()) throw std::invalid_argument("PathSet: at least one path required");
  if (aoa.size() != gains.size() || aod.size() != gains.size() ||
      variances.size() != gains.size()) {
    throw std::invalid_argument("PathSet: ragged path arrays");
  }
  for (double v : variances) {
    if (!(v > 0.0)) throw std::invalid_argument("PathSet: path variance must be positive");
  }
}

std::vector<double> path_variances(int num_paths, double los_variance,
                                   double nlos_variance) {
  if (num_paths < 1) throw std::invalid_argument("path_variances: num_paths < 1");
  std::vector<double> v(static_cast<std::size_t>(num_paths), nlos_variance);
  v[0] = los_variance;
  return v;
}

PathSet draw_paths(RngStream& rng, const std::vector<double>& variances) {
  PathSet p;
  p.variances = variances;
  p.aoa.resize(variances.size());
  p.aod.resize(variances.size());
  p.gains.resize(variances.size());
  for (std::size_t l = 0; l < variances.size(); ++l) {
    p.aoa[l] = rng.uniform(-kPi / 2.0, kPi / 2.0);
    p.aod[l] = rng.uniform(-kPi / 2.0, kPi / 2.0);
  }
  redraw_gains(rng, p);
  p.validate();
  return p;
}

void redraw_gains(RngStream& rng, PathSet& paths) {
  paths.gains.resize(paths.variances.size());
  for (std::size_t l = 0; l < paths.variances.size(); ++l) {
    paths.gains[l] = rng.complex_normal(paths.variances[l]);
  }
}

CVector array_response(double theta, int n) {
  if (n < 1) throw std::invalid_argument("array_response: n must be >= 1");
  CVector a(n);
  const double s = std::sin(theta);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) a(k) = std::polar(norm, kPi * k * s);
  return a;
}

CMatrix channel_matrix(const PathSet& paths, int n_rx, int n_tx) {
  paths.validate();
  CMatrix h = CMatrix::Zero(n_rx, n_tx);
  for (std::size_t l = 0; l < paths.size(); ++l) {
    h.noalias() += paths.gains[l] * array_response(paths.aoa[l], n_rx) *
                   array_response(paths.aod[l], n_tx).adjoint();
  }
  const double scale = std::sqrt(static_cast<double>(n_rx) * n_tx / paths.size());
  return scale * h;
}

CMatrix sample_channel(RngStream& rng, const PathSet& geometry, int n_rx, int n_tx,
                       double doppler_hz, double delay_s) {
  geometry.validate();
  PathSet p = geometry;
  redraw_gains(rng, p);
  for (std::size_t l = 0; l < p.size(); ++l) {
    p.gains[l] *= std::polar(1.0, 2.0 * kPi * doppler_hz * delay_s * std::cos(p.aoa[l]));
  }
  return channel_matrix(p, n_rx, n_tx);
}

LinkGeometry LinkGeometry::with_users(double dx, double dy, double user_height) {
  LinkGeometry g;
  g.user_a = {dx, dy, user_height};
  g.user_b = {-dx, dy, user_height};
  return g;
}

double distance(const Position& a, const Position& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double LinkGeometry::uplink_distance() const { return distance(bs, user_a); }
double LinkGeometry::downlink_distance() const { return distance(bs, user_b); }
double LinkGeometry::d2d_distance() const { return distance(user_a, user_b); }

double path_loss(double d_link, double beta, double c0_db, double d0) {
  if (!(d_link > 0.0)) throw std::invalid_argument("path_loss: distance must be positive");
  if (!(d0 > 0.0)) throw std::invalid_argument("path_loss: reference distance must be positive");
  return db_to_linear(c0_db, DbMode::kPowerRatio) * std::pow(d_link / d0, -beta);
}

CMatrix ChannelProcess::matrix() const {
  return std::sqrt(power_gain) * channel_matrix(paths, n_rx, n_tx);
}

ChannelProcess evolve_channel(const ChannelProcess& proc, double dt) {
  if (dt < 0.0) throw std::invalid_argument("evolve_channel: dt must be >= 0");
  ChannelProcess next = proc;
  if (dt == 0.0 || proc.doppler_hz == 0.0) {
    next.elapsed_s += dt;
    return next;
  }
  for (std::size_t l = 0; l < next.paths.size(); ++l) {
    next.paths.gains[l] *=
        std::polar(1.0, 2.0 * kPi * proc.doppler_hz * dt * std::cos(next.paths.aoa[l]));
  }
  next.elapsed_s += dt;
  return next;
}

CMatrix effective_channel(const CMatrix& rx_analog, const CMatrix& h,
                          const CMatrix& tx_analog) {
  if (rx_analog.rows() != h.rows() || h.cols() != tx_analog.rows()) {
    throw std::invalid_argument("effective_channel: dimension mismatch");
  }
  return rx_analog.adjoint() * h * tx_analog;
}

}  // namespace mecbf
