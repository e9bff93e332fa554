// Extended Saleh-Valenzuela mmWave channels for the uplink (BS <- A),
// downlink (B <- BS) and D2D link (B <- A), with path loss and Doppler
// phase evolution.
#pragma once

#include <array>
#include <vector>

#include "mecbf/core.hpp"

namespace mecbf {

/// Multipath description of one link. gains[l] carries the current complex
/// gain including any accumulated Doppler rotation.
struct PathSet {
  std::vector<Complex> gains;
  std::vector<double> aoa;        // arrival angles, radians
  std::vector<double> aod;        // departure angles, radians
  std::vector<double> variances;  // E|gain|^2 per path

  std::size_t size() const { return gains.size(); }
  /// Throws std::invalid_argument if empty, ragged or a variance is <= 0.
  void validate() const;
};

/// Per-path gain variances: one LOS path with `los_variance` followed by
/// `num_paths - 1` NLOS paths with `nlos_variance`.
std::vector<double> path_variances(int num_paths, double los_variance,
                                   double nlos_variance);

/// Draws angles uniformly on [-pi/2, pi/2] and gains from CN(0, variance).
PathSet draw_paths(RngStream& rng, const std::vector<double>& variances);
/// Redraws only the complex gains, keeping angles.
void redraw_gains(RngStream& rng, PathSet& paths);

/// Half-wavelength ULA response (1/sqrt(n))[1, e^{j pi sin t}, ...].
CVector array_response(double theta, int n);

/// sqrt(n_rx n_tx / L_p) sum_l gain_l a_r(aoa_l) a_t(aod_l)^H.
CMatrix channel_matrix(const PathSet& paths, int n_rx, int n_tx);

/// Draws fresh gains for the given geometry and returns the channel with the
/// Doppler factor e^{j 2 pi f_d tau cos(aoa)} applied per path.
CMatrix sample_channel(RngStream& rng, const PathSet& geometry, int n_rx,
                       int n_tx, double doppler_hz, double delay_s);

using Position = std::array<double, 3>;

struct LinkGeometry {
  Position bs{0.0, 0.0, 10.0};
  Position user_a{5.0, 50.0, 1.0};
  Position user_b{-5.0, 50.0, 1.0};
  double beta_up = 3.0;
  double beta_down = 3.0;
  double beta_d2d = 2.4;
  double c0_db = -30.0;
  double d0 = 1.0;

  /// Users at [dx, dy, h] and [-dx, dy, h].
  static LinkGeometry with_users(double dx, double dy, double user_height = 1.0);

  double uplink_distance() const;
  double downlink_distance() const;
  double d2d_distance() const;
};

double distance(const Position& a, const Position& b);

/// C0 (d/D0)^-beta as a linear power factor.
double path_loss(double d_link, double beta, double c0_db, double d0);

/// Path set plus Doppler and elapsed time for one link.
struct ChannelProcess {
  PathSet paths;
  int n_rx = 1;
  int n_tx = 1;
  double doppler_hz = 0.0;
  double elapsed_s = 0.0;
  double power_gain = 1.0;  // linear path loss applied to the matrix

  CMatrix matrix() const;
};

/// Rotates every path gain by e^{j 2 pi f_d dt cos(aoa)} and advances time.
ChannelProcess evolve_channel(const ChannelProcess& proc, double dt);

/// rx^H H tx.
CMatrix effective_channel(const CMatrix& rx_analog, const CMatrix& h,
                          const CMatrix& tx_analog);

/// H1 is N x N_a, H2 is N_b x N, H3 is N_b x N_a.
struct ChannelTriple {
  CMatrix h1;
  CMatrix h2;
  CMatrix h3;
};

}  // namespace mecbf
