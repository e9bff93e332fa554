#include "doctest.h"
#include "mecbf/channel.hpp"
#include "support.hpp"

using namespace mecbf;
using doctest::Approx;

TEST_CASE("array response") {
  const CVector a = array_response(0.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a(i) - Complex(0.5, 0.0)) < 1e-15);
  const CVector b = array_response(kPi / 2, 2);
  CHECK(std::abs(b(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(b(1) - Complex(-1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  RngStream rng = test::rng_for(10);
  for (int i = 0; i < 50; ++i) {
    CHECK(array_response(rng.uniform(-kPi, kPi), 1 + i % 9).norm() == Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("single deterministic path") {
  PathSet p;
  p.gains = {Complex(1.0, 0.0)};
  p.aoa = {0.0};
  p.aod = {0.0};
  p.variances = {1.0};
  const CMatrix h = channel_matrix(p, 4, 3);
  // sqrt(12) * (1/2)(1/sqrt(3)) = 1 in every entry.
  CHECK((h - CMatrix::Ones(4, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("path variances and validation") {
  const std::vector<double> v = path_variances(16, 1.0, 0.1);
  REQUIRE(v.size() == 16);
  CHECK(v[0] == 1.0);
  for (std::size_t l = 1; l < v.size(); ++l) CHECK(v[l] == 0.1);

  PathSet bad;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.gains = {Complex(1, 0)};
  bad.aoa = {0.0};
  bad.aod = {0.0, 1.0};
  bad.variances = {1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("channel second moment") {
  RngStream rng = test::rng_for(11);
  const std::vector<double> var = path_variances(16, 1.0, 0.1);
  const int n_rx = 6, n_tx = 4, draws = 10000;
  double sum = 0.0;
  const PathSet geo = draw_paths(rng, var);
  for (int i = 0; i < draws; ++i) {
    PathSet p = draw_paths(rng, var);
    sum += channel_matrix(p, n_rx, n_tx).squaredNorm();
  }
  double total_var = 0.0;
  for (double x : var) total_var += x;
  CHECK(sum / draws == Approx(n_rx * n_tx * total_var / 16.0).epsilon(0.03));

  // Redrawing gains keeps the angles.
  PathSet q = geo;
  redraw_gains(rng, q);
  CHECK(q.aoa == geo.aoa);
  CHECK(q.aod == geo.aod);
  CHECK(q.gains != geo.gains);
}

TEST_CASE("path loss") {
  CHECK(path_loss(1.0, 3.0, -30.0, 1.0) == Approx(1e-3).epsilon(1e-15));
  CHECK(path_loss(1.0, 2.4, -30.0, 1.0) == Approx(1e-3).epsilon(1e-15));
  CHECK(path_loss(10.0, 2.0, 0.0, 1.0) == Approx(0.01).epsilon(1e-15));
  CHECK(path_loss(50.25, 3.0, -30.0, 1.0) == Approx(1e-3 * std::pow(50.25, -3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(path_loss(0.0, 3.0, -30.0, 1.0), std::invalid_argument);

  const LinkGeometry g;
  CHECK(g.uplink_distance() == Approx(std::sqrt(25.0 + 2500.0 + 81.0)));
  CHECK(g.downlink_distance() == Approx(g.uplink_distance()));
  CHECK(g.d2d_distance() == Approx(10.0));
  const LinkGeometry far = LinkGeometry::with_users(5.0, 400.0);
  CHECK(far.user_b[0] == -5.0);
  CHECK(far.uplink_distance() > g.uplink_distance());
}

TEST_CASE("doppler evolution") {
  RngStream rng = test::rng_for(12);
  ChannelProcess proc;
  proc.paths = draw_paths(rng, path_variances(4, 1.0, 0.1));
  proc.n_rx = 4;
  proc.n_tx = 2;
  proc.doppler_hz = 70.0;
  proc.power_gain = 1e-3;

  CHECK(evolve_channel(proc, 0.0).matrix() == proc.matrix());
  ChannelProcess still = proc;
  still.doppler_hz = 0.0;
  CHECK(evolve_channel(still, 0.5).matrix() == still.matrix());

  ChannelProcess one;
  one.paths.gains = {Complex(0.3, -0.7)};
  one.paths.aoa = {0.4};
  one.paths.aod = {-1.1};
  one.paths.variances = {1.0};
  one.n_rx = 3;
  one.n_tx = 2;
  one.doppler_hz = 70.0;
  const double period = 1.0 / (70.0 * std::cos(0.4));
  const ChannelProcess after = evolve_channel(one, period);
  CHECK((after.matrix() - one.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(after.elapsed_s == Approx(period));

  // Evolution composes.
  const CMatrix two_steps = evolve_channel(evolve_channel(proc, 1e-3), 2e-3).matrix();
  CHECK((two_steps - evolve_channel(proc, 3e-3).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(evolve_channel(proc, -1.0), std::invalid_argument);
}

TEST_CASE("effective channel") {
  RngStream rng = test::rng_for(13);
  const CMatrix h = test::random_matrix(rng, 5, 3);
  CHECK(effective_channel(CMatrix::Identity(5, 5), h, CMatrix::Identity(3, 3)) == h);

  const CMatrix u1 = unit_modulus(test::random_phases(rng, 64, 4));
  const CMatrix fa = unit_modulus(test::random_phases(rng, 8, 2));
  const CMatrix h1 = test::random_matrix(rng, 64, 8);
  const CMatrix ef = effective_channel(u1, h1, fa);
  CHECK(ef.rows() == 4);
  CHECK(ef.cols() == 2);

  const CMatrix low = test::random_matrix(rng, 64, 1) * test::random_matrix(rng, 1, 8);
  Eigen::JacobiSVD<CMatrix> svd(effective_channel(u1, low, fa));
  CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));
  CHECK_THROWS_AS(effective_channel(fa, h1, u1), std::invalid_argument);
}
