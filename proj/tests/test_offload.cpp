#include "doctest.h"
#include "mecbf/offload.hpp"
#include "support.hpp"

using namespace mecbf;
using doctest::Approx;

namespace {

DelayCoeffs coeffs(double kl, double ke, double k1, double k2, double k3) {
  DelayCoeffs k;
  k.k_local = kl;
  k.k_edge = ke;
  k.k_up = k1;
  k.k_down = k2;
  k.k_d2d = k3;
  return k;
}

}  // namespace

TEST_CASE("closed-form branches") {
  const OffloadSolution b1 = optimal_rho(coeffs(5, 1, 2, 0.5, 3));
  CHECK(b1.situation == 'B');
  CHECK(b1.branch == "B1");
  CHECK(b1.rho == Approx(0.75));
  CHECK(brute_force_rho(coeffs(5, 1, 2, 0.5, 3), 1e-4).rho == Approx(0.75).epsilon(1e-4));

  const OffloadSolution a1 = optimal_rho(coeffs(1, 2, 1, 3, 1));
  CHECK(a1.situation == 'A');
  CHECK(a1.rho == 0.0);

  // K2 = K_L + K3 exactly: the tie goes to local computing.
  const OffloadSolution tie = optimal_rho(coeffs(1, 2, 1, 2, 1));
  CHECK(tie.rho == 0.0);
}

TEST_CASE("limits") {
  CHECK(optimal_rho(coeffs(1, 0.5, 0.5, 1e6, 0.1)).rho == 0.0);
  CHECK(brute_force_rho(coeffs(1, 0.5, 0.5, 1e6, 0.1), 1e-3).rho == 0.0);
  const OffloadSolution free_edge = optimal_rho(coeffs(1, 1e-9, 1e-9, 0.01, 0.5));
  CHECK(free_edge.rho > 0.99);
}

TEST_CASE("degenerate links") {
  const double inf = std::numeric_limits<double>::infinity();
  DelayCoeffs no_up = coeffs(1, 0.1, inf, 0.1, 0.1);
  no_up.degenerate = true;
  CHECK(optimal_rho(no_up).rho == 0.0);
  DelayCoeffs no_d2d = coeffs(1, 0.1, 0.2, 0.1, inf);
  no_d2d.degenerate = true;
  CHECK(optimal_rho(no_d2d).rho == 1.0);
  DelayCoeffs none = coeffs(1, 0.1, inf, 0.1, inf);
  none.degenerate = true;
  CHECK_THROWS_AS(optimal_rho(none), std::domain_error);
}

TEST_CASE("closed form vs grid and dominance") {
  RngStream rng = test::rng_for(40);
  const double step = 1e-3;
  for (int i = 0; i < 300; ++i) {
    auto lu = [&] { return std::exp(rng.uniform(std::log(1e-4), std::log(1e-1))); };
    const DelayCoeffs k = coeffs(lu(), lu(), lu(), lu(), lu());
    const OffloadSolution cf = optimal_rho(k);
    const OffloadSolution bf = brute_force_rho(k, step);
    CHECK(cf.latency <= bf.latency * (1.0 + 1e-12));
    CHECK(cf.latency == Approx(total_latency(cf.rho, k).total).epsilon(1e-15));
    const double t0 = total_latency(0.0, k).total, t1 = total_latency(1.0, k).total;
    CHECK(cf.latency <= std::min(t0, t1));
    CHECK(binary_offload(k).latency == std::min(t0, t1));
    const double b = binary_offload(k).rho;
    CHECK((b == 0.0 || b == 1.0));
  }
}
