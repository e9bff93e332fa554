#include "doctest.h"
#include "mecbf/rate_latency.hpp"
#include "mecbf/ssca.hpp"
#include "support.hpp"

using namespace mecbf;
using doctest::Approx;

namespace {

const SystemDims kSmall = SystemDims::with_streams(4, 2, 2, 2, 2, 2);

ChannelTriple random_triple(RngStream& rng, const SystemDims& d, double var = 1.0) {
  return {test::random_matrix(rng, d.n_bs, d.n_a, var), test::random_matrix(rng, d.n_b, d.n_bs, var),
          test::random_matrix(rng, d.n_b, d.n_a, var)};
}

ChannelTriple zero_triple(const SystemDims& d) {
  return {CMatrix::Zero(d.n_bs, d.n_a), CMatrix::Zero(d.n_b, d.n_bs), CMatrix::Zero(d.n_b, d.n_a)};
}

RMatrix& block(AnalogSet& a, int b) { return b == 0 ? a.u1 : b == 1 ? a.u2 : b == 2 ? a.fa : a.fb; }
const RMatrix& block(const PhaseGradients& g, int b) {
  return b == 0 ? g.u1 : b == 1 ? g.u2 : b == 2 ? g.fa : g.fb;
}

double max_abs(const PhaseGradients& g) {
  return std::max({g.u1.cwiseAbs().maxCoeff(), g.u2.cwiseAbs().maxCoeff(),
                   g.fa.cwiseAbs().maxCoeff(), g.fb.cwiseAbs().maxCoeff()});
}

}  // namespace

TEST_CASE("weighted capacity") {
  RngStream rng = test::rng_for(50);
  const AnalogSet a = AnalogSet::random(rng, kSmall);
  const AnalogMatrices m(a);
  const ChannelTriple h = random_triple(rng, kSmall);
  const NoiseTriple n{0.5, 0.7, 0.9};

  const CapacityTerms up = weighted_capacity(a, h, Weights{1.0, 0.0, 0.0}, n);
  CHECK(up.weighted == Approx(link_capacity(m.u1, h.h1, m.fa, {1.0, n[0]})).epsilon(1e-13));

  const CapacityTerms all = weighted_capacity(a, h, Weights{0.5, 0.3, 0.2}, n);
  const double c1 = link_capacity(m.u1, h.h1, m.fa, {1.0, n[0]});
  const double c2 = link_capacity(m.fb, h.h2, m.u2, {1.0, n[1]});
  const double c3 = link_capacity(m.fb, h.h3, m.fa, {1.0, n[2]});
  CHECK(all.c1 == Approx(c1).epsilon(1e-13));
  CHECK(all.c2 == Approx(c2).epsilon(1e-13));
  CHECK(all.c3 == Approx(c3).epsilon(1e-13));
  CHECK(all.weighted == Approx(0.5 * c1 + 0.3 * c2 + 0.2 * c3).epsilon(1e-13));

  CHECK(weighted_capacity(a, zero_triple(kSmall), Weights{}, n).weighted == Approx(0.0));
  CHECK(max_abs(capacity_gradients(a, zero_triple(kSmall), Weights{}, n)) == 0.0);
}

TEST_CASE("weights") {
  const Weights w = Weights::from_bits(2.0, 1.0, 1.0);
  CHECK(w.w1 == Approx(0.5));
  CHECK(w.w2 == Approx(0.25));
  const Weights eq = Weights::from_bits(0.0, 0.0, 0.0);
  CHECK(eq.w1 == Approx(1.0 / 3.0));
  CHECK_NOTHROW(w.validate());
  CHECK_THROWS_AS((Weights{0.5, 0.6, -0.1}).validate(), std::invalid_argument);
}

TEST_CASE("gradients match central differences") {
  const Weights w{0.5, 0.3, 0.2};
  const NoiseTriple n{0.5, 0.7, 0.9};
  for (std::uint64_t seed : {7, 8, 9}) {
    RngStream rng(seed, 0);
    const AnalogSet a = AnalogSet::random(rng, kSmall);
    const ChannelTriple h = random_triple(rng, kSmall);
    const PhaseGradients g = capacity_gradients(a, h, w, n);
    double worst = 0.0;
    for (int b = 0; b < 4; ++b) {
      for (Eigen::Index i = 0; i < block(g, b).rows(); ++i) {
        for (Eigen::Index j = 0; j < block(g, b).cols(); ++j) {
          AnalogSet p = a, q = a;
          block(p, b)(i, j) += 1e-6;
          block(q, b)(i, j) -= 1e-6;
          const double fd =
              (weighted_capacity(p, h, w, n).weighted - weighted_capacity(q, h, w, n).weighted) / 2e-6;
          worst = std::max(worst, std::abs(fd - block(g, b)(i, j)) / std::max(1e-2, std::abs(fd)));
        }
      }
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("capacity is invariant to a common receive phase") {
  RngStream rng = test::rng_for(51);
  const AnalogSet a = AnalogSet::random(rng, kSmall);
  const ChannelTriple h = random_triple(rng, kSmall);
  AnalogSet b = a;
  b.u1.col(0).array() += 0.7;
  const NoiseTriple n{0.5, 0.7, 0.9};
  CHECK(weighted_capacity(b, h, Weights{}, n).weighted ==
        Approx(weighted_capacity(a, h, Weights{}, n).weighted).epsilon(1e-12));
  // Hence the phase gradient of that column sums to zero.
  CHECK(std::abs(capacity_gradients(a, h, Weights{}, n).u1.col(0).sum()) < 1e-10);
}

TEST_CASE("surrogate recursion") {
  RngStream rng = test::rng_for(52);
  const AnalogSet a = AnalogSet::random(rng, kSmall);
  const NoiseTriple n{0.5, 0.7, 0.9};
  const ChannelTriple h0 = random_triple(rng, kSmall), h1 = random_triple(rng, kSmall);
  const double g0 = weighted_capacity(a, h0, Weights{}, n).weighted;
  const double g1 = weighted_capacity(a, h1, Weights{}, n).weighted;
  const PhaseGradients d0 = capacity_gradients(a, h0, Weights{}, n);
  const PhaseGradients d1 = capacity_gradients(a, h1, Weights{}, n);

  const SurrogateState s0 = SurrogateState::initial(kSmall, 5.0);
  const SurrogateState s1 = surrogate_update(s0, g0, d0, 1.0);
  CHECK(s1.value == Approx(-g0));
  CHECK((s1.f_fa + d0.fa).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s1.t == 0);

  const double e1 = 0.4;
  const SurrogateState s2 = surrogate_update(s1, g1, d1, e1);
  CHECK(s2.value == Approx((1 - e1) * (-g0) - e1 * g1).epsilon(1e-14));
  CHECK((s2.f_u2 - ((1 - e1) * (-d0.u2) - e1 * d1.u2)).cwiseAbs().maxCoeff() < 1e-14);

  const SurrogateState tiny = surrogate_update(s2, g0, d0, 1e-300);
  CHECK(tiny.value == s2.value);
  CHECK(tiny.f_u1 == s2.f_u1);
  CHECK_THROWS_AS(surrogate_update(s2, g0, d0, 0.0), std::invalid_argument);
}

TEST_CASE("surrogate minimizer") {
  RngStream rng = test::rng_for(53);
  const AnalogSet a = AnalogSet::random(rng, kSmall);
  SurrogateState s = SurrogateState::initial(kSmall, 5.0);
  const AnalogSet same = surrogate_minimize(s, a);
  CHECK(same.u1 == a.u1);

  s.f_u1.setConstant(2.0 * s.varpi);
  s.f_fb.setConstant(2.0 * s.varpi);
  const AnalogSet moved = surrogate_minimize(s, a);
  CHECK((moved.u1 - (a.u1.array() - 1.0).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((moved.fb - (a.fb.array() - 1.0).matrix()).cwiseAbs().maxCoeff() < 1e-15);

  s.f_u2 = test::random_phases(rng, kSmall.n_bs, kSmall.n_rf);
  s.f_fa = test::random_phases(rng, kSmall.n_a, kSmall.n_rfa);
  const AnalogSet best = surrogate_minimize(s, a);
  const double fbest = surrogate_value(s, a, best);
  for (int t = 0; t < 50; ++t) {
    AnalogSet p = best;
    p.u2 += 1e-3 * test::random_phases(rng, kSmall.n_bs, kSmall.n_rf);
    p.fb -= 1e-3 * test::random_phases(rng, kSmall.n_b, kSmall.n_rfb);
    CHECK(surrogate_value(s, a, p) > fbest);
  }
}

TEST_CASE("step schedules") {
  StepSchedule poly;
  CHECK(step_schedule(0, poly) == std::pair<double, double>{1.0, 1.0});
  for (int t : {1, 10, 1000}) {
    const auto [e, g] = step_schedule(t, poly);
    CHECK(g / e == Approx(std::pow(1.0 + t, -0.3)).epsilon(1e-12));
  }
  StepSchedule geo;
  geo.kind = ScheduleKind::kGeometric;
  const auto [e2, g2] = step_schedule(2, geo);
  CHECK(e2 == Approx(0.36));
  CHECK(g2 == Approx(0.81));

  StepSchedule bad;
  bad.eps_exponent = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.eps_exponent = 0.8;
  bad.gamma_exponent = 0.7;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("ssca step limits") {
  RngStream rng = test::rng_for(54);
  const AnalogSet a = AnalogSet::random(rng, kSmall);
  const ChannelTriple h = random_triple(rng, kSmall);
  const NoiseTriple n{0.5, 0.7, 0.9};
  const SurrogateState s0 = SurrogateState::initial(kSmall, 5.0);
  const SscaStep still = ssca_iterate(a, s0, h, Weights{}, n, 1.0, 0.0);
  CHECK(still.analog.fa == a.fa);
  const SscaStep jump = ssca_iterate(a, s0, h, Weights{}, n, 1.0, 1.0);
  const AnalogSet target = surrogate_minimize(jump.state, a);
  CHECK((jump.analog.u1 - target.u1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("learning raises the Monte-Carlo capacity") {
  RngStream rng = test::rng_for(55);
  // Fixed angles, fresh gains per sample.
  const std::vector<double> var = path_variances(8, 1.0, 0.1);
  const SystemDims d = SystemDims::with_streams(8, 4, 4, 2, 2, 2);
  const PathSet p1 = draw_paths(rng, var), p2 = draw_paths(rng, var), p3 = draw_paths(rng, var);
  auto sample = [&](RngStream& r) {
    PathSet a = p1, b = p2, c = p3;
    redraw_gains(r, a);
    redraw_gains(r, b);
    redraw_gains(r, c);
    return ChannelTriple{channel_matrix(a, d.n_bs, d.n_a), channel_matrix(b, d.n_b, d.n_bs),
                         channel_matrix(c, d.n_b, d.n_a)};
  };
  const NoiseTriple n{1.0, 1.0, 1.0};
  RngStream eval = test::rng_for(56);
  std::vector<ChannelTriple> evals;
  for (int i = 0; i < 200; ++i) evals.push_back(sample(eval));
  auto mc = [&](const AnalogSet& a) {
    double s = 0.0;
    for (const ChannelTriple& h : evals) s += weighted_capacity(a, h, Weights{}, n).weighted;
    return s / 200.0;
  };
  AnalogSet a = AnalogSet::random(rng, d);
  const double before = mc(a);
  SurrogateState s = SurrogateState::initial(d, 5.0);
  for (int t = 0; t < 100; ++t) {
    const auto [e, g] = step_schedule(t, StepSchedule{});
    SscaStep step = ssca_iterate(a, s, sample(rng), Weights{}, n, e, g);
    a = step.analog;
    s = step.state;
  }
  CHECK(mc(a) > before);
}

TEST_CASE("quantized analog set") {
  RngStream rng = test::rng_for(57);
  const AnalogSet a = AnalogSet::random(rng, kSmall);
  const AnalogSet q = a.quantized(2);
  for (const RMatrix* m : {&q.u1, &q.u2, &q.fa, &q.fb}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) {
      const double k = (*m)(i) / (kPi / 2);
      CHECK(std::abs(k - std::round(k)) < 1e-12);
    }
  }
}
