#include "mecbf/ssca.hpp"

#include <cmath>
#include <stdexcept>

#include "mecbf/rate_latency.hpp"

namespace mecbf {
namespace {

const double kLn2 = std::log(2.0);

RMatrix random_phases(RngStream& rng, int rows, int cols) {
  RMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(0.0, 2.0 * kPi);
  }
  return m;
}

// (X^H X)^-1, throwing when X loses column rank.
CMatrix gram_inverse(const CMatrix& x) {
  const CMatrix g = x.adjoint() * x;
  Eigen::LLT<CMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw RankDeficientError("analog Gram matrix is singular");
  const Eigen::Index n = g.rows();
  const CMatrix inv = llt.solve(CMatrix::Identity(n, n));
  if (!inv.allFinite()) throw RankDeficientError("analog Gram matrix is singular");
  return inv;
}

// Maps a conjugate Wirtinger derivative D = dg/dX* of a real function to the
// phase gradient dg/dtheta = conj(D) o jX - D o jX* = -2 Im(conj(D) o X).
RMatrix phase_gradient(const CMatrix& d_conj, const CMatrix& x) {
  return -2.0 * (d_conj.conjugate().cwiseProduct(x)).imag();
}

// Pieces of one link's capacity gradient for receive analog `a` (projector
// taken on its column space) and transmit covariance factor `t` = H F.
struct LinkGrad {
  CMatrix d_rx;        // dC/dA*
  CMatrix d_tx_left;   // H^H P Y^-1, so that dC/dF* = d_tx_left * H F / s2
};

LinkGrad link_gradient(const CMatrix& a, const CMatrix& h, const CMatrix& f, double noise) {
  const CMatrix g_inv = gram_inverse(a);
  const CMatrix p = a * g_inv * a.adjoint();
  const CMatrix hf = h * f;
  const CMatrix r = hf * hf.adjoint();
  const Eigen::Index n = a.rows();
  const CMatrix y = CMatrix::Identity(n, n) + r * p / noise;
  Eigen::PartialPivLU<CMatrix> lu(y);
  LinkGrad out;
  out.d_rx = (CMatrix::Identity(n, n) - p) * lu.solve(r * a * g_inv) / noise;
  // H^H P Y^-1 = (Y^-H P H)^H
  const CMatrix yinv_h_p_h = lu.adjoint().solve(p * h);
  out.d_tx_left = yinv_h_p_h.adjoint();
  return out;
}

void check_noise(const NoiseTriple& noise) {
  for (double s : noise) {
    if (!(s > 0.0)) throw std::invalid_argument("noise power must be positive");
  }
}

}  // namespace

AnalogSet AnalogSet::random(RngStream& rng, const SystemDims& d) {
  AnalogSet a;
  a.u1 = random_phases(rng, d.n_bs, d.n_rf);
  a.u2 = random_phases(rng, d.n_bs, d.n_rf);
  a.fa = random_phases(rng, d.n_a, d.n_rfa);
  a.fb = random_phases(rng, d.n_b, d.n_rfb);
  return a;
}

AnalogSet AnalogSet::zeros(const SystemDims& d) {
  return {RMatrix::Zero(d.n_bs, d.n_rf), RMatrix::Zero(d.n_bs, d.n_rf),
          RMatrix::Zero(d.n_a, d.n_rfa), RMatrix::Zero(d.n_b, d.n_rfb)};
}

AnalogSet AnalogSet::quantized(int bits) const {
  return {quantize_phases(u1, bits), quantize_phases(u2, bits), quantize_phases(fa, bits),
          quantize_phases(fb, bits)};
}

AnalogMatrices::AnalogMatrices(const AnalogSet& p)
    : u1(unit_modulus(p.u1)), u2(unit_modulus(p.u2)), fa(unit_modulus(p.fa)),
      fb(unit_modulus(p.fb)) {}

Weights Weights::from_bits(double up, double down, double d2d) {
  const double total = up + down + d2d;
  if (!(total > 0.0)) return {};
  return {up / total, down / total, d2d / total};
}

void Weights::validate() const {
  if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0 || std::abs(w1 + w2 + w3 - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must be non-negative and sum to 1");
  }
}

CapacityTerms weighted_capacity(const AnalogSet& analog, const ChannelTriple& h,
                                const Weights& w, const NoiseTriple& noise) {
  check_noise(noise);
  const AnalogMatrices m(analog);
  CapacityTerms c;
  c.c1 = link_capacity(m.u1, h.h1, m.fa, {1.0, noise[0]});
  c.c2 = link_capacity(m.fb, h.h2, m.u2, {1.0, noise[1]});
  c.c3 = link_capacity(m.fb, h.h3, m.fa, {1.0, noise[2]});
  c.weighted = w.w1 * c.c1 + w.w2 * c.c2 + w.w3 * c.c3;
  return c;
}

PhaseGradients capacity_gradients(const AnalogSet& analog, const ChannelTriple& h,
                                  const Weights& w, const NoiseTriple& noise) {
  check_noise(noise);
  const AnalogMatrices m(analog);
  // Uplink: receive U1, transmit Fa.
  const LinkGrad up = link_gradient(m.u1, h.h1, m.fa, noise[0]);
  // Downlink: receive Fb, transmit U2.
  const LinkGrad down = link_gradient(m.fb, h.h2, m.u2, noise[1]);
  // D2D: receive Fb, transmit Fa.
  const LinkGrad d2d = link_gradient(m.fb, h.h3, m.fa, noise[2]);

  const CMatrix d_u1 = w.w1 * up.d_rx;
  const CMatrix d_u2 = (w.w2 / noise[1]) * down.d_tx_left * (h.h2 * m.u2);
  const CMatrix d_fa = (w.w1 / noise[0]) * up.d_tx_left * (h.h1 * m.fa) +
                       (w.w3 / noise[2]) * d2d.d_tx_left * (h.h3 * m.fa);
  const CMatrix d_fb = w.w2 * down.d_rx + w.w3 * d2d.d_rx;

  // Capacities are in bits, the derivation above in nats.
  return {phase_gradient(d_u1, m.u1) / kLn2, phase_gradient(d_u2, m.u2) / kLn2,
          phase_gradient(d_fa, m.fa) / kLn2, phase_gradient(d_fb, m.fb) / kLn2};
}

SurrogateState SurrogateState::initial(const SystemDims& d, double varpi) {
  if (!(varpi > 0.0)) throw std::invalid_argument("surrogate: varpi must be positive");
  SurrogateState s;
  s.varpi = varpi;
  s.f_u1 = RMatrix::Zero(d.n_bs, d.n_rf);
  s.f_u2 = RMatrix::Zero(d.n_bs, d.n_rf);
  s.f_fa = RMatrix::Zero(d.n_a, d.n_rfa);
  s.f_fb = RMatrix::Zero(d.n_b, d.n_rfb);
  return s;
}

SurrogateState surrogate_update(const SurrogateState& state, double sample_g,
                                const PhaseGradients& grads, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("surrogate_update: eps outside (0, 1]");
  SurrogateState s = state;
  const double keep = 1.0 - eps;
  s.value = keep * state.value - eps * sample_g;
  s.f_u1 = keep * state.f_u1 - eps * grads.u1;
  s.f_u2 = keep * state.f_u2 - eps * grads.u2;
  s.f_fa = keep * state.f_fa - eps * grads.fa;
  s.f_fb = keep * state.f_fb - eps * grads.fb;
  s.t = state.t + 1;
  return s;
}

AnalogSet surrogate_minimize(const SurrogateState& s, const AnalogSet& a) {
  const double k = 1.0 / (2.0 * s.varpi);
  return {a.u1 - k * s.f_u1, a.u2 - k * s.f_u2, a.fa - k * s.f_fa, a.fb - k * s.f_fb};
}

double surrogate_value(const SurrogateState& s, const AnalogSet& x0, const AnalogSet& x) {
  auto term = [&](const RMatrix& f, const RMatrix& a, const RMatrix& b) {
    const RMatrix d = b - a;
    return f.cwiseProduct(d).sum() + s.varpi * d.squaredNorm();
  };
  return s.value + term(s.f_u1, x0.u1, x.u1) + term(s.f_u2, x0.u2, x.u2) +
         term(s.f_fa, x0.fa, x.fa) + term(s.f_fb, x0.fb, x.fb);
}

void StepSchedule::validate() const {
  if (kind == ScheduleKind::kPolynomial) {
    if (!(eps_exponent > 0.5 && eps_exponent <= 1.0)) {
      throw std::invalid_argument("step schedule: eps exponent must lie in (0.5, 1]");
    }
    if (!(gamma_exponent > eps_exponent && gamma_exponent <= 1.0)) {
      throw std::invalid_argument("step schedule: gamma exponent must lie in (eps exponent, 1]");
    }
  } else {
    if (!(eps_base > 0.0 && eps_base < 1.0) || !(gamma_base > 0.0 && gamma_base < 1.0)) {
      throw std::invalid_argument("step schedule: geometric bases must lie in (0, 1)");
    }
  }
}

std::pair<double, double> step_schedule(int t, const StepSchedule& s) {
  if (t < 0) throw std::invalid_argument("step_schedule: t must be >= 0");
  s.validate();
  if (s.kind == ScheduleKind::kPolynomial) {
    const double base = 1.0 + t;
    return {std::pow(base, -s.eps_exponent), std::pow(base, -s.gamma_exponent)};
  }
  return {std::pow(s.eps_base, t), std::pow(s.gamma_base, t)};
}

SscaStep ssca_iterate(const AnalogSet& analog, const SurrogateState& state,
                      const ChannelTriple& h, const Weights& w, const NoiseTriple& noise,
                      double eps, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("ssca_iterate: gamma outside [0, 1]");
  SscaStep out;
  out.sample_objective = weighted_capacity(analog, h, w, noise).weighted;
  const PhaseGradients grads = capacity_gradients(analog, h, w, noise);
  out.state = surrogate_update(state, out.sample_objective, grads, eps);
  const AnalogSet target = surrogate_minimize(out.state, analog);
  const double keep = 1.0 - gamma;
  out.analog = {keep * analog.u1 + gamma * target.u1, keep * analog.u2 + gamma * target.u2,
                keep * analog.fa + gamma * target.fa, keep * analog.fb + gamma * target.fb};
  return out;
}

}  // namespace mecbf
