#include "mecbf/core.hpp"

#include <algorithm>
#include <cmath>

namespace mecbf {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SystemDims SystemDims::with_streams(int n_bs, int n_a, int n_b, int n_rf,
                                    int n_rfa, int n_rfb) {
  SystemDims d;
  d.n_bs = n_bs;
  d.n_a = n_a;
  d.n_b = n_b;
  d.n_rf = n_rf;
  d.n_rfa = n_rfa;
  d.n_rfb = n_rfb;
  d.d1 = std::min(n_rfa, n_rf);
  d.d2 = std::min(n_rf, n_rfb);
  d.d3 = std::min(n_rfa, n_rfb);
  return d;
}

std::vector<std::string> validate_dims(const SystemDims& d) {
  std::vector<std::string> v;
  const std::pair<int, const char*> counts[] = {
      {d.n_bs, "N"},   {d.n_a, "N_a"},   {d.n_b, "N_b"}, {d.n_rf, "N_rf"},
      {d.n_rfa, "N_rfa"}, {d.n_rfb, "N_rfb"}, {d.d1, "d1"}, {d.d2, "d2"},
      {d.d3, "d3"}};
  for (const auto& [value, name] : counts) {
    if (value <= 0) v.push_back(std::string(name) + " > 0");
  }
  if (d.n_rf > d.n_bs) v.emplace_back("N_rf <= N");
  if (d.n_rfa > d.n_a) v.emplace_back("N_rfa <= N_a");
  if (d.n_rfb > d.n_b) v.emplace_back("N_rfb <= N_b");
  if (d.d1 != std::min(d.n_rfa, d.n_rf)) v.emplace_back("d1 = min(N_rfa, N_rf)");
  if (d.d2 != std::min(d.n_rf, d.n_rfb)) v.emplace_back("d2 = min(N_rf, N_rfb)");
  if (d.d3 != std::min(d.n_rfa, d.n_rfb)) v.emplace_back("d3 = min(N_rfa, N_rfb)");
  return v;
}

double db_to_linear(double x_db, DbMode mode) {
  if (!std::isfinite(x_db)) throw std::invalid_argument("db_to_linear: non-finite input");
  const double ratio = std::pow(10.0, x_db / 10.0);
  return mode == DbMode::kMilliwatt ? ratio * 1e-3 : ratio;
}

double linear_to_db(double x, DbMode mode) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("linear_to_db: input must be positive and finite");
  }
  const double ratio = mode == DbMode::kMilliwatt ? x * 1e3 : x;
  return 10.0 * std::log10(ratio);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  std::uint64_t id = splitmix64(stream_id_ ^ 0xa0761d6478bd642fULL);
  id = splitmix64(id ^ a);
  id = splitmix64(id ^ (b + 0xe7037ed1a0b428dbULL));
  id = splitmix64(id ^ (c + 0x8ebc6af09c88c6e3ULL));
  return RngStream(seed_, id);
}

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::normal(double mean, double stddev) {
  return std::normal_distribution<double>(mean, stddev)(engine_);
}

Complex RngStream::complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal(0.0, s);
  const double im = normal(0.0, s);
  return {re, im};
}

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double quantize_phase(double theta, int bits) {
  if (bits < 1) throw std::invalid_argument("quantize_phases: bits must be >= 1");
  if (bits > 52) throw std::invalid_argument("quantize_phases: bits too large");
  const double levels = std::ldexp(1.0, bits);
  const double step = 2.0 * kPi / levels;
  double k = std::nearbyint(theta / step);
  k = std::fmod(k, levels);
  if (k < 0) k += levels;
  return k * step;
}

RMatrix quantize_phases(const RMatrix& theta, int bits) {
  if (bits < 1) throw std::invalid_argument("quantize_phases: bits must be >= 1");
  return theta.unaryExpr([bits](double t) { return quantize_phase(t, bits); });
}

CMatrix unit_modulus(const RMatrix& theta) {
  return theta.unaryExpr([](double t) { return std::polar(1.0, t); });
}

}  // namespace mecbf
