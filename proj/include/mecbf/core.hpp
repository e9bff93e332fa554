// Shared types for the mmWave D2D edge-computing simulator: dimensions,
// matrix aliases, unit conversions, seeded random streams and phase
// quantization.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mecbf {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Antenna, RF-chain and stream counts of the BS and the two users.
struct SystemDims {
  int n_bs = 64;  // N
  int n_a = 8;    // user A antennas
  int n_b = 8;    // user B antennas
  int n_rf = 4;   // BS RF chains
  int n_rfa = 2;
  int n_rfb = 2;
  int d1 = 2;  // uplink streams
  int d2 = 2;  // downlink streams
  int d3 = 2;  // D2D streams

  /// Builds dims with stream counts set by the min rule.
  static SystemDims with_streams(int n_bs, int n_a, int n_b, int n_rf,
                                 int n_rfa, int n_rfb);

  bool operator==(const SystemDims&) const = default;
};

/// Returns every violated dimension invariant; empty means valid.
std::vector<std::string> validate_dims(const SystemDims& dims);

enum class DbMode { kPowerRatio, kMilliwatt };

/// dB -> linear ratio, or dBm -> watt.
double db_to_linear(double x_db, DbMode mode);
/// Inverse of db_to_linear. Requires x > 0.
double linear_to_db(double x, DbMode mode);

/// Deterministic random stream keyed by (seed, stream id). Child streams are
/// derived by hashing additional ids, so every draw in an experiment can be
/// addressed by (frame, slot, purpose) independently of call order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Stream for a sub-purpose; independent of how much this stream was used.
  RngStream derive(std::uint64_t a, std::uint64_t b = 0,
                   std::uint64_t c = 0) const;

  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Purpose tags used when deriving streams.
enum class StreamPurpose : std::uint64_t {
  kAngles = 1,
  kGains = 2,
  kAnalogInit = 3,
  kSsca = 4,
  kEvaluation = 5,
  kTest = 99,
};

/// Maps an angle to the nearest point of the uniform 2^bits grid on [0, 2pi).
double quantize_phase(double theta, int bits);
RMatrix quantize_phases(const RMatrix& theta, int bits);

/// Wraps an angle difference into (-pi, pi].
double wrap_angle(double x);

/// Entrywise e^{j theta}.
CMatrix unit_modulus(const RMatrix& theta);

/// Thrown when a Gram matrix that must be inverted is singular.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mecbf
