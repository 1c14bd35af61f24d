#pragma once

// All randomness: seeded streams, Gaussian smoothing, Haar rotations and the phase-I
// parameter formulas.

#include "shadowlp/types.hpp"

#include <cstdint>
#include <random>

namespace shadowlp {

/// Purpose tags for stream derivation. A stream for (seed, tag, index) is independent of every
/// other (tag, index) pair, so results never depend on evaluation order or thread count.
enum class StreamTag : std::uint64_t {
  Instance = 1,
  Trial = 2,
  Phase1Iteration = 3,
  Haar = 4,
  Smoothing = 5,
  Objective = 6,
  Plane = 7,
  Probe = 8,
  Centers = 9,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the stream derived from (seed, tag, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return mix64(mix64(seed ^ mix64(static_cast<std::uint64_t>(tag))) + index);
}

/// Inverse of the standard normal CDF.
double normal_quantile(double p);

/// A 64-bit Mersenne Twister stream. Uniforms take the top 53 bits; Gaussians use the inverse
/// CDF of one uniform each, so a given seed produces the same doubles on every platform with an
/// IEEE libm.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RandomStream derive(StreamTag tag, std::uint64_t index = 0) const {
    return RandomStream(derive_seed(seed_, tag, index));
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double gaussian() { return normal_quantile(uniform()); }

  VectorXd gaussian_vector(Index d) {
    VectorXd v(d);
    for (Index i = 0; i < d; ++i) v(i) = gaussian();
    return v;
  }

  MatrixXd gaussian_matrix(Index rows, Index cols) {
    MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = gaussian();
    return m;
  }

  /// Uniform direction on the unit sphere.
  VectorXd unit_vector(Index d);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Haar-distributed orthogonal d x d matrix: QR of a Gaussian matrix with the signs of Q's
/// columns fixed so that R has a positive diagonal.
MatrixXd haar_rotation(Index d, RandomStream& rng);

// --- phase-I parameters (natural logarithms) --------------------------------

inline constexpr double kPhase1C1 = 1.0 / 300.0;

/// Radius of the added regular simplex: c1 / sqrt(log d).
double ell(Index d);

/// Smoothing of the added vertices: min(1 / (6 sqrt(d log n)), c1 / (d^{3/2} log d)).
double sigma1(Index d, Index n);

/// Discretized magnitude e^{ceil(log M)}.
double m0(double magnitude);

/// Largest standard deviation allowed after normalization: 1 / (6 sqrt(d log n)).
double sigma_cap(Index d, Index n);

// --- smoothed instances -----------------------------------------------------

/// Centers of a smoothed LP and its perturbation size.
struct SmoothedSpec {
  MatrixXd centers_A;  // n x d
  VectorXd centers_b;  // n
  VectorXd objective;  // d; empty selects e_1
  double sigma = 0;
  std::uint64_t seed = 0;

  Index n() const { return centers_A.rows(); }
  Index d() const { return centers_A.cols(); }
};

/// Scales (centers, sigma) so that max_i |(a_i, b_i)| = 1, then scales further if needed so that
/// sigma <= sigma_cap(d, n).
SmoothedSpec normalize(const SmoothedSpec& spec);

/// Draws (A, b): every coordinate Gaussian with its center and standard deviation sigma.
LP sample_instance(const SmoothedSpec& spec, RandomStream& rng);

}  // namespace shadowlp
