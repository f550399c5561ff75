#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace parmatch {

// Seedable generator used everywhere randomness is needed. Engine is
// mt19937_64; uniforms take the top 53 bits; normals come from the
// Box-Muller transform (not std::normal_distribution, whose output is
// implementation-defined), so streams are identical across platforms for a
// given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// rows x cols matrix of i.i.d. standard normals, filled column by column.
Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Haar-uniform orthogonal n x n matrix: QR of a Gaussian matrix with the
// sign ambiguity fixed by the diagonal of R.
Eigen::MatrixXd haar_orthogonal(Rng& rng, Eigen::Index n);

}  // namespace parmatch
