// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_RNG_HPP
#define SSFLAB_RNG_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace ssflab {

/// Seedable generator producing identical streams on every platform.
///
/// The engine is std::mt19937_64 (fully specified by the standard). Floating
/// point draws avoid std::normal_distribution, whose output is
/// implementation-defined, and instead use:
///   uniform: u = ((x >> 11) + 1) * 2^-53 in (0, 1]
///   normal:  Box-Muller on a pair of uniforms
/// Independent streams are derived from (seed, stream) with a splitmix64 mix.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();  // (0, 1]
  double normal();   // N(0, 1)
  std::complex<double> complex_normal();  // independent N(0,1) parts

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 step, used to decorrelate seed streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Random Hermitian matrix: independent standard-normal real and imaginary
/// parts, symmetrized as (A + A*)/2. No scaling applied here.
Eigen::MatrixXcd random_hermitian(Rng& rng, int dim);

/// Haar-ish random unitary from the QR factorization of a complex Gaussian
/// matrix (phases fixed by the sign of R's diagonal).
Eigen::MatrixXcd random_unitary(Rng& rng, int dim);

/// Random complex unit vector.
Eigen::VectorXcd random_unit_vector(Rng& rng, int dim);

}  // namespace ssflab

#endif  // SSFLAB_RNG_HPP
