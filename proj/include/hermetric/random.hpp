// Copyright 2026 The hermetric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "hermetric/linalg.hpp"

namespace hermetric {

// Counter-based generator: draw k of stream `seed` is splitmix64(seed, k).
// std::normal_distribution and friends are implementation-defined, so the
// distributions below are written out to keep sweeps identical everywhere.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Box-Muller
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Independent stream derived from this one.
  CounterRng split() { return CounterRng(next_u64()); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

inline ComplexMatrix random_complex_matrix(CounterRng& rng, int rank) {
  ComplexMatrix m(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

// Hermitian matrix with Gaussian entries rescaled to Frobenius norm `norm`.
inline HermitianMatrix random_hermitian(CounterRng& rng, int rank, double norm) {
  const ComplexMatrix g = random_complex_matrix(rng, rank);
  HermitianMatrix h = HermitianMatrix::hermitian_part(g);
  const double n = h.frobenius_norm();
  return n > 0.0 ? (norm / n) * h : h;
}

// exp of a random Hermitian matrix with Frobenius norm `spread`; the
// condition number is at most exp(2 spread).
inline PosDefMatrix random_posdef(CounterRng& rng, int rank, double spread) {
  return expm_hermitian(random_hermitian(rng, rank, spread));
}

// Tangent vector v at h whose identity-frame image h^-1/2 v h^-1/2 has
// Frobenius norm `norm`, i.e. ||v|| = norm in the trace metric at h.
inline HermitianMatrix random_tangent_at(CounterRng& rng, const PosDefMatrix& h, double norm) {
  return congruence(h.sqrt_matrix(), random_hermitian(rng, h.rank(), norm));
}

// Complex matrix with condition number below `max_condition`, redrawn until
// it qualifies.
inline ComplexMatrix random_invertible(CounterRng& rng, int rank, double max_condition = 1e3) {
  for (;;) {
    const ComplexMatrix m = random_complex_matrix(rng, rank);
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const RealVector s = svd.singularValues();
    if (s(rank - 1) > 0.0 && s(0) / s(rank - 1) < max_condition) return m;
  }
}

inline ComplexMatrix random_unitary(CounterRng& rng, int rank) {
  const ComplexMatrix m = random_complex_matrix(rng, rank);
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ() * ComplexMatrix::Identity(rank, rank);
}

}  // namespace hermetric
