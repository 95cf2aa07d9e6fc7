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

// Brute-force fiber distance: the length of a piecewise-linear path
// p = x_0, ..., x_N = q, shortened by coordinate descent over the interior
// nodes. It uses nothing but the metric tensor, so it checks the closed-form
// distance without sharing any code path with it.
//
// Each straight segment lies in the positive cone and its Riemannian length is
// integrated with 3-point Gauss-Legendre quadrature, so the result is the
// length of an actual curve and bounds the true distance from above (up to
// the quadrature error, ~1e-12 at the step sizes used here).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <vector>

#include "hermetric/errors.hpp"
#include "hermetric/fiber.hpp"
#include "hermetric/linalg.hpp"
#include "hermetric/random.hpp"

namespace hermetric {

struct OracleOptions {
  int segments = 64;
  int iterations = 500;
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::array<double, 3> kGaussNodes = {0.11270166537925831148, 0.5,
                                                     0.88729833462074168852};
inline constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Eigenvalue floor used when projecting the initial straight path.
inline constexpr double kOracleClamp = 1e-10;

// A run of this many consecutive rejected moves at one node, all caused by
// leaving the positive cone, is reported as an oracle failure.
inline constexpr int kMaxConeRejections = 60;

// A level ends after this many consecutive sweeps with no relative gain
// above 1e-14; failing steps halve per sweep, so by then they are ~1e-9 of
// their size at the last gain.
inline constexpr int kMaxStalledSweeps = 30;

template <typename Mat>
class PathOracle {
 public:
  PathOracle(const PosDefMatrix& p, const PosDefMatrix& q, double alpha, const OracleOptions& opt)
      : rank_(p.rank()), alpha_(alpha), opt_(opt), rng_(opt.seed) {
    // Coarsest level: halve the segment count while it stays >= 8.
    int n = opt_.segments;
    while (n % 2 == 0 && n / 2 >= 8) n /= 2;
    nodes_.resize(static_cast<size_t>(n + 1));
    const ComplexMatrix a = p.matrix();
    const ComplexMatrix b = q.matrix();
    for (int k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      ComplexMatrix x = (1.0 - t) * a + t * b;
      if (k != 0 && k != n) x = clamp(x);
      nodes_[static_cast<size_t>(k)] = x;
    }
    for (const HermitianMatrix& e : hermitian_basis(rank_)) basis_.push_back(e.matrix());
  }

  double run() {
    for (;;) {
      descend();
      if (segments() >= opt_.segments) break;
      refine();
    }
    // Re-sum in node order so the result does not depend on update history.
    double length = 0.0;
    for (int k = 0; k < segments(); ++k) length += segment_length(nodes_[idx(k)], nodes_[idx(k + 1)]);
    return length;
  }

 private:
  int segments() const { return static_cast<int>(nodes_.size()) - 1; }

  // Split every segment at its matrix-space midpoint.
  void refine() {
    std::vector<Mat> finer;
    finer.reserve(2 * nodes_.size() - 1);
    for (size_t k = 0; k + 1 < nodes_.size(); ++k) {
      finer.push_back(nodes_[k]);
      finer.push_back(0.5 * (nodes_[k] + nodes_[k + 1]));
    }
    finer.push_back(nodes_.back());
    nodes_ = std::move(finer);
  }

  void descend() {
    const int n = segments();
    std::vector<double> seg(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) seg[idx(k)] = segment_length(nodes_[idx(k)], nodes_[idx(k + 1)]);
    double total = std::accumulate(seg.begin(), seg.end(), 0.0);
    if (total == 0.0) return;

    std::vector<double> step(static_cast<size_t>(n + 1), 0.5 * total / n);
    std::vector<int> order(static_cast<size_t>(n - 1));
    std::iota(order.begin(), order.end(), 1);
    // Length is quadratic in node displacement near a minimizer, so steps
    // below this change the total by ~1e-16 relative.
    const double step_floor = 1e-8 * total / n;

    int stalled = 0;
    for (int it = 0; it < opt_.iterations; ++it) {
      shuffle(order);
      bool any_active = false;
      for (int k : order) {
        double& s = step[idx(k)];
        if (s < step_floor) continue;
        any_active = true;
        bool improved = false;
        int cone_rejections = 0;
        for (const Mat& e : basis_) {
          for (double sign : {1.0, -1.0}) {
            Mat trial = nodes_[idx(k)] + (sign * s) * e;
            if (!positive_definite(trial)) {
              ++cone_rejections;
              continue;
            }
            const double left = segment_length(nodes_[idx(k - 1)], trial);
            const double right = segment_length(trial, nodes_[idx(k + 1)]);
            if (left + right < seg[idx(k - 1)] + seg[idx(k)]) {
              nodes_[idx(k)] = trial;
              seg[idx(k - 1)] = left;
              seg[idx(k)] = right;
              improved = true;
              break;
            }
          }
        }
        if (!improved && cone_rejections == 2 * static_cast<int>(basis_.size())) {
          if (++cone_streak_ > kMaxConeRejections) {
            std::ostringstream os;
            os << "distance oracle: node " << k << " cannot move without leaving the positive cone";
            throw OracleFailure(os.str());
          }
        } else {
          cone_streak_ = 0;
        }
        s = improved ? std::min(1.5 * s, 0.5 * total) : 0.5 * s;
      }
      const double updated = std::accumulate(seg.begin(), seg.end(), 0.0);
      stalled = (total - updated <= 1e-14 * total) ? stalled + 1 : 0;
      total = updated;
      if (!any_active || stalled >= kMaxStalledSweeps) break;
    }
  }

  static size_t idx(int k) { return static_cast<size_t>(k); }

  void shuffle(std::vector<int>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<size_t>(rng_.next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

  Mat clamp(const ComplexMatrix& x) const {
    const EigenDecomposition e = eig_hermitian(HermitianMatrix::hermitian_part(x));
    return e.apply([](double l) { return std::max(l, kOracleClamp); });
  }

  static bool positive_definite(const Mat& x) {
    Eigen::LLT<Mat> llt(x);
    return llt.info() == Eigen::Success;
  }

  // sqrt of tr(x^-1 d x^-1 d) + alpha tr(x^-1 d)^2
  double speed(const Mat& x, const Mat& d) const {
    const Mat m = x.inverse() * d;
    const double tr = m.trace().real();
    const double sq = (m * m).trace().real() + alpha_ * tr * tr;
    return std::sqrt(std::max(0.0, sq));
  }

  double segment_length(const Mat& a, const Mat& b) const {
    const Mat d = b - a;
    double len = 0.0;
    for (size_t i = 0; i < kGaussNodes.size(); ++i) {
      const double s = kGaussNodes[i];
      len += kGaussWeights[i] * speed((1.0 - s) * a + s * b, d);
    }
    return len;
  }

  int rank_;
  double alpha_;
  OracleOptions opt_;
  CounterRng rng_;
  std::vector<Mat> nodes_;
  std::vector<Mat> basis_;
  int cone_streak_ = 0;
};

}  // namespace detail

inline double distance_oracle(const PosDefMatrix& p, const PosDefMatrix& q, const AlphaParam& alpha,
                              const OracleOptions& options = {}) {
  detail::check_same_rank(p.rank(), q.rank(), "distance_oracle");
  detail::check_alpha(alpha, p.rank());
  if (options.segments < 8) throw PreconditionError("distance_oracle: need at least 8 segments");
  if (options.iterations < 0) throw PreconditionError("distance_oracle: iterations must be >= 0");
  switch (p.rank()) {
    case 2:
      return detail::PathOracle<Eigen::Matrix2cd>(p, q, alpha.value(), options).run();
    case 3:
      return detail::PathOracle<Eigen::Matrix3cd>(p, q, alpha.value(), options).run();
    default:
      return detail::PathOracle<ComplexMatrix>(p, q, alpha.value(), options).run();
  }
}

inline double distance_oracle(const PosDefMatrix& p, const PosDefMatrix& q, const AlphaParam& alpha,
                              int segments, int iterations, std::uint64_t seed) {
  return distance_oracle(p, q, alpha, OracleOptions{segments, iterations, seed});
}

}  // namespace hermetric
