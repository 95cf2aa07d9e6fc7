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

// Singular metrics and the metric completion, at quadrature scale.
//
// A singular section may be degenerate on a declared null set; those points
// carry zero weight and drop out of every integral. Two singular sections are
// identified when they agree on the positive-weight support.
//
// A single mesh always produces finite integrals, so divergence is detected by
// refinement: the caller supplies the same singular metric sampled on a
// family of meshes and the report fits the growth of the L2 norms against
// the refinement parameter.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hermetric/errors.hpp"
#include "hermetric/fiber.hpp"
#include "hermetric/linalg.hpp"
#include "hermetric/section.hpp"

namespace hermetric {

class SingularSection : public MeshField<std::optional<PosDefMatrix>> {
 public:
  // Points whose value is std::nullopt must be listed in `nullset`.
  SingularSection(MeshRef mesh, std::vector<std::optional<PosDefMatrix>> values, std::set<std::int64_t> nullset = {})
      : MeshField(std::move(mesh), std::move(values)), nullset_(std::move(nullset)) {
    for (size_t i = 0; i < size(); ++i) {
      if (!values_[i]) {
        if (!nullset_.count(id(i))) {
          std::ostringstream os;
          os << "point " << id(i) << " is degenerate but carries positive weight " << weight(i)
             << " (not in the declared null set)";
          throw MeasureInconsistencyError(os.str());
        }
      } else if (values_[i]->rank() != mesh_->rank()) {
        throw DimensionError("point " + std::to_string(id(i)) + ": rank does not match mesh rank");
      }
    }
  }

  explicit SingularSection(const MetricSection& h)
      : SingularSection(h.mesh(), std::vector<std::optional<PosDefMatrix>>(h.values().begin(), h.values().end())) {}

  const std::set<std::int64_t>& nullset() const { return nullset_; }

  // Weight of point i in integrals: zero on the null set.
  double effective_weight(size_t i) const { return nullset_.count(id(i)) ? 0.0 : weight(i); }
  bool in_support(size_t i) const { return !nullset_.count(id(i)); }

  // Hash of the mesh and of the values on the positive-weight support; equal
  // hashes identify sections that agree almost everywhere.
  std::uint64_t support_hash() const {
    std::uint64_t h = mesh_->hash();
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    };
    for (size_t i = 0; i < size(); ++i) {
      if (!in_support(i)) continue;
      const ComplexMatrix& m = values_[i]->matrix();
      for (Eigen::Index k = 0; k < m.size(); ++k) {
        mix(std::bit_cast<std::uint64_t>(m(k).real()));
        mix(std::bit_cast<std::uint64_t>(m(k).imag()));
      }
    }
    return h;
  }

 private:
  std::set<std::int64_t> nullset_;
};

inline constexpr double kGrowthExponentLimit = 0.05;

struct IntegrabilityReport {
  // Quadrature L2 norms of log(lambda_min), log(lambda_max) and log det of
  // H = h0^-1 sigma, and of the pointwise distance to h0.
  double l2_log_lambda_min = 0.0;
  double l2_log_lambda_max = 0.0;
  double l2_log_det = 0.0;
  double l2_distance = 0.0;
  bool is_l2 = false;
  // Slope of log(norm) against log(level) across a refinement family.
  std::optional<double> refinement_trend;
  std::vector<double> levels;
  std::vector<double> level_norms;  // max(l2_log_lambda_min, l2_log_lambda_max) per level
};

inline IntegrabilityReport integrability_report(const SingularSection& sigma, const MetricSection& h0) {
  detail::require_same_mesh(sigma.mesh(), h0.mesh(), "integrability_report");
  const QuadratureMesh& mesh = *sigma.mesh();
  double smin = 0.0, smax = 0.0, sdet = 0.0, sdist = 0.0;
  for (size_t i = 0; i < sigma.size(); ++i) {
    const double w = sigma.effective_weight(i);
    if (w == 0.0) continue;
    const RealVector l = detail::annotate_point(mesh.point(i).id, [&] { return relative_spectrum(h0[i], *sigma[i]); });
    const RealVector logl = l.array().log();
    const double lo = logl(0);
    const double hi = logl(logl.size() - 1);
    const double det = logl.sum();
    const double a = mesh.point(i).alpha;
    smin += w * lo * lo;
    smax += w * hi * hi;
    sdet += w * det * det;
    sdist += w * std::max(0.0, logl.squaredNorm() + a * det * det);
  }
  IntegrabilityReport rep;
  rep.l2_log_lambda_min = std::sqrt(smin);
  rep.l2_log_lambda_max = std::sqrt(smax);
  rep.l2_log_det = std::sqrt(sdet);
  rep.l2_distance = std::sqrt(sdist);
  rep.is_l2 = std::isfinite(rep.l2_log_lambda_min) && std::isfinite(rep.l2_log_lambda_max);
  return rep;
}

struct RefinementLevel {
  double level = 0.0;  // refinement parameter, e.g. cell count; increasing
  SingularSection sigma;
  MetricSection h0;
};

// Report on the finest level, plus a least-squares fit of
// log(max(||log lambda_min||, ||log lambda_max||)) against log(level).
// is_l2 additionally requires the fitted exponent to stay below 0.05.
inline IntegrabilityReport integrability_report(const std::vector<RefinementLevel>& family) {
  if (family.size() < 2) throw PreconditionError("refinement family needs at least two levels");
  std::vector<double> xs, ys;
  IntegrabilityReport last;
  for (const RefinementLevel& lv : family) {
    if (!(lv.level > 0.0)) throw PreconditionError("refinement levels must be positive");
    if (!xs.empty() && !(std::log(lv.level) > xs.back())) {
      throw PreconditionError("refinement levels must be strictly increasing");
    }
    last = integrability_report(lv.sigma, lv.h0);
    const double norm = std::max(last.l2_log_lambda_min, last.l2_log_lambda_max);
    xs.push_back(std::log(lv.level));
    ys.push_back(norm);
  }
  IntegrabilityReport rep = last;
  for (size_t i = 0; i < xs.size(); ++i) {
    rep.levels.push_back(family[i].level);
    rep.level_norms.push_back(ys[i]);
  }
  double slope = 0.0;
  if (*std::max_element(ys.begin(), ys.end()) > 0.0) {
    const double floor = 1e-300;
    const size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
      mx += xs[i];
      my += std::log(std::max(ys[i], floor));
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double dx = xs[i] - mx;
      sxy += dx * (std::log(std::max(ys[i], floor)) - my);
      sxx += dx * dx;
    }
    slope = sxy / sxx;
  }
  rep.refinement_trend = slope;
  rep.is_l2 = rep.is_l2 && slope < kGrowthExponentLimit;
  return rep;
}

struct CauchyReport {
  double factor = 0.0;                  // sqrt(r (1 + alpha r))
  std::vector<double> step_distances;   // d(h_k, h_{k+1})
  std::vector<double> partial_sums;     // sum_{j<=k} d(h_j, h_{j+1})
  std::vector<double> limit_distances;  // d(h_k, h_limit), pointwise formula
  std::vector<double> limit_formula;    // factor * ||f_k - f_limit||_2
  double max_relative_mismatch = 0.0;   // between the two columns above
};

inline constexpr double kCauchyRelativeFloor = 1e-5;

// Follows h_k = e^{f_k} h0 towards h_limit = e^{f_limit} h0 in the L2
// distance. The limit may be a non-smooth (e.g. unbounded) profile.
inline CauchyReport cauchy_experiment(const MetricSection& h0, const std::vector<ScalarField>& f_sequence,
                                      const ScalarField& f_limit) {
  const std::optional<double> alpha = h0.mesh()->constant_alpha();
  if (!alpha) throw PreconditionError("cauchy_experiment: requires a constant alpha over the mesh");
  CauchyReport rep;
  const double r = h0.mesh()->rank();
  rep.factor = std::sqrt(r * (1.0 + *alpha * r));
  const MetricSection limit = conformal_scale(h0, f_limit);
  std::vector<MetricSection> hs;
  hs.reserve(f_sequence.size());
  for (const ScalarField& f : f_sequence) hs.push_back(conformal_scale(h0, f));

  double partial = 0.0;
  for (size_t k = 0; k < hs.size(); ++k) {
    const double dl = section_distance(hs[k], limit);
    const double formula = conformal_distance(h0, f_sequence[k], f_limit);
    rep.limit_distances.push_back(dl);
    rep.limit_formula.push_back(formula);
    // The computed distance carries an absolute error of order eps * |f|, so
    // distances below 1e-5 of the input scale cannot be resolved to 1e-10
    // relative accuracy. Below that floor the mismatch is taken relative to
    // the floor, which also covers a sequence that reaches its limit exactly.
    const double floor = kCauchyRelativeFloor * rep.factor * (f_sequence[k].l2_norm() + f_limit.l2_norm());
    const double scale = std::max({std::abs(formula), floor, 1e-300});
    rep.max_relative_mismatch = std::max(rep.max_relative_mismatch, std::abs(dl - formula) / scale);
    if (k + 1 < hs.size()) {
      const double step = section_distance(hs[k], hs[k + 1]);
      partial += step;
      rep.step_distances.push_back(step);
      rep.partial_sums.push_back(partial);
    }
  }
  return rep;
}

struct Cat0Report {
  double d_pq = 0.0, d_pr = 0.0, d_qr = 0.0;
  double d_pm = 0.0;  // p to the midpoint of [q, r]
  // 1/2 d(p,q)^2 + 1/2 d(p,r)^2 - 1/4 d(q,r)^2 - d(p,m)^2; >= 0 in a CAT(0) space.
  double cn_slack = 0.0;
  // Comparison distance between the points at s on [p,q] and t on [p,r],
  // from the planar triangle with the same side lengths, minus the actual
  // distance; >= 0 in a CAT(0) space.
  double comparison_slack = 0.0;
  double comparison_distance = 0.0;
  double actual_distance = 0.0;
  bool degenerate = false;  // two vertices within 1e-12

  double slack() const { return std::min(cn_slack, comparison_slack); }
};

inline Cat0Report cat0_check(const MetricSection& p, const MetricSection& q, const MetricSection& r, double s,
                             double t) {
  if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0)) {
    throw PreconditionError("cat0_check: s and t must lie in [0, 1]");
  }
  detail::require_same_mesh(p.mesh(), q.mesh(), "cat0_check");
  detail::require_same_mesh(p.mesh(), r.mesh(), "cat0_check");
  Cat0Report rep;
  rep.d_pq = section_distance(p, q);
  rep.d_pr = section_distance(p, r);
  rep.d_qr = section_distance(q, r);
  rep.degenerate = rep.d_pq < 1e-12 || rep.d_pr < 1e-12 || rep.d_qr < 1e-12;

  const MetricSection m = section_geodesic(q, r, 0.5);
  rep.d_pm = section_distance(p, m);
  rep.cn_slack = 0.5 * rep.d_pq * rep.d_pq + 0.5 * rep.d_pr * rep.d_pr - 0.25 * rep.d_qr * rep.d_qr -
                 rep.d_pm * rep.d_pm;

  // Planar triangle p = 0, |q| = d_pq, |r| = d_pr, |q - r| = d_qr:
  // |s q - t r|^2 = s^2 a^2 + t^2 b^2 - s t (a^2 + b^2 - c^2).
  const double a2 = rep.d_pq * rep.d_pq, b2 = rep.d_pr * rep.d_pr, c2 = rep.d_qr * rep.d_qr;
  const double comp2 = s * s * a2 + t * t * b2 - s * t * (a2 + b2 - c2);
  rep.comparison_distance = std::sqrt(std::max(0.0, comp2));
  const MetricSection x = section_geodesic(p, q, s);
  const MetricSection y = section_geodesic(p, r, t);
  rep.actual_distance = section_distance(x, y);
  rep.comparison_slack = rep.comparison_distance - rep.actual_distance;
  return rep;
}

}  // namespace hermetric
