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

// Seeded property sweeps: invariants, cat0, oracle, appendix. Each property
// records its worst observed value next to the bound it is held to, so a
// failing report says by how much and against what.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hermetric/completion.hpp"
#include "hermetric/fiber.hpp"
#include "hermetric/linalg.hpp"
#include "hermetric/oracle.hpp"
#include "hermetric/random.hpp"
#include "hermetric/section.hpp"

namespace hermetric {

struct PropertyResult {
  std::string name;
  // kUpper: worst = max observed, must be <= bound. kLower: worst = min
  // observed, must be >= bound.
  enum class Kind { kUpper, kLower } kind = Kind::kUpper;
  double worst = 0.0;
  double bound = 0.0;
  int evaluations = 0;

  bool pass() const { return kind == Kind::kUpper ? worst <= bound : worst >= bound; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<PropertyResult> properties;

  bool pass() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.pass(); });
  }
};

class PropertyTracker {
 public:
  PropertyTracker(std::string name, PropertyResult::Kind kind, double bound) {
    r_.name = std::move(name);
    r_.kind = kind;
    r_.bound = bound;
    r_.worst = kind == PropertyResult::Kind::kUpper ? -std::numeric_limits<double>::infinity()
                                                    : std::numeric_limits<double>::infinity();
  }
  static PropertyTracker at_most(std::string name, double bound) {
    return PropertyTracker(std::move(name), PropertyResult::Kind::kUpper, bound);
  }
  static PropertyTracker at_least(std::string name, double bound) {
    return PropertyTracker(std::move(name), PropertyResult::Kind::kLower, bound);
  }

  void observe(double v) {
    ++r_.evaluations;
    // NaN is always a failure.
    if (std::isnan(v)) v = r_.kind == PropertyResult::Kind::kUpper ? std::numeric_limits<double>::infinity()
                                                                   : -std::numeric_limits<double>::infinity();
    r_.worst = r_.kind == PropertyResult::Kind::kUpper ? std::max(r_.worst, v) : std::min(r_.worst, v);
  }
  const PropertyResult& result() const { return r_; }

 private:
  PropertyResult r_;
};

inline double relative_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Random section on a mesh of `points` points with random weights.
inline MetricSection random_section(CounterRng& rng, const MeshRef& mesh, double spread) {
  std::vector<PosDefMatrix> values;
  for (size_t i = 0; i < mesh->size(); ++i) values.push_back(random_posdef(rng, mesh->rank(), spread));
  return MetricSection(mesh, std::move(values));
}

inline TangentSection random_tangent(CounterRng& rng, const MeshRef& mesh, double norm) {
  std::vector<HermitianMatrix> values;
  for (size_t i = 0; i < mesh->size(); ++i) values.push_back(random_hermitian(rng, mesh->rank(), norm));
  return TangentSection(mesh, std::move(values));
}

inline MeshRef random_mesh(CounterRng& rng, int rank, int points, double alpha) {
  std::vector<MeshPoint> pts;
  for (int i = 0; i < points; ++i) pts.push_back({i, rng.uniform(0.1, 1.0), alpha});
  return QuadratureMesh::make(rank, std::move(pts));
}

// alpha strictly inside (-1/r, 2], including values close to -1/r.
inline double random_alpha(CounterRng& rng, int rank) {
  const double lo = -1.0 / rank;
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return lo + 1e-3;
    case 1:
      return 0.0;
    default:
      return rng.uniform(lo + 1e-3, 2.0);
  }
}

inline SuiteReport run_invariants_suite(std::uint64_t seed, int samples) {
  CounterRng rng(seed);
  auto positivity = PropertyTracker::at_least("positivity_bound_slack", -1e-10);
  auto definiteness = PropertyTracker::at_most("zero_norm_implies_zero_vector", 1e-8);
  auto congruence_inv = PropertyTracker::at_most("congruence_invariance_rel", 1e-9);
  auto scaling = PropertyTracker::at_most("scaling_invariance_rel", 1e-12);
  auto affinity = PropertyTracker::at_most("geodesic_affinity_rel", 1e-9);
  auto roundtrip = PropertyTracker::at_most("exp_log_roundtrip_rel", 1e-8);
  auto bianchi = PropertyTracker::at_most("first_bianchi_residual", 1e-12);
  auto antisym = PropertyTracker::at_most("curvature_antisymmetry_residual", 1e-12);
  auto sectional = PropertyTracker::at_most("sectional_curvature_max", 1e-12);
  auto reciprocity = PropertyTracker::at_most("relative_spectrum_reciprocity_rel", 1e-9);
  auto triangle = PropertyTracker::at_least("section_triangle_slack", -1e-10);
  auto gauge_inner = PropertyTracker::at_most("gauge_inner_invariance", 1e-10);
  auto gauge_dist = PropertyTracker::at_most("gauge_distance_invariance_rel", 1e-9);
  auto theta = PropertyTracker::at_least("theta_bound_slack", -1e-10);
  auto conformal = PropertyTracker::at_most("conformal_identity_rel", 1e-10);

  for (int n = 0; n < samples; ++n) {
    const int r = rng.uniform_int(2, 4);
    const AlphaParam alpha(random_alpha(rng, r), r);
    const PosDefMatrix h = random_posdef(rng, r, 1.0);
    const PosDefMatrix q = random_posdef(rng, r, 1.0);
    const HermitianMatrix v = random_hermitian(rng, r, rng.uniform(0.1, 3.0));
    const HermitianMatrix w = random_hermitian(rng, r, 1.0);
    const HermitianMatrix u = random_hermitian(rng, r, 1.0);

    const double vv = alpha_inner(h, v, v, alpha);
    const ComplexMatrix s = h.inv_sqrt_matrix();
    const double tr = congruence(s, v).trace();
    positivity.observe(vv - (1.0 / r + alpha.value()) * tr * tr);
    if (vv <= 0.0) definiteness.observe(v.frobenius_norm());
    else definiteness.observe(0.0);

    const ComplexMatrix phi = random_invertible(rng, r, 1e2);
    const PosDefMatrix hp(HermitianMatrix::hermitian_part(phi.adjoint() * h.matrix() * phi));
    const PosDefMatrix qp(HermitianMatrix::hermitian_part(phi.adjoint() * q.matrix() * phi));
    const double d = fiber_distance(h, q, alpha);
    congruence_inv.observe(relative_gap(fiber_distance(hp, qp, alpha), d));
    const double c = std::exp(rng.uniform(-3.0, 3.0));
    scaling.observe(relative_gap(fiber_distance(h.scaled(c), q.scaled(c), alpha), d));

    const FiberGeodesic g(h, log_map(h, q));
    const double s0 = rng.uniform(-0.5, 1.5), s1 = rng.uniform(-0.5, 1.5);
    if (std::abs(s1 - s0) > 1e-3) {
      affinity.observe(relative_gap(fiber_distance(g(s0), g(s1), alpha), std::abs(s1 - s0) * d));
    }

    // Tangent norms are measured at h, where the round trip is conditioned
    // by exp(2 ||h^-1/2 v h^-1/2||).
    const HermitianMatrix big = random_tangent_at(rng, h, rng.uniform(0.0, 10.0));
    const HermitianMatrix back = log_map(h, FiberGeodesic(h, big)(1.0));
    roundtrip.observe(congruence(s, back - big).frobenius_norm() /
                      std::max(congruence(s, big).frobenius_norm(), 1.0));

    const HermitianMatrix b = curvature_tensor(h, u, v, w) + curvature_tensor(h, v, w, u) + curvature_tensor(h, w, u, v);
    bianchi.observe(b.frobenius_norm());
    antisym.observe((curvature_tensor(h, u, v, w) + curvature_tensor(h, v, u, w)).frobenius_norm());
    sectional.observe(sectional_curvature(h, u, v, alpha).value);

    const RealVector pq = relative_spectrum(h, q);
    const RealVector qp2 = relative_spectrum(q, h);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < pq.size(); ++i) worst = std::max(worst, relative_gap(pq(i), 1.0 / qp2(pq.size() - 1 - i)));
    reciprocity.observe(worst);

    // Section-level properties on small random meshes.
    const int points = rng.uniform_int(1, 12);
    const MeshRef mesh = random_mesh(rng, r, points, alpha.value());
    const MetricSection h1 = random_section(rng, mesh, 1.0);
    const MetricSection h2 = random_section(rng, mesh, 1.0);
    const MetricSection h3 = random_section(rng, mesh, 1.0);
    const double d12 = section_distance(h1, h2), d23 = section_distance(h2, h3), d13 = section_distance(h1, h3);
    triangle.observe(d12 + d23 - d13);

    std::vector<ComplexMatrix> phis;
    for (int i = 0; i < points; ++i) phis.push_back(random_invertible(rng, r, 1e2));
    const GaugeTransform gt(mesh, phis);
    const TangentSection tv = random_tangent(rng, mesh, 1.0), tw = random_tangent(rng, mesh, 1.0);
    const double inner = l2_inner(h1, tv, tw);
    const double inner_g = l2_inner(gauge_apply(gt, h1), gauge_apply(gt, tv), gauge_apply(gt, tw));
    gauge_inner.observe(std::abs(inner_g - inner) / (1.0 + std::abs(inner)));
    gauge_dist.observe(relative_gap(section_distance(gauge_apply(gt, h1), gauge_apply(gt, h2)), d12));

    theta.observe(d12 - theta_metric(h1, h2) / std::sqrt(mesh->volume()));

    std::vector<double> fv, gv;
    for (int i = 0; i < points; ++i) {
      fv.push_back(rng.uniform(-2.0, 2.0));
      gv.push_back(rng.uniform(-2.0, 2.0));
    }
    const ScalarField f(mesh, fv), gg(mesh, gv);
    const double closed = conformal_distance(h1, f, gg);
    const double direct = section_distance(conformal_scale(h1, f), conformal_scale(h1, gg));
    conformal.observe(relative_gap(direct, closed));
  }

  SuiteReport rep{"invariants", seed, samples, {}};
  for (const auto* t : {&positivity, &definiteness, &congruence_inv, &scaling, &affinity, &roundtrip, &bianchi,
                        &antisym, &sectional, &reciprocity, &triangle, &gauge_inner, &gauge_dist, &theta, &conformal}) {
    rep.properties.push_back(t->result());
  }
  return rep;
}

// Random triangle (p, q, r) of sections. With `commuting` all values are
// diagonal, so the triangle lies in a flat.
inline std::vector<MetricSection> random_triangle(CounterRng& rng, int rank, int points, double alpha, bool commuting) {
  const MeshRef mesh = random_mesh(rng, rank, points, alpha);
  std::vector<MetricSection> tri;
  for (int k = 0; k < 3; ++k) {
    if (!commuting) {
      tri.push_back(random_section(rng, mesh, 1.5));
      continue;
    }
    std::vector<PosDefMatrix> values;
    for (int i = 0; i < points; ++i) {
      std::vector<double> d;
      for (int j = 0; j < rank; ++j) d.push_back(std::exp(rng.uniform(-1.5, 1.5)));
      values.push_back(PosDefMatrix::diagonal(d));
    }
    tri.emplace_back(mesh, std::move(values));
  }
  return tri;
}

inline SuiteReport run_cat0_suite(std::uint64_t seed, int samples) {
  CounterRng rng(seed);
  auto cn = PropertyTracker::at_least("cn_slack_min", -1e-10);
  auto comparison = PropertyTracker::at_least("comparison_slack_min", -1e-9);
  auto flat = PropertyTracker::at_most("flat_cn_slack_abs", 1e-9);
  for (int n = 0; n < samples; ++n) {
    const int rank = (n % 2 == 0) ? 2 : 3;
    const double alpha = ((n / 2) % 2 == 0) ? 0.0 : 1.0;
    const int points = rng.uniform_int(1, 6);
    const auto tri = random_triangle(rng, rank, points, alpha, false);
    const Cat0Report rep = cat0_check(tri[0], tri[1], tri[2], rng.uniform(), rng.uniform());
    cn.observe(rep.cn_slack);
    comparison.observe(rep.comparison_slack);
    if (n % 10 == 0) {
      const auto ftri = random_triangle(rng, rank, points, alpha, true);
      flat.observe(std::abs(cat0_check(ftri[0], ftri[1], ftri[2], 0.5, 0.5).cn_slack));
    }
  }
  return SuiteReport{"cat0", seed, samples, {cn.result(), comparison.result(), flat.result()}};
}

inline SuiteReport run_oracle_suite(std::uint64_t seed, int samples) {
  CounterRng rng(seed);
  auto above = PropertyTracker::at_most("oracle_relative_excess_max", 0.01);
  auto below = PropertyTracker::at_least("oracle_minus_closed_form_min", -1e-6);
  const double alphas[] = {0.0, 1.0, -0.4};
  for (int n = 0; n < samples; ++n) {
    const AlphaParam alpha(alphas[n % 3], 2);
    const PosDefMatrix p = random_posdef(rng, 2, 1.0);
    const PosDefMatrix q = random_posdef(rng, 2, 1.0);
    const double d = fiber_distance(p, q, alpha);
    const double o = distance_oracle(p, q, alpha, OracleOptions{64, 500, rng.next_u64()});
    above.observe((o - d) / d);
    below.observe(o - d);
  }
  return SuiteReport{"oracle", seed, samples, {above.result(), below.result()}};
}

inline SuiteReport run_appendix_suite(std::uint64_t seed, int samples) {
  CounterRng rng(seed);
  auto min_sv = PropertyTracker::at_least("exp_differential_min_singular", 1e-3);
  auto origin = PropertyTracker::at_most("exp_differential_at_origin_gap", 1e-6);
  for (int n = 0; n < samples; ++n) {
    const int r = rng.uniform_int(1, 3);
    const PosDefMatrix h = random_posdef(rng, r, 1.0);
    const HermitianMatrix v = random_tangent_at(rng, h, rng.uniform(0.0, 3.0));
    min_sv.observe(exp_differential_min_singular(h, v, 1e-5));
    if (n % 10 == 0) {
      origin.observe(std::abs(exp_differential_min_singular(h, HermitianMatrix::zero(r), 1e-5) - 1.0));
    }
  }
  return SuiteReport{"appendix", seed, samples, {min_sv.result(), origin.result()}};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"invariants", "cat0", "oracle", "appendix"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed, int samples) {
  if (name == "invariants") return run_invariants_suite(seed, samples);
  if (name == "cat0") return run_cat0_suite(seed, samples);
  if (name == "oracle") return run_oracle_suite(seed, samples);
  if (name == "appendix") return run_appendix_suite(seed, samples);
  throw PreconditionError("unknown suite \"" + name + "\"");
}

}  // namespace hermetric
