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

// Worked examples on the unit disk with Lebesgue measure: the rank-2 Raufi
// metric [[1+|z|^2, z], [conj z, |z|^2]], conformal metrics on the trivial
// line bundle, a discrete sub-mean-value test for plurisubharmonicity, dual
// metrics and sup bounds on the relative eigenvalues.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "hermetric/completion.hpp"
#include "hermetric/errors.hpp"
#include "hermetric/linalg.hpp"
#include "hermetric/section.hpp"

namespace hermetric {

// Polar midpoint grid on the unit disk. Cell (i, j) has center
// r_i = (i + 1/2)/n_r, theta_j = (j + 1/2) 2 pi / n_theta and weight
// r_i dr dtheta; the origin is never a node. Point ids are i * n_theta + j.
class DiskMesh {
 public:
  DiskMesh(int n_r, int n_theta) : n_r_(n_r), n_theta_(n_theta) {
    if (n_r < 1 || n_theta < 3) throw PreconditionError("disk mesh needs n_r >= 1 and n_theta >= 3");
  }

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  size_t size() const { return static_cast<size_t>(n_r_) * static_cast<size_t>(n_theta_); }
  double dr() const { return 1.0 / n_r_; }
  double dtheta() const { return 2.0 * std::numbers::pi / n_theta_; }
  double radius(int i) const { return (i + 0.5) * dr(); }
  double angle(int j) const { return (j + 0.5) * dtheta(); }

  // Point k in id order.
  double radius_of(size_t k) const { return radius(static_cast<int>(k / static_cast<size_t>(n_theta_))); }
  Complex z(size_t k) const {
    const int i = static_cast<int>(k / static_cast<size_t>(n_theta_));
    const int j = static_cast<int>(k % static_cast<size_t>(n_theta_));
    return std::polar(radius(i), angle(j));
  }
  double weight(size_t k) const { return radius_of(k) * dr() * dtheta(); }

  double total_weight() const {
    double s = 0.0;
    for (size_t k = 0; k < size(); ++k) s += weight(k);
    return s;
  }

  MeshRef quadrature(int rank, double alpha) const {
    std::vector<MeshPoint> pts(size());
    for (size_t k = 0; k < size(); ++k) pts[k] = {static_cast<std::int64_t>(k), weight(k), alpha};
    return QuadratureMesh::make(rank, std::move(pts));
  }

 private:
  int n_r_;
  int n_theta_;
};

// A real function sampled at the nodes of a DiskMesh.
class GridFunction {
 public:
  GridFunction(DiskMesh mesh, std::vector<double> values) : mesh_(mesh), values_(std::move(values)) {
    if (values_.size() != mesh_.size()) throw DimensionError("grid function size does not match disk mesh");
    for (double v : values_)
      if (!std::isfinite(v)) throw PreconditionError("grid function value is not finite");
  }

  static GridFunction sample(const DiskMesh& mesh, const std::function<double(Complex)>& f) {
    std::vector<double> v(mesh.size());
    for (size_t k = 0; k < mesh.size(); ++k) v[k] = f(mesh.z(k));
    return GridFunction(mesh, std::move(v));
  }

  const DiskMesh& mesh() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }

  double at(int i, int j) const {
    const int jj = ((j % mesh_.n_theta()) + mesh_.n_theta()) % mesh_.n_theta();
    return values_[static_cast<size_t>(i) * static_cast<size_t>(mesh_.n_theta()) + static_cast<size_t>(jj)];
  }

  // Bilinear interpolation in (r, theta), periodic in theta. Empty when |z|
  // lies outside the band of node radii [r_0, r_{n_r - 1}].
  std::optional<double> interpolate(Complex z) const {
    const double r = std::abs(z);
    const double fr = r / mesh_.dr() - 0.5;
    if (fr < 0.0 || fr > mesh_.n_r() - 1) return std::nullopt;
    double th = std::arg(z);
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    const double ft = th / mesh_.dtheta() - 0.5;
    const int i0 = std::min(static_cast<int>(std::floor(fr)), std::max(mesh_.n_r() - 2, 0));
    const int j0 = static_cast<int>(std::floor(ft));
    const double a = mesh_.n_r() == 1 ? 0.0 : fr - i0;
    const double b = ft - j0;
    const int i1 = std::min(i0 + 1, mesh_.n_r() - 1);
    return (1 - a) * ((1 - b) * at(i0, j0) + b * at(i0, j0 + 1)) + a * ((1 - b) * at(i1, j0) + b * at(i1, j0 + 1));
  }

  // sum_k w_k u_k^2
  double l2_norm_squared() const {
    double s = 0.0;
    for (size_t k = 0; k < values_.size(); ++k) s += mesh_.weight(k) * values_[k] * values_[k];
    return s;
  }

 private:
  DiskMesh mesh_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// The Raufi metric.

inline PosDefMatrix raufi_matrix(Complex z) {
  const double t = std::norm(z);
  ComplexMatrix m(2, 2);
  m << Complex(1.0 + t, 0.0), z, std::conj(z), Complex(t, 0.0);
  return PosDefMatrix(m);
}

// Exact eigenvalues (1 + 2t -+ sqrt(1 + 4t)) / 2 of the Raufi matrix, t = |z|^2.
// The small one is evaluated as det / large to avoid cancellation near 0.
struct RaufiEigenvalues {
  double small = 0.0;
  double large = 0.0;
};

inline RaufiEigenvalues raufi_eigenvalues(double t) {
  const double large = 0.5 * (1.0 + 2.0 * t + std::sqrt(1.0 + 4.0 * t));
  return {t * t / large, large};
}

inline SingularSection raufi_section(const DiskMesh& mesh, double alpha = 0.0) {
  const MeshRef q = mesh.quadrature(2, alpha);
  std::vector<std::optional<PosDefMatrix>> values;
  values.reserve(mesh.size());
  for (size_t k = 0; k < mesh.size(); ++k) values.emplace_back(raufi_matrix(mesh.z(k)));
  return SingularSection(q, std::move(values));
}

inline double log_det_l2_target() { return 8.0 * std::numbers::pi; }   // int_disk (log |z|^4)^2 dA
inline double line_bundle_l2_target() { return 2.0 * std::numbers::pi; }  // int_disk (log |z|^2)^2 dA

struct RaufiReport {
  int n_r = 0;
  int n_theta = 0;
  double alpha = 0.0;
  double log_det_integral = 0.0;  // sum w (log det H)^2
  double log_det_target = log_det_l2_target();
  double log_det_relative_error = 0.0;
  // int d_z(h, h0)^2 dA from the exact eigenvalues, and the same through the
  // generic relative-spectrum machinery.
  double distance_integral = 0.0;
  double distance_integral_numeric = 0.0;
  IntegrabilityReport integrability;
  double max_lambda = 0.0;  // sup of the large eigenvalue over the mesh
  double max_lambda_bound = 0.5 * (3.0 + std::sqrt(5.0));  // value at |z| = 1
  // A double eigenvalue |z|^2 would give det = |z|^4 but trace 2|z|^2;
  // the matrix has trace 1 + 2|z|^2. Largest gap between the actual
  // eigenvalues and |z|^2 over the mesh.
  double double_eigenvalue_claim_gap = 0.0;
  double max_det_identity_error = 0.0;  // max |lambda_1 lambda_2 - |z|^4| / |z|^4
};

inline RaufiReport raufi_integrability(const DiskMesh& mesh, double alpha) {
  if (!(alpha > -0.5)) throw PreconditionError("raufi_integrability: alpha must exceed -1/2");
  const SingularSection sigma = raufi_section(mesh, alpha);
  const MetricSection h0 = MetricSection::identity(sigma.mesh());
  RaufiReport rep;
  rep.n_r = mesh.n_r();
  rep.n_theta = mesh.n_theta();
  rep.alpha = alpha;
  rep.integrability = integrability_report(sigma, h0);
  rep.distance_integral_numeric = rep.integrability.l2_distance * rep.integrability.l2_distance;
  for (size_t k = 0; k < mesh.size(); ++k) {
    const double t = std::norm(mesh.z(k));
    const double w = mesh.weight(k);
    const RaufiEigenvalues ev = raufi_eigenvalues(t);
    const double ls = std::log(ev.small), ll = std::log(ev.large);
    const double logdet = 2.0 * std::log(t);
    rep.log_det_integral += w * logdet * logdet;
    rep.distance_integral += w * (ls * ls + ll * ll + alpha * logdet * logdet);
    rep.max_lambda = std::max(rep.max_lambda, ev.large);
    rep.double_eigenvalue_claim_gap =
        std::max({rep.double_eigenvalue_claim_gap, std::abs(ev.large - t), std::abs(ev.small - t)});
    const RealVector num = sigma[k]->eigen().eigenvalues;
    rep.max_det_identity_error = std::max(rep.max_det_identity_error, std::abs(num(0) * num(1) - t * t) / (t * t));
  }
  rep.log_det_relative_error = std::abs(rep.log_det_integral - rep.log_det_target) / rep.log_det_target;
  return rep;
}

// ---------------------------------------------------------------------------
// Line bundle: a singular metric on the trivial line bundle is e^phi.

inline SingularSection line_bundle_section(const GridFunction& phi, double alpha = 0.0) {
  const MeshRef q = phi.mesh().quadrature(1, alpha);
  std::vector<std::optional<PosDefMatrix>> values;
  values.reserve(phi.values().size());
  for (double v : phi.values()) values.emplace_back(PosDefMatrix::diagonal({std::exp(v)}));
  return SingularSection(q, std::move(values));
}

struct LineBundleReport {
  int n_r = 0;
  int n_theta = 0;
  double alpha = 0.0;
  double phi_l2_squared = 0.0;  // ||log|z|^2||_2^2
  double phi_target = line_bundle_l2_target();
  double phi_relative_error = 0.0;
  double distance_to_reference = 0.0;  // d(e^phi h0, h0)
  double distance_formula = 0.0;       // sqrt(1 + alpha) ||phi||_2
  IntegrabilityReport integrability;
};

inline LineBundleReport line_bundle_integrability(const DiskMesh& mesh, double alpha) {
  if (!(alpha > -1.0)) throw PreconditionError("line bundle: alpha must exceed -1");
  const GridFunction phi = GridFunction::sample(mesh, [](Complex z) { return std::log(std::norm(z)); });
  const SingularSection sigma = line_bundle_section(phi, alpha);
  const MetricSection h0 = MetricSection::identity(sigma.mesh());
  LineBundleReport rep;
  rep.n_r = mesh.n_r();
  rep.n_theta = mesh.n_theta();
  rep.alpha = alpha;
  rep.phi_l2_squared = phi.l2_norm_squared();
  rep.phi_relative_error = std::abs(rep.phi_l2_squared - rep.phi_target) / rep.phi_target;
  rep.integrability = integrability_report(sigma, h0);
  rep.distance_to_reference = rep.integrability.l2_distance;
  rep.distance_formula = std::sqrt(1.0 + alpha) * std::sqrt(rep.phi_l2_squared);
  return rep;
}

// ---------------------------------------------------------------------------
// Completion experiments on the disk with the unbounded profile f = log|z|^2.

struct CompletionDemo {
  int rank = 0;
  double alpha = 0.0;
  // f_k = max(f, -(k + 1)): truncations approaching f.
  CauchyReport truncation;
  // f_k = f + 2^-k / sqrt(pi): ||f_k - f||_2 = 2^-k, so consecutive steps
  // form a geometric series with closed-form sum.
  CauchyReport geometric;
  double geometric_sum = 0.0;           // last partial sum
  double geometric_expected = 0.0;      // factor * (1 - 2^-(steps-1))
  double geometric_relative_error = 0.0;
};

inline CompletionDemo completion_demo(const DiskMesh& mesh, int rank, double alpha, int steps) {
  if (steps < 2) throw PreconditionError("completion demo needs at least 2 steps");
  const MeshRef q = mesh.quadrature(rank, alpha);
  const MetricSection h0 = MetricSection::identity(q);
  std::vector<double> f(mesh.size());
  for (size_t k = 0; k < mesh.size(); ++k) f[k] = std::log(std::norm(mesh.z(k)));
  const ScalarField limit(q, f);

  // The quadrature weights sum to pi only up to rounding; use the actual
  // volume so the shift has unit L2 norm on this mesh.
  const double unit = 1.0 / std::sqrt(q->volume());
  std::vector<ScalarField> truncated, shifted;
  for (int k = 0; k < steps; ++k) {
    std::vector<double> t(f), g(f);
    const double level = -(k + 1.0);
    const double shift = std::ldexp(unit, -k);
    for (size_t i = 0; i < f.size(); ++i) {
      t[i] = std::max(f[i], level);
      g[i] = f[i] + shift;
    }
    truncated.emplace_back(q, std::move(t));
    shifted.emplace_back(q, std::move(g));
  }

  CompletionDemo demo;
  demo.rank = rank;
  demo.alpha = alpha;
  demo.truncation = cauchy_experiment(h0, truncated, limit);
  demo.geometric = cauchy_experiment(h0, shifted, limit);
  demo.geometric_sum = demo.geometric.partial_sums.back();
  demo.geometric_expected = demo.geometric.factor * (1.0 - std::ldexp(1.0, -(steps - 1)));
  demo.geometric_relative_error =
      std::abs(demo.geometric_sum - demo.geometric_expected) / demo.geometric_expected;
  return demo;
}

// ---------------------------------------------------------------------------
// Sub-mean-value test.

inline constexpr double kPshTolerance = 1e-3;

struct PshReport {
  double max_violation = -INFINITY;  // max of u(z0) - mean over |w - z0| = rho
  bool pass = false;
  double tolerance = kPshTolerance;
  int tested = 0;
  std::vector<Complex> skipped_centers;  // some test circle left the mesh band
};

// Default centers: 8 angles on each of the rings |z| = 0.3, 0.45, 0.6.
inline std::vector<Complex> default_psh_centers() {
  std::vector<Complex> c;
  for (double r : {0.3, 0.45, 0.6})
    for (int j = 0; j < 8; ++j) c.push_back(std::polar(r, (j + 0.25) * std::numbers::pi / 4.0));
  return c;
}

inline PshReport psh_check(const GridFunction& u, const std::vector<double>& radii,
                           const std::vector<Complex>& centers = default_psh_centers(), int circle_points = 64) {
  if (radii.empty()) throw PreconditionError("psh_check: no radii");
  PshReport rep;
  for (const Complex& c : centers) {
    const std::optional<double> uc = u.interpolate(c);
    bool skipped = !uc;
    double worst = -INFINITY;
    for (double rho : radii) {
      if (skipped) break;
      double sum = 0.0;
      for (int k = 0; k < circle_points; ++k) {
        const std::optional<double> v = u.interpolate(c + std::polar(rho, 2.0 * std::numbers::pi * k / circle_points));
        if (!v) {
          skipped = true;
          break;
        }
        sum += *v;
      }
      if (!skipped) worst = std::max(worst, *uc - sum / circle_points);
    }
    if (skipped) {
      rep.skipped_centers.push_back(c);
      continue;
    }
    ++rep.tested;
    rep.max_violation = std::max(rep.max_violation, worst);
  }
  rep.pass = rep.tested > 0 && rep.max_violation <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Duals and bounds.

// Pointwise (h^-1)^T, the local matrix of the dual metric on E*.
inline PosDefMatrix dual_matrix(const PosDefMatrix& h) {
  return PosDefMatrix(HermitianMatrix::hermitian_part(ComplexMatrix(h.inverse_matrix().transpose())));
}

inline SingularSection dual_section(const SingularSection& sigma) {
  std::vector<std::optional<PosDefMatrix>> values;
  values.reserve(sigma.size());
  for (size_t i = 0; i < sigma.size(); ++i) {
    if (!sigma[i]) {
      throw PreconditionError("dual_section: point " + std::to_string(sigma.id(i)) + " is degenerate");
    }
    values.emplace_back(dual_matrix(*sigma[i]));
  }
  return SingularSection(sigma.mesh(), std::move(values), sigma.nullset());
}

inline MetricSection dual_section(const MetricSection& h) {
  std::vector<PosDefMatrix> values;
  values.reserve(h.size());
  for (const PosDefMatrix& m : h.values()) values.push_back(dual_matrix(m));
  return MetricSection(h.mesh(), std::move(values));
}

// max over the support of the largest eigenvalue of h0^-1 sigma.
inline double boundedness_bound(const SingularSection& sigma, const MetricSection& h0) {
  detail::require_same_mesh(sigma.mesh(), h0.mesh(), "boundedness_bound");
  double sup = 0.0;
  for (size_t i = 0; i < sigma.size(); ++i) {
    if (!sigma.in_support(i)) continue;
    const RealVector l = relative_spectrum(h0[i], *sigma[i]);
    sup = std::max(sup, l(l.size() - 1));
  }
  return sup;
}

}  // namespace hermetric
