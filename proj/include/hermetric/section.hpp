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

// Sections of Herm+(E) and Herm(E) over a quadrature mesh.
//
// The base manifold is replaced by weighted points (x_i, w_i) carrying their
// own alpha_i. Integrals become weighted sums, taken in ascending point-id
// order so results do not depend on evaluation order. The L2 distance is
// evaluated pointwise:
//
//   d(h1, h2)^2 = sum_i w_i d_{x_i}(h1(x_i), h2(x_i))^2.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hermetric/errors.hpp"
#include "hermetric/fiber.hpp"
#include "hermetric/linalg.hpp"

namespace hermetric {

struct MeshPoint {
  std::int64_t id = 0;
  double weight = 0.0;  // in units of the volume measure
  double alpha = 0.0;
};

class QuadratureMesh {
 public:
  QuadratureMesh(int rank, std::vector<MeshPoint> points) : rank_(rank), points_(std::move(points)) {
    detail::check_rank(rank, rank);
    if (points_.empty()) throw PreconditionError("quadrature mesh has no points");
    std::sort(points_.begin(), points_.end(),
              [](const MeshPoint& a, const MeshPoint& b) { return a.id < b.id; });
    for (size_t i = 0; i < points_.size(); ++i) {
      const MeshPoint& p = points_[i];
      if (i > 0 && points_[i - 1].id == p.id) {
        throw PreconditionError("quadrature mesh: duplicate point id " + std::to_string(p.id));
      }
      if (!std::isfinite(p.weight) || !(p.weight > 0.0)) {
        std::ostringstream os;
        os << "quadrature mesh: point " << p.id << " has non-positive weight " << p.weight;
        throw PreconditionError(os.str());
      }
      // Throws for alpha <= -1/r.
      try {
        AlphaParam(p.alpha, rank);
      } catch (const PreconditionError& e) {
        throw PreconditionError("quadrature mesh: point " + std::to_string(p.id) + ": " + e.what());
      }
    }
    hash_ = compute_hash();
  }

  static std::shared_ptr<const QuadratureMesh> make(int rank, std::vector<MeshPoint> points) {
    return std::make_shared<const QuadratureMesh>(rank, std::move(points));
  }

  // n points of equal weight volume/n and a common alpha.
  static std::shared_ptr<const QuadratureMesh> uniform(int rank, size_t n, double volume, double alpha) {
    std::vector<MeshPoint> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {static_cast<std::int64_t>(i), volume / static_cast<double>(n), alpha};
    return make(rank, std::move(pts));
  }

  int rank() const { return rank_; }
  size_t size() const { return points_.size(); }
  const std::vector<MeshPoint>& points() const { return points_; }
  const MeshPoint& point(size_t i) const { return points_[i]; }
  AlphaParam alpha(size_t i) const { return AlphaParam(points_[i].alpha, rank_); }

  double volume() const {
    double v = 0.0;
    for (const MeshPoint& p : points_) v += p.weight;
    return v;
  }

  // The common alpha if every point carries the same value.
  std::optional<double> constant_alpha() const {
    const double a = points_.front().alpha;
    for (const MeshPoint& p : points_)
      if (p.alpha != a) return std::nullopt;
    return a;
  }

  // FNV-1a over rank, ids and the bit patterns of weights and alphas.
  std::uint64_t hash() const { return hash_; }

 private:
  std::uint64_t compute_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    };
    mix(static_cast<std::uint64_t>(rank_));
    for (const MeshPoint& p : points_) {
      mix(static_cast<std::uint64_t>(p.id));
      mix(std::bit_cast<std::uint64_t>(p.weight));
      mix(std::bit_cast<std::uint64_t>(p.alpha));
    }
    return h;
  }

  int rank_;
  std::vector<MeshPoint> points_;
  std::uint64_t hash_ = 0;
};

using MeshRef = std::shared_ptr<const QuadratureMesh>;

namespace detail {

inline void require_same_mesh(const MeshRef& a, const MeshRef& b, const char* what) {
  if (a == b) return;
  if (a->hash() != b->hash()) {
    std::ostringstream os;
    os << what << ": sections live on different meshes (hash " << std::hex << a->hash() << " vs "
       << b->hash() << ")";
    throw MeshMismatchError(os.str());
  }
}

inline std::string at_point(std::int64_t id, const std::exception& e) {
  return "point " + std::to_string(id) + ": " + e.what();
}

// Runs f, re-throwing library errors with the mesh point id prepended.
template <typename F>
auto annotate_point(std::int64_t id, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const OverflowError& e) {
    throw OverflowError(at_point(id, e));
  } catch (const IllConditionedError& e) {
    throw IllConditionedError(at_point(id, e));
  } catch (const NotPositiveDefiniteError& e) {
    throw NotPositiveDefiniteError(at_point(id, e));
  } catch (const NotHermitianError& e) {
    throw NotHermitianError(at_point(id, e));
  } catch (const DimensionError& e) {
    throw DimensionError(at_point(id, e));
  } catch (const Error& e) {
    throw Error(at_point(id, e));
  }
}

}  // namespace detail

// One value per mesh point, stored in mesh (ascending id) order.
template <typename T>
class MeshField {
 public:
  MeshField(MeshRef mesh, std::vector<T> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (!mesh_) throw PreconditionError("section without a mesh");
    if (values_.size() != mesh_->size()) {
      std::ostringstream os;
      os << "section has " << values_.size() << " values for a mesh of " << mesh_->size() << " points";
      throw DimensionError(os.str());
    }
  }

  const MeshRef& mesh() const { return mesh_; }
  const std::vector<T>& values() const { return values_; }
  size_t size() const { return values_.size(); }
  const T& operator[](size_t i) const { return values_[i]; }
  std::int64_t id(size_t i) const { return mesh_->point(i).id; }
  double weight(size_t i) const { return mesh_->point(i).weight; }

 protected:
  void check_ranks() const {
    for (size_t i = 0; i < values_.size(); ++i) {
      if (values_[i].rank() != mesh_->rank()) {
        std::ostringstream os;
        os << "point " << id(i) << ": rank " << values_[i].rank() << " does not match mesh rank "
           << mesh_->rank();
        throw DimensionError(os.str());
      }
    }
  }

  MeshRef mesh_;
  std::vector<T> values_;
};

class MetricSection : public MeshField<PosDefMatrix> {
 public:
  MetricSection(MeshRef mesh, std::vector<PosDefMatrix> values) : MeshField(std::move(mesh), std::move(values)) {
    check_ranks();
  }

  static MetricSection identity(const MeshRef& mesh) {
    return MetricSection(mesh, std::vector<PosDefMatrix>(mesh->size(), PosDefMatrix::identity(mesh->rank())));
  }
  static MetricSection constant(const MeshRef& mesh, const PosDefMatrix& h) {
    return MetricSection(mesh, std::vector<PosDefMatrix>(mesh->size(), h));
  }
};

class TangentSection : public MeshField<HermitianMatrix> {
 public:
  TangentSection(MeshRef mesh, std::vector<HermitianMatrix> values)
      : MeshField(std::move(mesh), std::move(values)) {
    check_ranks();
  }

  static TangentSection zero(const MeshRef& mesh) {
    return TangentSection(mesh, std::vector<HermitianMatrix>(mesh->size(), HermitianMatrix::zero(mesh->rank())));
  }

  friend TangentSection operator-(const TangentSection& a, const TangentSection& b) {
    detail::require_same_mesh(a.mesh(), b.mesh(), "TangentSection difference");
    std::vector<HermitianMatrix> out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return TangentSection(a.mesh(), std::move(out));
  }
};

inline constexpr double kGaugeConditionLimit = 1e12;

class GaugeTransform : public MeshField<ComplexMatrix> {
 public:
  GaugeTransform(MeshRef mesh, std::vector<ComplexMatrix> values) : MeshField(std::move(mesh), std::move(values)) {
    for (size_t i = 0; i < size(); ++i) {
      const ComplexMatrix& m = values_[i];
      if (m.rows() != mesh_->rank() || m.cols() != mesh_->rank()) {
        throw DimensionError("point " + std::to_string(id(i)) + ": gauge matrix has wrong shape");
      }
      Eigen::JacobiSVD<ComplexMatrix> svd(m);
      const RealVector s = svd.singularValues();
      const double cond = s(0) / s(s.size() - 1);
      if (!(cond < kGaugeConditionLimit)) {
        std::ostringstream os;
        os << "point " << id(i) << ": gauge matrix condition number " << cond << " exceeds "
           << kGaugeConditionLimit;
        throw IllConditionedError(os.str());
      }
    }
  }

  static GaugeTransform identity(const MeshRef& mesh) {
    return GaugeTransform(mesh, std::vector<ComplexMatrix>(mesh->size(), ComplexMatrix::Identity(mesh->rank(), mesh->rank())));
  }
};

class ScalarField : public MeshField<double> {
 public:
  ScalarField(MeshRef mesh, std::vector<double> values) : MeshField(std::move(mesh), std::move(values)) {
    for (size_t i = 0; i < size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw PreconditionError("point " + std::to_string(id(i)) + ": scalar field value is not finite");
      }
    }
  }

  static ScalarField constant(const MeshRef& mesh, double c) {
    return ScalarField(mesh, std::vector<double>(mesh->size(), c));
  }

  // sqrt(sum_i w_i f_i^2)
  double l2_norm() const {
    double s = 0.0;
    for (size_t i = 0; i < size(); ++i) s += weight(i) * values_[i] * values_[i];
    return std::sqrt(s);
  }

  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    detail::require_same_mesh(a.mesh(), b.mesh(), "ScalarField difference");
    std::vector<double> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return ScalarField(a.mesh(), std::move(out));
  }
};

inline double l2_inner(const MetricSection& h, const TangentSection& v, const TangentSection& w) {
  detail::require_same_mesh(h.mesh(), v.mesh(), "l2_inner");
  detail::require_same_mesh(h.mesh(), w.mesh(), "l2_inner");
  const QuadratureMesh& mesh = *h.mesh();
  double sum = 0.0;
  for (size_t i = 0; i < h.size(); ++i) sum += mesh.point(i).weight * alpha_inner(h[i], v[i], w[i], mesh.alpha(i));
  return sum;
}

// Pointwise fiber distances d_{x_i}(h1(x_i), h2(x_i)) in mesh order.
inline std::vector<double> pointwise_distances(const MetricSection& h1, const MetricSection& h2) {
  detail::require_same_mesh(h1.mesh(), h2.mesh(), "pointwise_distances");
  const QuadratureMesh& mesh = *h1.mesh();
  std::vector<double> d(h1.size());
  for (size_t i = 0; i < h1.size(); ++i) {
    d[i] = detail::annotate_point(mesh.point(i).id, [&] { return fiber_distance(h1[i], h2[i], mesh.alpha(i)); });
  }
  return d;
}

inline double section_distance(const MetricSection& h1, const MetricSection& h2) {
  const std::vector<double> d = pointwise_distances(h1, h2);
  double sum = 0.0;
  for (size_t i = 0; i < d.size(); ++i) sum += h1.weight(i) * d[i] * d[i];
  return std::sqrt(sum);
}

// Theta(h1, h2) = sum_i w_i d_{x_i}(h1, h2): integrated pointwise distance.
inline double theta_metric(const MetricSection& h1, const MetricSection& h2) {
  const std::vector<double> d = pointwise_distances(h1, h2);
  double sum = 0.0;
  for (size_t i = 0; i < d.size(); ++i) sum += h1.weight(i) * d[i];
  return sum;
}

// Pointwise shortest geodesic from h1 to h2; t may leave [0, 1].
class SectionGeodesic {
 public:
  SectionGeodesic(const MetricSection& h1, const MetricSection& h2) : mesh_(h1.mesh()) {
    detail::require_same_mesh(h1.mesh(), h2.mesh(), "section_geodesic");
    fibers_.reserve(h1.size());
    for (size_t i = 0; i < h1.size(); ++i) {
      fibers_.push_back(detail::annotate_point(mesh_->point(i).id, [&] {
        return FiberGeodesic(h1[i], log_map(h1[i], h2[i]));
      }));
    }
  }

  MetricSection operator()(double t) const {
    std::vector<PosDefMatrix> values;
    values.reserve(fibers_.size());
    for (size_t i = 0; i < fibers_.size(); ++i) {
      values.push_back(detail::annotate_point(mesh_->point(i).id, [&] { return fibers_[i](t); }));
    }
    return MetricSection(mesh_, std::move(values));
  }

  const MeshRef& mesh() const { return mesh_; }
  const std::vector<FiberGeodesic>& fibers() const { return fibers_; }

 private:
  MeshRef mesh_;
  std::vector<FiberGeodesic> fibers_;
};

inline MetricSection section_geodesic(const MetricSection& h1, const MetricSection& h2, double t) {
  return SectionGeodesic(h1, h2)(t);
}

// e^f h
inline MetricSection conformal_scale(const MetricSection& h, const ScalarField& f) {
  detail::require_same_mesh(h.mesh(), f.mesh(), "conformal_scale");
  std::vector<PosDefMatrix> values;
  values.reserve(h.size());
  for (size_t i = 0; i < h.size(); ++i) values.push_back(h[i].scaled(std::exp(f[i])));
  return MetricSection(h.mesh(), std::move(values));
}

// sqrt(r (1 + alpha r)) ||f - g||_2, the distance between e^f h and e^g h.
// Only valid when alpha is the same at every mesh point.
inline double conformal_distance(const MetricSection& h, const ScalarField& f, const ScalarField& g) {
  detail::require_same_mesh(h.mesh(), f.mesh(), "conformal_distance");
  detail::require_same_mesh(h.mesh(), g.mesh(), "conformal_distance");
  const std::optional<double> alpha = h.mesh()->constant_alpha();
  if (!alpha) {
    throw PreconditionError(
        "conformal_distance: the closed form sqrt(r(1+alpha r))||f-g||_2 requires a constant alpha, "
        "but the mesh alpha varies between points");
  }
  const double r = h.mesh()->rank();
  return std::sqrt(r * (1.0 + *alpha * r)) * (f - g).l2_norm();
}

// Pullback by a bundle automorphism, H -> Phi^H H Phi at every point.
inline MetricSection gauge_apply(const GaugeTransform& phi, const MetricSection& h) {
  detail::require_same_mesh(phi.mesh(), h.mesh(), "gauge_apply");
  std::vector<PosDefMatrix> values;
  values.reserve(h.size());
  for (size_t i = 0; i < h.size(); ++i) {
    values.push_back(detail::annotate_point(h.id(i), [&] {
      return PosDefMatrix(HermitianMatrix::hermitian_part(phi[i].adjoint() * h[i].matrix() * phi[i]));
    }));
  }
  return MetricSection(h.mesh(), std::move(values));
}

inline TangentSection gauge_apply(const GaugeTransform& phi, const TangentSection& v) {
  detail::require_same_mesh(phi.mesh(), v.mesh(), "gauge_apply");
  std::vector<HermitianMatrix> values;
  values.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    values.push_back(HermitianMatrix::hermitian_part(phi[i].adjoint() * v[i].matrix() * phi[i]));
  }
  return TangentSection(v.mesh(), std::move(values));
}

// Inner product of the flat structure: the L2 inner product with its base
// frozen at h0.
inline double flat_inner(const MetricSection& h0, const TangentSection& v, const TangentSection& w) {
  return l2_inner(h0, v, w);
}

// ||h1 - h2||_{h0}
inline double flat_distance(const MetricSection& h0, const MetricSection& h1, const MetricSection& h2) {
  detail::require_same_mesh(h0.mesh(), h1.mesh(), "flat_distance");
  detail::require_same_mesh(h0.mesh(), h2.mesh(), "flat_distance");
  std::vector<HermitianMatrix> diff;
  diff.reserve(h1.size());
  for (size_t i = 0; i < h1.size(); ++i) diff.push_back(h1[i].hermitian() - h2[i].hermitian());
  const TangentSection d(h1.mesh(), std::move(diff));
  return std::sqrt(std::max(0.0, flat_inner(h0, d, d)));
}

// R_h(u, v) w at every point.
inline TangentSection section_curvature_tensor(const MetricSection& h, const TangentSection& u,
                                               const TangentSection& v, const TangentSection& w) {
  detail::require_same_mesh(h.mesh(), u.mesh(), "section_curvature_tensor");
  detail::require_same_mesh(h.mesh(), v.mesh(), "section_curvature_tensor");
  detail::require_same_mesh(h.mesh(), w.mesh(), "section_curvature_tensor");
  std::vector<HermitianMatrix> out;
  out.reserve(h.size());
  for (size_t i = 0; i < h.size(); ++i) out.push_back(curvature_tensor(h[i], u[i], v[i], w[i]));
  return TangentSection(h.mesh(), std::move(out));
}

struct SectionSectionalCurvature {
  double value = 0.0;
  bool orthonormalized = false;
  double orthonormality_defect = 0.0;
};

// Sectional curvature of the L2 metric: sum_i w_i tr([U_i, V_i]^2) / 4 for an
// L2-orthonormal pair (u, v); other pairs are Gram-Schmidt orthonormalized.
inline SectionSectionalCurvature section_sectional_curvature(const MetricSection& h, const TangentSection& u,
                                                             const TangentSection& v) {
  const double uu = l2_inner(h, u, u);
  const double vv = l2_inner(h, v, v);
  const double uv = l2_inner(h, u, v);
  SectionSectionalCurvature out;
  out.orthonormality_defect = std::max({std::abs(uu - 1.0), std::abs(vv - 1.0), std::abs(uv)});

  std::vector<HermitianMatrix> us = u.values();
  std::vector<HermitianMatrix> vs = v.values();
  if (out.orthonormality_defect > kOrthonormalityTolerance) {
    out.orthonormalized = true;
    if (!(uu > 0.0)) throw DegeneratePlaneError("section_sectional_curvature: first vector is zero");
    const double nu = 1.0 / std::sqrt(uu);
    const double proj = uv / uu;
    const double rest = vv - uv * uv / uu;
    if (!(rest > 1e-20 * std::max(vv, 1e-300))) {
      throw DegeneratePlaneError("section_sectional_curvature: vectors are linearly dependent");
    }
    const double nv = 1.0 / std::sqrt(rest);
    for (size_t i = 0; i < us.size(); ++i) {
      vs[i] = nv * (vs[i] - proj * us[i]);
      us[i] = nu * us[i];
    }
  }
  double sum = 0.0;
  for (size_t i = 0; i < h.size(); ++i) {
    const ComplexMatrix s = h[i].inv_sqrt_matrix();
    const ComplexMatrix ut = congruence(s, us[i]).matrix();
    const ComplexMatrix vt = congruence(s, vs[i]).matrix();
    const ComplexMatrix c = detail::commutator(ut, vt);
    sum += h.weight(i) * 0.25 * (c * c).trace().real();
  }
  out.value = sum;
  return out;
}

}  // namespace hermetric
