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

// Riemannian geometry of one fiber Herm+(r) with the alpha-metric
//
//   <v, w>_h = tr(h^-1 v h^-1 w) + alpha tr(h^-1 v) tr(h^-1 w),  alpha > -1/r.
//
// Products h^-1 v are never formed directly. Tangent vectors are moved to the
// identity frame by v -> h^{-1/2} v h^{-1/2}, which keeps them Hermitian; in
// that frame the metric is the Frobenius one plus the alpha trace term.
//
// Only the inner product, the distance and the sectional curvature depend on
// alpha. The spray, curvature tensor, geodesics and log map do not.

#pragma once

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "hermetric/errors.hpp"
#include "hermetric/linalg.hpp"

namespace hermetric {

class AlphaParam {
 public:
  AlphaParam(double value, int rank) : value_(value), rank_(rank) {
    detail::check_rank(rank, rank);
    if (!std::isfinite(value) || !(value > -1.0 / rank)) {
      std::ostringstream os;
      os << "alpha = " << value << " is not admissible for rank " << rank << " (need alpha > "
         << -1.0 / rank << ")";
      throw PreconditionError(os.str());
    }
  }

  double value() const { return value_; }
  int rank() const { return rank_; }

 private:
  double value_;
  int rank_;
};

namespace detail {

inline void check_alpha(const AlphaParam& alpha, int rank) {
  check_same_rank(alpha.rank(), rank, "alpha parameter");
}

// Frobenius-orthonormal basis of Herm(r) as a real vector space of
// dimension r^2: E_ii, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2 for i < j.
inline std::vector<HermitianMatrix> hermitian_basis(int rank) {
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<size_t>(rank * rank));
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < rank; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(rank, rank);
    e(i, i) = 1.0;
    basis.push_back(HermitianMatrix::hermitian_part(e));
  }
  for (int i = 0; i < rank; ++i) {
    for (int j = i + 1; j < rank; ++j) {
      ComplexMatrix re = ComplexMatrix::Zero(rank, rank);
      re(i, j) = s;
      re(j, i) = s;
      basis.push_back(HermitianMatrix::hermitian_part(re));
      ComplexMatrix im = ComplexMatrix::Zero(rank, rank);
      im(i, j) = Complex(0.0, s);
      im(j, i) = Complex(0.0, -s);
      basis.push_back(HermitianMatrix::hermitian_part(im));
    }
  }
  return basis;
}

inline RealVector hermitian_coordinates(const ComplexMatrix& a) {
  const auto r = a.rows();
  RealVector c(r * r);
  Eigen::Index k = 0;
  const double s = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < r; ++i) c(k++) = a(i, i).real();
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      // Hermitian part of a, expressed in hermitian_basis order.
      const Complex sym = 0.5 * (a(i, j) + std::conj(a(j, i)));
      c(k++) = s * sym.real();
      c(k++) = s * sym.imag();
    }
  }
  return c;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace detail

inline double alpha_inner(const PosDefMatrix& h, const HermitianMatrix& v, const HermitianMatrix& w,
                          const AlphaParam& alpha) {
  detail::check_same_rank(h.rank(), v.rank(), "alpha_inner");
  detail::check_same_rank(h.rank(), w.rank(), "alpha_inner");
  detail::check_alpha(alpha, h.rank());
  const ComplexMatrix s = h.inv_sqrt_matrix();
  const HermitianMatrix vt = congruence(s, v);
  const HermitianMatrix wt = congruence(s, w);
  return vt.dot(wt) + alpha.value() * vt.trace() * wt.trace();
}

// Metric spray B_h(v, w) = (v h^-1 w + w h^-1 v) / 2. With X = h^{-1/2} v and
// Y = h^{-1/2} w we have v h^-1 w = X^H Y.
inline HermitianMatrix spray(const PosDefMatrix& h, const HermitianMatrix& v, const HermitianMatrix& w) {
  detail::check_same_rank(h.rank(), v.rank(), "spray");
  detail::check_same_rank(h.rank(), w.rank(), "spray");
  const ComplexMatrix s = h.inv_sqrt_matrix();
  const ComplexMatrix x = s * v.matrix();
  const ComplexMatrix y = s * w.matrix();
  return HermitianMatrix::hermitian_part(x.adjoint() * y);
}

// R_h(u, v) w as a Hermitian form, from h^-1 R_h(u,v) w = -1/4 [[U,V],W] with
// U = h^-1 u. In the identity frame this is h^{1/2} (-1/4 [[U~,V~],W~]) h^{1/2}.
inline HermitianMatrix curvature_tensor(const PosDefMatrix& h, const HermitianMatrix& u,
                                        const HermitianMatrix& v, const HermitianMatrix& w) {
  detail::check_same_rank(h.rank(), u.rank(), "curvature_tensor");
  detail::check_same_rank(h.rank(), v.rank(), "curvature_tensor");
  detail::check_same_rank(h.rank(), w.rank(), "curvature_tensor");
  const ComplexMatrix s = h.inv_sqrt_matrix();
  const ComplexMatrix ut = congruence(s, u).matrix();
  const ComplexMatrix vt = congruence(s, v).matrix();
  const ComplexMatrix wt = congruence(s, w).matrix();
  const ComplexMatrix c = -0.25 * detail::commutator(detail::commutator(ut, vt), wt);
  const ComplexMatrix half = h.sqrt_matrix();
  return HermitianMatrix::hermitian_part(half * c * half);
}

struct SectionalCurvature {
  double value = 0.0;
  // True when the input pair was not orthonormal to 1e-8 and was replaced by
  // its Gram-Schmidt orthonormalization.
  bool orthonormalized = false;
  // Largest deviation of the input Gram matrix from the identity.
  double orthonormality_defect = 0.0;
};

inline constexpr double kOrthonormalityTolerance = 1e-8;

inline SectionalCurvature sectional_curvature(const PosDefMatrix& h, const HermitianMatrix& u,
                                              const HermitianMatrix& v, const AlphaParam& alpha) {
  detail::check_same_rank(h.rank(), u.rank(), "sectional_curvature");
  detail::check_same_rank(h.rank(), v.rank(), "sectional_curvature");
  detail::check_alpha(alpha, h.rank());

  const ComplexMatrix s = h.inv_sqrt_matrix();
  HermitianMatrix ut = congruence(s, u);
  HermitianMatrix vt = congruence(s, v);
  const double a = alpha.value();
  auto inner = [a](const HermitianMatrix& x, const HermitianMatrix& y) {
    return x.dot(y) + a * x.trace() * y.trace();
  };

  SectionalCurvature out;
  const double uu = inner(ut, ut);
  const double vv = inner(vt, vt);
  const double uv = inner(ut, vt);
  out.orthonormality_defect = std::max({std::abs(uu - 1.0), std::abs(vv - 1.0), std::abs(uv)});
  if (out.orthonormality_defect > kOrthonormalityTolerance) {
    out.orthonormalized = true;
    if (!(uu > 0.0)) throw DegeneratePlaneError("sectional_curvature: first vector is zero");
    ut = (1.0 / std::sqrt(uu)) * ut;
    vt = vt - inner(vt, ut) * ut;
    const double rest = inner(vt, vt);
    if (!(rest > 1e-20 * std::max(vv, 1e-300))) {
      throw DegeneratePlaneError("sectional_curvature: vectors are linearly dependent");
    }
    vt = (1.0 / std::sqrt(rest)) * vt;
  }
  const ComplexMatrix c = detail::commutator(ut.matrix(), vt.matrix());
  out.value = 0.25 * (c * c).trace().real();
  return out;
}

// gamma(t) = H^{1/2} exp(t H^{-1/2} A H^{-1/2}) H^{1/2}, the geodesic with
// gamma(0) = H and gamma'(0) = A.
class FiberGeodesic {
 public:
  FiberGeodesic(PosDefMatrix start, HermitianMatrix velocity)
      : start_(std::move(start)), velocity_(std::move(velocity)) {
    detail::check_same_rank(start_.rank(), velocity_.rank(), "FiberGeodesic");
    half_ = start_.sqrt_matrix();
    direction_ = eig_hermitian(congruence(start_.inv_sqrt_matrix(), velocity_));
  }

  const PosDefMatrix& start() const { return start_; }
  const HermitianMatrix& velocity() const { return velocity_; }

  PosDefMatrix operator()(double t, double overflow_guard = kExpOverflowGuard) const {
    if (t == 0.0) return start_;
    const double largest = std::abs(t) * direction_.eigenvalues.cwiseAbs().maxCoeff();
    if (largest > overflow_guard) {
      std::ostringstream os;
      os << "geodesic evaluation overflow at t = " << t << ": exponent " << largest
         << " exceeds guard " << overflow_guard;
      throw OverflowError(os.str());
    }
    const ComplexMatrix e = direction_.apply([t](double l) { return std::exp(t * l); });
    return PosDefMatrix(HermitianMatrix::hermitian_part(half_ * e * half_));
  }

 private:
  PosDefMatrix start_;
  HermitianMatrix velocity_;
  ComplexMatrix half_;
  EigenDecomposition direction_;
};

inline PosDefMatrix geodesic_eval(const FiberGeodesic& g, double t) { return g(t); }

inline double fiber_distance(const PosDefMatrix& p, const PosDefMatrix& q, const AlphaParam& alpha) {
  detail::check_same_rank(p.rank(), q.rank(), "fiber_distance");
  detail::check_alpha(alpha, p.rank());
  const RealVector l = relative_spectrum(p, q).array().log();
  const double sq = l.squaredNorm() + alpha.value() * l.sum() * l.sum();
  return std::sqrt(std::max(0.0, sq));
}

// The initial velocity A of the geodesic from p to q:
// A = p^{1/2} log(p^{-1/2} q p^{-1/2}) p^{1/2}.
inline HermitianMatrix log_map(const PosDefMatrix& p, const PosDefMatrix& q) {
  detail::check_same_rank(p.rank(), q.rank(), "log_map");
  const PosDefMatrix m(congruence(p.inv_sqrt_matrix(), q.hermitian()));
  const HermitianMatrix l = logm_posdef(m);
  const ComplexMatrix half = p.sqrt_matrix();
  return HermitianMatrix::hermitian_part(half * l.matrix() * half);
}

// Residual of d/dt(gamma^-1 gamma') = 0 at t, evaluated through the product
// rule as gamma^-1 gamma'' - (gamma^-1 gamma')^2 with both derivatives taken
// by central differences of width `step`. Along an exact geodesic
// gamma^-1 gamma(t +- step) = exp(+-step X), so the residual is
// step^2 X^4 / 4 + O(step^4) plus roundoff.
inline double geodesic_residual(const FiberGeodesic& g, double t, double step) {
  if (!(step > 0.0)) throw PreconditionError("geodesic_residual: step must be positive");
  const ComplexMatrix minus = g(t - step).matrix();
  const ComplexMatrix mid_inv = g(t).inverse_matrix();
  const ComplexMatrix mid = g(t).matrix();
  const ComplexMatrix plus = g(t + step).matrix();
  const ComplexMatrix first = mid_inv * (plus - minus) / (2.0 * step);
  const ComplexMatrix second = mid_inv * (plus - 2.0 * mid + minus) / (step * step);
  return (second - first * first).norm();
}

// Smallest singular value of the differential of v -> exp_h(v) at v,
// estimated by central differences of width `fd_step`.
//
// The differential is expressed in orthonormal frames of the trace metric
// (alpha = 0): directions h^{1/2} E h^{1/2} at the source and
// gamma(1)^{-1/2} dX gamma(1)^{-1/2} at the target, E running over a
// Frobenius-orthonormal basis of Herm(r). In these frames D exp_h(0) is the
// identity.
inline double exp_differential_min_singular(const PosDefMatrix& h, const HermitianMatrix& v, double fd_step) {
  detail::check_same_rank(h.rank(), v.rank(), "exp_differential_min_singular");
  if (!(fd_step > 0.0)) throw PreconditionError("exp_differential_min_singular: fd_step must be positive");
  const int r = h.rank();
  const int n = r * r;
  const std::vector<HermitianMatrix> basis = detail::hermitian_basis(r);
  const ComplexMatrix half = h.sqrt_matrix();
  const PosDefMatrix end = FiberGeodesic(h, v)(1.0);
  const ComplexMatrix end_inv_half = end.inv_sqrt_matrix();

  Eigen::MatrixXd jacobian(n, n);
  for (int k = 0; k < n; ++k) {
    const HermitianMatrix dir = congruence(half, basis[static_cast<size_t>(k)]);
    const PosDefMatrix plus = FiberGeodesic(h, v + fd_step * dir)(1.0);
    const PosDefMatrix minus = FiberGeodesic(h, v - fd_step * dir)(1.0);
    const ComplexMatrix d = (plus.matrix() - minus.matrix()) / (2.0 * fd_step);
    jacobian.col(k) = detail::hermitian_coordinates(end_inv_half * d * end_inv_half);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian);
  return svd.singularValues()(n - 1);
}

}  // namespace hermetric
