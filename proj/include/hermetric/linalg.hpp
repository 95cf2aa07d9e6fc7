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

// Dense Hermitian linear algebra over small ranks (r <= 64).
//
// Every matrix function here goes through one Hermitian eigendecomposition:
// for A = U diag(l) U^H we set f(A) = U diag(f(l)) U^H. All matrices in the
// library are normal, so no Pade or scaling-and-squaring is needed.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hermetric/errors.hpp"

namespace hermetric {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr int kMaxRank = 64;

// Inputs whose entrywise asymmetry |a_ij - conj(a_ji)| exceeds this
// (relative to max(1, max|a_ij|)) are rejected rather than symmetrized.
inline constexpr double kAsymmetryTolerance = 1e-9;

inline constexpr double kExpOverflowGuard = 700.0;
inline constexpr double kConditionGuard = 1e14;

namespace detail {

inline void check_rank(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) {
    std::ostringstream os;
    os << "matrix is not square (" << rows << "x" << cols << ")";
    throw DimensionError(os.str());
  }
  if (rows < 1 || rows > kMaxRank) {
    std::ostringstream os;
    os << "rank " << rows << " outside supported range [1, " << kMaxRank << "]";
    throw DimensionError(os.str());
  }
}

inline void check_same_rank(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": rank mismatch (" << a << " vs " << b << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace detail

class HermitianMatrix {
 public:
  // Replaces `a` by (a + a^H) / 2 after checking that the asymmetry is
  // within kAsymmetryTolerance. Throws NotHermitianError otherwise.
  explicit HermitianMatrix(const ComplexMatrix& a) {
    detail::check_rank(a.rows(), a.cols());
    if (!a.allFinite()) throw NotHermitianError("matrix has non-finite entries");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kAsymmetryTolerance * scale) {
      std::ostringstream os;
      os << "matrix is not Hermitian: asymmetry " << asym << " exceeds "
         << kAsymmetryTolerance * scale;
      throw NotHermitianError(os.str());
    }
    m_ = 0.5 * (a + a.adjoint());
  }

  // Hermitian part of `a` with no asymmetry check. Meant for products that
  // are Hermitian in exact arithmetic (X^H Y + Y^H X, S v S, ...).
  static HermitianMatrix hermitian_part(const ComplexMatrix& a) {
    detail::check_rank(a.rows(), a.cols());
    return HermitianMatrix(ComplexMatrix(0.5 * (a + a.adjoint())), Trusted{});
  }

  static HermitianMatrix zero(int rank) {
    detail::check_rank(rank, rank);
    return HermitianMatrix(ComplexMatrix::Zero(rank, rank), Trusted{});
  }

  static HermitianMatrix identity(int rank) {
    detail::check_rank(rank, rank);
    return HermitianMatrix(ComplexMatrix::Identity(rank, rank), Trusted{});
  }

  static HermitianMatrix diagonal(const std::vector<double>& d) {
    const auto r = static_cast<Eigen::Index>(d.size());
    detail::check_rank(r, r);
    ComplexMatrix m = ComplexMatrix::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) m(i, i) = d[static_cast<size_t>(i)];
    return HermitianMatrix(std::move(m), Trusted{});
  }

  int rank() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }

  // Frobenius inner product Re tr(a b); real for Hermitian a, b.
  double dot(const HermitianMatrix& other) const {
    detail::check_same_rank(rank(), other.rank(), "dot");
    return (m_.cwiseProduct(other.m_.conjugate())).sum().real();
  }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    detail::check_same_rank(a.rank(), b.rank(), "operator+");
    return HermitianMatrix(ComplexMatrix(a.m_ + b.m_), Trusted{});
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    detail::check_same_rank(a.rank(), b.rank(), "operator-");
    return HermitianMatrix(ComplexMatrix(a.m_ - b.m_), Trusted{});
  }
  friend HermitianMatrix operator*(double c, const HermitianMatrix& a) {
    return HermitianMatrix(ComplexMatrix(c * a.m_), Trusted{});
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a) { return (-1.0) * a; }

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // unitary, columns are eigenvectors

  // U diag(f(l)) U^H
  template <typename F>
  ComplexMatrix apply(F&& f) const {
    RealVector fl(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) fl(i) = f(eigenvalues(i));
    return eigenvectors * fl.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

inline EigenDecomposition eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    // Eigen's tridiagonal QR gives up after 30*n iterations.
    os << "Hermitian eigensolver did not converge: |A|_F = " << a.frobenius_norm()
       << ", iteration budget " << 30 * a.rank();
    throw ConvergenceError(os.str());
  }
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

// A point of Herm+(r). Keeps its eigendecomposition, since every geometric
// quantity at this point (h^{1/2}, h^{-1/2}, log h) is a spectral function.
class PosDefMatrix {
 public:
  explicit PosDefMatrix(HermitianMatrix h) : h_(std::move(h)), eig_(eig_hermitian(h_)) {
    const double lmin = eig_.eigenvalues(0);
    if (!(lmin > 0.0)) {
      std::ostringstream os;
      os << "matrix is not positive definite: smallest eigenvalue " << lmin;
      throw NotPositiveDefiniteError(os.str());
    }
  }

  explicit PosDefMatrix(const ComplexMatrix& m) : PosDefMatrix(HermitianMatrix(m)) {}

  static PosDefMatrix identity(int rank) { return PosDefMatrix(HermitianMatrix::identity(rank)); }
  static PosDefMatrix diagonal(const std::vector<double>& d) {
    return PosDefMatrix(HermitianMatrix::diagonal(d));
  }

  int rank() const { return h_.rank(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  const EigenDecomposition& eigen() const { return eig_; }

  double min_eigenvalue() const { return eig_.eigenvalues(0); }
  double max_eigenvalue() const { return eig_.eigenvalues(eig_.eigenvalues.size() - 1); }
  double condition_number() const { return max_eigenvalue() / min_eigenvalue(); }
  double log_determinant() const { return eig_.eigenvalues.array().log().sum(); }

  ComplexMatrix sqrt_matrix() const {
    return eig_.apply([](double l) { return std::sqrt(l); });
  }
  ComplexMatrix inv_sqrt_matrix() const {
    return eig_.apply([](double l) { return 1.0 / std::sqrt(l); });
  }
  ComplexMatrix inverse_matrix() const {
    return eig_.apply([](double l) { return 1.0 / l; });
  }

  // c * h for c > 0
  PosDefMatrix scaled(double c) const {
    if (!(c > 0.0)) throw NotPositiveDefiniteError("scale factor must be positive");
    return PosDefMatrix(c * h_, eig_, c);
  }

 private:
  PosDefMatrix(HermitianMatrix h, const EigenDecomposition& eig, double c)
      : h_(std::move(h)), eig_{c * eig.eigenvalues, eig.eigenvectors} {}

  HermitianMatrix h_;
  EigenDecomposition eig_;
};

// s a s for Hermitian s; used to move tangent vectors into the identity
// frame: h^{-1/2} v h^{-1/2}.
inline HermitianMatrix congruence(const ComplexMatrix& s, const HermitianMatrix& a) {
  return HermitianMatrix::hermitian_part(s * a.matrix() * s);
}

inline PosDefMatrix sqrtm_posdef(const PosDefMatrix& p) {
  return PosDefMatrix(HermitianMatrix::hermitian_part(p.sqrt_matrix()));
}

inline PosDefMatrix expm_hermitian(const HermitianMatrix& a, double overflow_guard = kExpOverflowGuard) {
  const EigenDecomposition e = eig_hermitian(a);
  const double largest = e.eigenvalues.cwiseAbs().maxCoeff();
  if (largest > overflow_guard) {
    std::ostringstream os;
    os << "matrix exponential overflow: eigenvalue magnitude " << largest << " exceeds guard "
       << overflow_guard;
    throw OverflowError(os.str());
  }
  return PosDefMatrix(HermitianMatrix::hermitian_part(e.apply([](double l) { return std::exp(l); })));
}

inline HermitianMatrix logm_posdef(const PosDefMatrix& p, double condition_guard = kConditionGuard) {
  if (p.condition_number() > condition_guard) {
    std::ostringstream os;
    os << "matrix logarithm ill-conditioned: condition number " << p.condition_number()
       << " exceeds guard " << condition_guard;
    throw IllConditionedError(os.str());
  }
  return HermitianMatrix::hermitian_part(p.eigen().apply([](double l) { return std::log(l); }));
}

// Eigenvalues of p^{-1} q, computed from the Hermitian form p^{-1/2} q p^{-1/2}.
inline RealVector relative_spectrum(const PosDefMatrix& p, const PosDefMatrix& q) {
  detail::check_same_rank(p.rank(), q.rank(), "relative_spectrum");
  const HermitianMatrix m = congruence(p.inv_sqrt_matrix(), q.hermitian());
  RealVector l = eig_hermitian(m).eigenvalues;
  // Roundoff can push a tiny eigenvalue of a badly scaled pair to <= 0.
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (!(l(i) > 0.0)) l(i) = std::numeric_limits<double>::min();
  }
  return l;
}

}  // namespace hermetric
