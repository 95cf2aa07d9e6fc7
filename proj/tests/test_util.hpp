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

#include <gtest/gtest.h>

#include <complex>
#include <string>

#include "hermetric/linalg.hpp"

namespace hermetric::testing {

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// The 2x2 matrices used throughout: P = [[2, 1+i], [1-i, 3]] (eigenvalues 1
// and 4) and Q = [[1, i/2], [-i/2, 2]].
inline PosDefMatrix fixture_p() { return PosDefMatrix(mat2(2.0, Complex(1, 1), Complex(1, -1), 3.0)); }
inline PosDefMatrix fixture_q() { return PosDefMatrix(mat2(1.0, Complex(0, 0.5), Complex(0, -0.5), 2.0)); }

inline HermitianMatrix sigma_x() { return HermitianMatrix(mat2(0.0, 1.0, 1.0, 0.0)); }
inline HermitianMatrix sigma_y() { return HermitianMatrix(mat2(0.0, Complex(0, -1), Complex(0, 1), 0.0)); }
inline HermitianMatrix sigma_z() { return HermitianMatrix(mat2(1.0, 0.0, 0.0, -1.0)); }

}  // namespace hermetric::testing

#define EXPECT_MATRIX_NEAR(a, b, tol) EXPECT_LE(::hermetric::testing::max_abs_diff((a), (b)), (tol))

// Expects `stmt` to throw `type` with `needle` in its message.
#define EXPECT_THROW_WITH(stmt, type, needle)                                              \
  do {                                                                                     \
    try {                                                                                  \
      stmt;                                                                                \
      ADD_FAILURE() << "expected " #type;                                                  \
    } catch (const type& e) {                                                              \
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();        \
    }                                                                                      \
  } while (0)
