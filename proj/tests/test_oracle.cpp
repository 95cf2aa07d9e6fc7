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

#include <gtest/gtest.h>

#include <cmath>

#include "hermetric/errors.hpp"
#include "hermetric/fiber.hpp"
#include "hermetric/oracle.hpp"
#include "hermetric/random.hpp"
#include "test_util.hpp"

namespace hermetric {
namespace {

TEST(Oracle, DiagonalPairIsExact) {
  // Along commuting pairs the straight line in log coordinates is already
  // the geodesic; the oracle must recover d = sqrt(2) log 4.
  const PosDefMatrix p = PosDefMatrix::identity(2);
  const PosDefMatrix q = PosDefMatrix::diagonal({4.0, 0.25});
  const double d = fiber_distance(p, q, AlphaParam(0.0, 2));
  const double o = distance_oracle(p, q, AlphaParam(0.0, 2), OracleOptions{64, 500, 1});
  EXPECT_GE(o, d - 1e-10);
  EXPECT_LE((o - d) / d, 1e-3);
}

TEST(Oracle, UpperBoundWithinOnePercent) {
  CounterRng rng(99);
  const double alphas[] = {0.0, 1.0, -0.4};
  for (int n = 0; n < 3; ++n) {
    const AlphaParam a(alphas[n], 2);
    const PosDefMatrix p = random_posdef(rng, 2, 1.0), q = random_posdef(rng, 2, 1.0);
    const double d = fiber_distance(p, q, a);
    const double o = distance_oracle(p, q, a, OracleOptions{64, 500, rng.next_u64()});
    EXPECT_GE(o - d, -1e-6);
    EXPECT_LE((o - d) / d, 0.01);
  }
}

TEST(Oracle, Rank3) {
  CounterRng rng(5);
  const AlphaParam a(0.5, 3);
  const PosDefMatrix p = random_posdef(rng, 3, 0.8), q = random_posdef(rng, 3, 0.8);
  const double d = fiber_distance(p, q, a);
  const double o = distance_oracle(p, q, a, OracleOptions{32, 200, 3});
  EXPECT_GE(o - d, -1e-6);
  EXPECT_LE((o - d) / d, 0.01);
}

TEST(Oracle, DeterministicForSeed) {
  CounterRng rng(1);
  const PosDefMatrix p = random_posdef(rng, 2, 1.0), q = random_posdef(rng, 2, 1.0);
  const AlphaParam a(0.0, 2);
  EXPECT_EQ(distance_oracle(p, q, a, 16, 50, 7), distance_oracle(p, q, a, 16, 50, 7));
}

TEST(Oracle, IdenticalEndpoints) {
  const PosDefMatrix p = testing::fixture_p();
  EXPECT_NEAR(distance_oracle(p, p, AlphaParam(0.0, 2), 8, 10, 1), 0.0, 1e-12);
}

TEST(Oracle, Preconditions) {
  const PosDefMatrix p = PosDefMatrix::identity(2);
  EXPECT_THROW(distance_oracle(p, p, AlphaParam(0.0, 2), 4, 10, 1), PreconditionError);
  EXPECT_THROW(distance_oracle(p, PosDefMatrix::identity(3), AlphaParam(0.0, 2), 8, 10, 1), DimensionError);
}

}  // namespace
}  // namespace hermetric
