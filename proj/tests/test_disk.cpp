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
#include <numbers>

#include "hermetric/disk.hpp"
#include "hermetric/errors.hpp"
#include "test_util.hpp"

namespace hermetric {
namespace {

TEST(DiskMesh, GeometryAndWeights) {
  const DiskMesh m(10, 8);
  EXPECT_EQ(m.size(), 80u);
  EXPECT_NEAR(m.total_weight(), std::numbers::pi, 1e-13);
  EXPECT_NEAR(std::abs(m.z(0)), 0.05, 1e-15);
  EXPECT_NEAR(std::arg(m.z(1)), 1.5 * m.dtheta(), 1e-15);
  EXPECT_NEAR(std::abs(m.z(79)), 0.95, 1e-15);
  const MeshRef q = m.quadrature(2, 0.25);
  EXPECT_EQ(q->rank(), 2);
  EXPECT_EQ(q->point(17).id, 17);
  EXPECT_DOUBLE_EQ(q->point(17).weight, m.weight(17));
  EXPECT_THROW(DiskMesh(0, 8), PreconditionError);
  EXPECT_THROW(DiskMesh(4, 2), PreconditionError);
}

TEST(GridFunction, InterpolationReproducesBilinearData) {
  const DiskMesh m(20, 16);
  const GridFunction u = GridFunction::sample(m, [](Complex z) { return std::abs(z); });
  EXPECT_NEAR(*u.interpolate(std::polar(0.5, 1.0)), 0.5, 1e-14);
  EXPECT_NEAR(*u.interpolate(std::polar(0.33, -2.0)), 0.33, 1e-14);
  EXPECT_FALSE(u.interpolate(0.01).has_value());
  EXPECT_FALSE(u.interpolate(0.99).has_value());
  EXPECT_NEAR(u.at(3, -1), u.at(3, 15), 0.0);
  EXPECT_THROW(GridFunction(m, std::vector<double>(3, 0.0)), DimensionError);
}

TEST(GridFunction, L2NormOfConstant) {
  const DiskMesh m(30, 12);
  const GridFunction one = GridFunction::sample(m, [](Complex) { return 1.0; });
  EXPECT_NEAR(one.l2_norm_squared(), std::numbers::pi, 1e-13);
}

TEST(Raufi, MatrixIdentities) {
  for (double r : {0.01, 0.3, 0.7, 1.0}) {
    const Complex z = std::polar(r, 0.4);
    const PosDefMatrix h = raufi_matrix(z);
    const double t = r * r;
    const RealVector l = h.eigen().eigenvalues;
    EXPECT_NEAR(l(0) * l(1), t * t, 1e-14);
    EXPECT_NEAR(l(0) + l(1), 1.0 + 2.0 * t, 1e-14);
    const RaufiEigenvalues ev = raufi_eigenvalues(t);
    EXPECT_NEAR(ev.large, l(1), 1e-13);
    EXPECT_NEAR(ev.small, l(0), 1e-12 * std::max(1.0, ev.small));
  }
  EXPECT_NEAR(raufi_eigenvalues(1.0).large, 0.5 * (3.0 + std::sqrt(5.0)), 1e-15);
  // Accurate where 1 + 2t - sqrt(1 + 4t) cancels.
  EXPECT_NEAR(raufi_eigenvalues(1e-6).small / 1e-12, 1.0, 1e-5);
}

TEST(Raufi, LogDetIntegralConvergesToEightPi) {
  EXPECT_NEAR(log_det_l2_target(), 25.132741228718345, 1e-12);
  double previous = INFINITY;
  for (int nr : {50, 100, 200, 400}) {
    const RaufiReport rep = raufi_integrability(DiskMesh(nr, 64), 0.0);
    EXPECT_LT(rep.log_det_relative_error, previous);
    previous = rep.log_det_relative_error;
    EXPECT_LE(rep.max_lambda, rep.max_lambda_bound);
    EXPECT_LT(rep.max_det_identity_error, 1e-8);
    EXPECT_NEAR(rep.distance_integral, rep.distance_integral_numeric, 1e-8 * rep.distance_integral);
    EXPECT_TRUE(rep.integrability.is_l2);
  }
  EXPECT_LT(previous, 0.02);
  // The double-eigenvalue reading |z|^2 is off by O(1) somewhere on the disk.
  EXPECT_GT(raufi_integrability(DiskMesh(100, 16), 0.0).double_eigenvalue_claim_gap, 1.0);
  EXPECT_THROW(raufi_integrability(DiskMesh(10, 8), -0.5), PreconditionError);
}

TEST(Raufi, BoundednessNearGoldenRatioSquared) {
  const DiskMesh m(200, 16);
  const SingularSection s = raufi_section(m);
  const double b = boundedness_bound(s, MetricSection::identity(s.mesh()));
  EXPECT_LE(b, 0.5 * (3.0 + std::sqrt(5.0)));
  EXPECT_NEAR(b, 2.6180, 0.01);
}

TEST(LineBundle, TwoPi) {
  const LineBundleReport rep = line_bundle_integrability(DiskMesh(400, 64), 0.0);
  EXPECT_NEAR(line_bundle_l2_target(), 2.0 * std::numbers::pi, 0.0);
  EXPECT_LT(rep.phi_relative_error, 0.02);
  EXPECT_NEAR(rep.distance_to_reference, rep.distance_formula, 1e-12);
  const LineBundleReport a = line_bundle_integrability(DiskMesh(40, 8), 1.0);
  EXPECT_NEAR(a.distance_to_reference, a.distance_formula, 1e-12);
  EXPECT_THROW(line_bundle_integrability(DiskMesh(4, 4), -1.0), PreconditionError);
}

TEST(Psh, HarmonicSubharmonicAndSuperharmonic) {
  const DiskMesh m(200, 64);
  const std::vector<double> radii = {0.05, 0.1, 0.2};
  const PshReport harmonic = psh_check(GridFunction::sample(m, [](Complex z) { return std::log(std::norm(z)); }), radii);
  EXPECT_TRUE(harmonic.pass);
  EXPECT_EQ(harmonic.tested, 24);
  const PshReport sub = psh_check(GridFunction::sample(m, [](Complex z) { return std::norm(z); }), radii);
  EXPECT_TRUE(sub.pass);
  EXPECT_LT(sub.max_violation, -1e-3);
  // u = -|z|^2 exceeds its circle means by rho^2.
  const PshReport super = psh_check(GridFunction::sample(m, [](Complex z) { return -std::norm(z); }), radii);
  EXPECT_FALSE(super.pass);
  EXPECT_NEAR(super.max_violation, 0.04, 1e-3);
  EXPECT_THROW(psh_check(GridFunction::sample(m, [](Complex) { return 0.0; }), {}), PreconditionError);
}

TEST(Psh, CentersOutsideBandAreSkipped) {
  const DiskMesh m(50, 16);
  const PshReport rep = psh_check(GridFunction::sample(m, [](Complex) { return 0.0; }), {0.3}, {0.6, 0.9});
  EXPECT_EQ(rep.tested, 1);
  EXPECT_EQ(rep.skipped_centers.size(), 1u);
}

TEST(Duals, InvolutionAndValues) {
  const DiskMesh m(10, 8);
  const SingularSection s = raufi_section(m);
  const SingularSection dd = dual_section(dual_section(s));
  // Measured in the fiber distance, which is invariant under rescaling.
  for (size_t k = 0; k < s.size(); ++k) EXPECT_LT(fiber_distance(*dd[k], *s[k], AlphaParam(0.0, 2)), 1e-12);
  EXPECT_NEAR(dual_matrix(PosDefMatrix::diagonal({2.0})).matrix()(0, 0).real(), 0.5, 1e-16);
  // The transpose conjugates off-diagonal entries of the inverse.
  const PosDefMatrix p = testing::fixture_p();
  EXPECT_MATRIX_NEAR(dual_matrix(p).matrix(), ComplexMatrix(p.inverse_matrix().transpose()), 1e-15);
  const MetricSection h = MetricSection::constant(m.quadrature(2, 0.0), p);
  EXPECT_MATRIX_NEAR(dual_section(dual_section(h))[3].matrix(), p.matrix(), 1e-14);
}

TEST(Bounds, TrivialValues) {
  const MeshRef q = DiskMesh(4, 4).quadrature(2, 0.0);
  const MetricSection h0 = MetricSection::identity(q);
  EXPECT_NEAR(boundedness_bound(SingularSection(h0), h0), 1.0, 1e-15);
  const SingularSection two(MetricSection::constant(q, PosDefMatrix::diagonal({2.0, 2.0})));
  EXPECT_NEAR(boundedness_bound(two, h0), 2.0, 1e-15);
}

TEST(CompletionDemo, ConformalFormulaAndGeometricSeries) {
  const CompletionDemo d = completion_demo(DiskMesh(100, 16), 2, 0.5, 8);
  EXPECT_NEAR(d.truncation.factor, 2.0, 1e-15);
  EXPECT_LE(d.truncation.max_relative_mismatch, 1e-10);
  EXPECT_LE(d.geometric.max_relative_mismatch, 1e-10);
  EXPECT_LE(d.geometric_relative_error, 1e-9);
  for (size_t k = 0; k < d.geometric.limit_formula.size(); ++k) {
    EXPECT_NEAR(d.geometric.limit_formula[k], 2.0 * std::ldexp(1.0, -static_cast<int>(k)), 1e-12);
  }
  EXPECT_THROW(completion_demo(DiskMesh(10, 8), 2, 0.0, 1), PreconditionError);
}

}  // namespace
}  // namespace hermetric
