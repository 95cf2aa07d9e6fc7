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
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hermetric/io.hpp"

namespace {

using hermetric::io::json;

struct Result {
  int status = -1;
  std::string output;
};

// Runs the CLI with `args`; stderr is folded into the output when `merge`.
Result run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string("\"") + HERMETRIC_CLI_PATH + "\" " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fx(const std::string& name) {
  return "\"" + (std::filesystem::path(HERMETRIC_FIXTURE_DIR) / name).string() + "\"";
}

TEST(Cli, DistanceValues) {
  Result r = run("distance " + fx("conformal_a.json") + " " + fx("conformal_a.json"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.output, "0\n");
  r = run("distance " + fx("conformal_a.json") + " " + fx("conformal_b.json"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.output, "2.82842712475\n");
  EXPECT_NEAR(std::stod(r.output), 2.82842712474619, 1e-11);
  r = run("distance " + fx("three_four_a.json") + " " + fx("three_four_b.json"));
  EXPECT_EQ(r.output, "5\n");
}

TEST(Cli, DistanceErrorsNamePoint) {
  Result r = run("distance " + fx("conformal_a.json") + " " + fx("bad_indefinite.json"), true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("point 7"), std::string::npos) << r.output;
  r = run("distance " + fx("diag_a.json") + " " + fx("conformal_a.json"), true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("different meshes"), std::string::npos) << r.output;
  r = run("distance " + fx("diag_a.json") + " /nonexistent.json", true);
  EXPECT_NE(r.status, 0);
}

TEST(Cli, AlphaFlagFillsMissingAlpha) {
  const std::string a = fx("complex_noalpha.json"), b = fx("complex_noalpha_identity.json");
  Result r = run("distance " + a + " " + b, true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("point 3"), std::string::npos) << r.output;
  const Result r0 = run("distance " + a + " " + b + " --alpha 0");
  const Result r1 = run("distance " + a + " " + b + " --alpha 1");
  EXPECT_EQ(r0.status, 0);
  EXPECT_EQ(r1.status, 0);
  EXPECT_LT(std::stod(r0.output), std::stod(r1.output));
}

TEST(Cli, GeodesicCsv) {
  const Result r = run("geodesic " + fx("diag_a.json") + " " + fx("diag_b.json") + " --steps 4");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.output);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("t,point_id,h00_re", 0), 0u);
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::vector<double> row;
    for (std::string c; std::getline(cells, c, ',');) row.push_back(std::stod(c));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 8u);  // steps x points
  // t = 0 reproduces diag(1, 4) at point 0, t = 1 reproduces diag(1, 4) at point 1.
  EXPECT_NEAR(rows[0][2], 1.0, 1e-8);
  EXPECT_NEAR(rows[0][8], 4.0, 1e-8);
  EXPECT_NEAR(rows[7][0], 1.0, 0.0);
  EXPECT_NEAR(rows[7][2], 1.0, 1e-8);
  EXPECT_NEAR(rows[7][8], 4.0, 1e-8);
  EXPECT_NE(run("geodesic " + fx("diag_a.json") + " " + fx("diag_b.json") + " --steps 1").status, 0);
}

TEST(Cli, GeodesicJson) {
  const Result r = run("geodesic " + fx("diag_a.json") + " " + fx("diag_b.json") + " --steps 3 --format json");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.output);
  const json mid = j.at("samples").at(1).at("section").at("points").at(0).at("h").at("re");
  EXPECT_NEAR(mid[0][0].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(mid[1][1].get<double>(), 2.0, 1e-12);
}

TEST(Cli, Curvature) {
  const Result r = run("curvature " + fx("identity_one_point.json") + " " + fx("tangent_u.json") + " " + fx("tangent_v.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(json::parse(r.output).at("sectional_curvature").get<double>(), -0.5, 1e-14);
}

TEST(Cli, CheckSuites) {
  Result r = run("check invariants --seed 42 --samples 100");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(json::parse(r.output).at("pass").get<bool>());
  const Result again = run("check invariants --seed 42 --samples 100");
  EXPECT_EQ(r.output, again.output);
  r = run("check cat0 --seed 7 --samples 200");
  EXPECT_EQ(r.status, 0);
  EXPECT_GE(json::parse(r.output).at("properties").at(0).at("worst").get<double>(), -1e-10);
  r = run("check oracle --seed 1 --samples 10");
  EXPECT_EQ(r.status, 0);
  r = run("check bogus", true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("bogus"), std::string::npos) << r.output;
}

TEST(Cli, ExampleRaufi) {
  const Result base = run("example raufi --nr 400 --ntheta 64");
  ASSERT_EQ(base.status, 0);
  const json j = json::parse(base.output);
  EXPECT_NEAR(j.at("log_det_integral").get<double>(), 25.13274, 0.02 * 25.13274);
  EXPECT_TRUE(j.at("psh_log_det").at("pass").get<bool>());
  const json fine = json::parse(run("example raufi --nr 800 --ntheta 128").output);
  EXPECT_LT(fine.at("log_det_relative_error").get<double>(), j.at("log_det_relative_error").get<double>());
  const Result csv = run("example raufi --nr 10 --ntheta 8 --format csv");
  EXPECT_EQ(std::count(csv.output.begin(), csv.output.end(), '\n'), 11);
  EXPECT_NE(run("example raufi --nr 0").status, 0);
  EXPECT_NE(run("example nope").status, 0);
}

TEST(Cli, ExampleLineBundle) {
  const Result r = run("example line-bundle --nr 400 --ntheta 64");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.output);
  EXPECT_NEAR(j.at("phi_l2_squared").get<double>(), 2.0 * 3.14159265358979, 0.02 * 2.0 * 3.14159265358979);
}

TEST(Cli, Integrability) {
  Result r = run("integrability " + fx("manifest.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(json::parse(r.output).at("is_l2").get<bool>());
  r = run("integrability " + fx("manifest_blowup.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_FALSE(json::parse(r.output).at("is_l2").get<bool>());
  r = run("integrability " + fx("singular.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(json::parse(r.output).at("l2_log_det").get<double>(), std::sqrt(0.5), 1e-12);
  r = run("integrability " + fx("singular_undeclared.json"), true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("point 6"), std::string::npos) << r.output;
}

TEST(Cli, CompletionDemo) {
  const Result r = run("completion-demo --nr 100 --ntheta 16 --steps 8 --alpha 0.5");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.output);
  EXPECT_LE(j.at("geometric_relative_error").get<double>(), 1e-9);
  EXPECT_LE(j.at("truncation").at("max_relative_mismatch").get<double>(), 1e-10);
}

TEST(Cli, OutFlag) {
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "hermetric_cli_out.txt";
  std::filesystem::remove(out);
  const Result r = run("distance " + fx("three_four_a.json") + " " + fx("three_four_b.json") + " --out \"" + out.string() + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.output, "");
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "5\n");
  std::filesystem::remove(out);
}

TEST(Cli, Usage) {
  EXPECT_NE(run("").status, 0);
  EXPECT_NE(run("frobnicate").status, 0);
  EXPECT_EQ(run("--help").status, 0);
}

}  // namespace
