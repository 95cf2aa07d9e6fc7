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

// hermetric_cli: command-line front end.
//
//   hermetric_cli distance H1.json H2.json
//   hermetric_cli geodesic H1.json H2.json --steps 11 [--format csv|json]   (csv default)
//   hermetric_cli curvature H.json U.json V.json
//   hermetric_cli check invariants|cat0|oracle|appendix --seed 42 --samples 100
//   hermetric_cli example raufi|line-bundle --nr 400 --ntheta 64 [--format json|csv]
//   hermetric_cli integrability SIGMA.json|MANIFEST.json [--h0 H0.json]
//   hermetric_cli completion-demo --nr 200 --ntheta 32 --steps 10
//
// Reports go to stdout unless --out is given. Exit status is 0 on success,
// 1 on a runtime error or a failed check, and a CLI11 code on usage errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hermetric/hermetric.hpp"

namespace {

using hermetric::io::json;

struct Common {
  std::optional<double> alpha;
  std::string out;
  std::string format;  // empty: the subcommand default
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    hermetric::io::write_text_file(c.out, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

hermetric::MetricSection load_metric(const std::string& path, const Common& c) {
  return hermetric::io::metric_section_from_json(hermetric::io::read_json_file(path), c.alpha);
}

hermetric::TangentSection load_tangent(const std::string& path, const Common& c) {
  return hermetric::io::tangent_section_from_json(hermetric::io::read_json_file(path), c.alpha);
}

std::string format_distance(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g\n", d);
  return buf;
}

// One row per ring of the disk mesh: radius, t = |z|^2 and the profile values.
std::string raufi_profile_csv(const hermetric::DiskMesh& mesh) {
  std::ostringstream os;
  os << std::setprecision(17) << "r,t,log_det,lambda_small,lambda_large,double_eigenvalue_gap\n";
  for (int i = 0; i < mesh.n_r(); ++i) {
    const double r = mesh.radius(i);
    const double t = r * r;
    const hermetric::RaufiEigenvalues ev = hermetric::raufi_eigenvalues(t);
    os << r << "," << t << "," << 2.0 * std::log(t) << "," << ev.small << "," << ev.large << ","
       << std::max(std::abs(ev.large - t), std::abs(ev.small - t)) << "\n";
  }
  return os.str();
}

std::string line_bundle_profile_csv(const hermetric::DiskMesh& mesh) {
  std::ostringstream os;
  os << std::setprecision(17) << "r,phi,phi_squared\n";
  for (int i = 0; i < mesh.n_r(); ++i) {
    const double r = mesh.radius(i);
    const double phi = std::log(r * r);
    os << r << "," << phi << "," << phi * phi << "\n";
  }
  return os.str();
}

const std::vector<double> kPshRadii = {0.05, 0.1, 0.2};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian metric geometry toolkit"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* sub, bool with_alpha, bool with_format) {
    sub->add_option("--out", common.out, "Write output to this file instead of stdout");
    if (with_alpha) {
      sub->add_option("--alpha", common.alpha, "Alpha for points that do not carry one");
    }
    if (with_format) {
      sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    }
  };

  std::string file1, file2, file3, h0_file;
  int steps = 11;
  int nr = 400, ntheta = 64;
  double example_alpha = 0.0;
  std::uint64_t seed = 42;
  int samples = 100;
  std::string suite, example_name;

  CLI::App* distance = app.add_subcommand("distance", "L2 distance between two metric sections");
  distance->add_option("h1", file1)->required()->check(CLI::ExistingFile);
  distance->add_option("h2", file2)->required()->check(CLI::ExistingFile);
  add_common(distance, true, false);

  CLI::App* geodesic = app.add_subcommand("geodesic", "Trace the geodesic between two metric sections");
  geodesic->add_option("h1", file1)->required()->check(CLI::ExistingFile);
  geodesic->add_option("h2", file2)->required()->check(CLI::ExistingFile);
  geodesic->add_option("--steps", steps, "Number of samples t = k/(steps-1)")->check(CLI::Range(2, 1000000));
  add_common(geodesic, true, true);

  CLI::App* curvature = app.add_subcommand("curvature", "Sectional curvature of the L2 metric at h on span(u, v)");
  curvature->add_option("metric", file1)->required()->check(CLI::ExistingFile);
  curvature->add_option("u", file2)->required()->check(CLI::ExistingFile);
  curvature->add_option("v", file3)->required()->check(CLI::ExistingFile);
  add_common(curvature, true, false);

  CLI::App* check = app.add_subcommand("check", "Run a seeded property sweep");
  check->add_option("suite", suite)->required()->check(CLI::IsMember(hermetric::suite_names()));
  check->add_option("--seed", seed, "Seed for the counter-based generator");
  check->add_option("--samples", samples, "Number of samples")->check(CLI::Range(1, 100000000));
  add_common(check, false, false);

  CLI::App* example = app.add_subcommand("example", "Singular metrics on the unit disk");
  example->add_option("name", example_name)->required()->check(CLI::IsMember({"raufi", "line-bundle"}));
  example->add_option("--nr", nr, "Radial cells")->check(CLI::Range(1, 1000000));
  example->add_option("--ntheta", ntheta, "Angular cells")->check(CLI::Range(1, 1000000));
  example->add_option("--alpha", example_alpha, "Alpha on every mesh point");
  add_common(example, false, true);

  CLI::App* integrability = app.add_subcommand(
      "integrability", "L2 integrability of a singular section, or of a refinement manifest (JSON array)");
  integrability->add_option("sigma", file1)->required()->check(CLI::ExistingFile);
  integrability->add_option("--h0", h0_file, "Reference metric (default: identity)")->check(CLI::ExistingFile);
  add_common(integrability, true, false);

  CLI::App* completion = app.add_subcommand("completion-demo", "Cauchy sequences towards log|z|^2 on the disk");
  int completion_rank = 2;
  completion->add_option("--nr", nr, "Radial cells")->check(CLI::Range(1, 1000000));
  completion->add_option("--ntheta", ntheta, "Angular cells")->check(CLI::Range(1, 1000000));
  completion->add_option("--steps", steps, "Sequence length")->check(CLI::Range(2, 60));
  completion->add_option("--rank", completion_rank, "Bundle rank")->check(CLI::Range(1, hermetric::kMaxRank));
  completion->add_option("--alpha", example_alpha, "Alpha on every mesh point");
  add_common(completion, false, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*distance) {
      const auto h1 = load_metric(file1, common);
      const auto h2 = load_metric(file2, common);
      emit(common, format_distance(hermetric::section_distance(h1, h2)));
    } else if (*geodesic) {
      const auto h1 = load_metric(file1, common);
      const auto h2 = load_metric(file2, common);
      if (common.format != "json") {
        emit(common, hermetric::io::geodesic_csv(h1, h2, steps));
      } else {
        const hermetric::SectionGeodesic g(h1, h2);
        json rows = json::array();
        for (int k = 0; k < steps; ++k) {
          const double t = static_cast<double>(k) / (steps - 1);
          rows.push_back(json{{"t", t}, {"section", hermetric::io::to_json(g(t))}});
        }
        emit(common, dump(json{{"steps", steps}, {"samples", std::move(rows)}}));
      }
    } else if (*curvature) {
      const auto h = load_metric(file1, common);
      const auto u = load_tangent(file2, common);
      const auto v = load_tangent(file3, common);
      emit(common, dump(hermetric::io::to_json(hermetric::section_sectional_curvature(h, u, v))));
    } else if (*check) {
      const hermetric::SuiteReport rep = hermetric::run_suite(suite, seed, samples);
      emit(common, dump(hermetric::io::to_json(rep)));
      return rep.pass() ? 0 : 1;
    } else if (*example) {
      const hermetric::DiskMesh mesh(nr, ntheta);
      if (example_name == "raufi") {
        if (common.format == "csv") {
          emit(common, raufi_profile_csv(mesh));
        } else {
          const hermetric::RaufiReport rep = hermetric::raufi_integrability(mesh, example_alpha);
          const auto logdet = hermetric::GridFunction::sample(mesh, [](hermetric::Complex z) {
            return std::log(std::norm(z) * std::norm(z));
          });
          const hermetric::SingularSection sigma = hermetric::raufi_section(mesh, example_alpha);
          json j = hermetric::io::to_json(rep);
          j["psh_log_det"] = hermetric::io::to_json(hermetric::psh_check(logdet, kPshRadii));
          j["boundedness_bound"] = hermetric::boundedness_bound(sigma, hermetric::MetricSection::identity(sigma.mesh()));
          emit(common, dump(j));
        }
      } else {
        if (common.format == "csv") {
          emit(common, line_bundle_profile_csv(mesh));
        } else {
          const hermetric::LineBundleReport rep = hermetric::line_bundle_integrability(mesh, example_alpha);
          const auto phi = hermetric::GridFunction::sample(mesh, [](hermetric::Complex z) { return std::log(std::norm(z)); });
          json j = hermetric::io::to_json(rep);
          j["psh_phi"] = hermetric::io::to_json(hermetric::psh_check(phi, kPshRadii));
          emit(common, dump(j));
        }
      }
    } else if (*integrability) {
      const json doc = hermetric::io::read_json_file(file1);
      if (doc.is_array()) {
        if (!h0_file.empty()) throw hermetric::PreconditionError("--h0 is taken from the manifest entries");
        emit(common, dump(hermetric::io::to_json(
                         hermetric::integrability_report(hermetric::io::read_manifest(file1, common.alpha)))));
      } else {
        const auto sigma = hermetric::io::singular_section_from_json(doc, common.alpha);
        const auto h0 = h0_file.empty() ? hermetric::MetricSection::identity(sigma.mesh()) : load_metric(h0_file, common);
        json j = hermetric::io::to_json(hermetric::integrability_report(sigma, h0));
        j["boundedness_bound"] = hermetric::boundedness_bound(sigma, h0);
        emit(common, dump(j));
      }
    } else if (*completion) {
      const hermetric::DiskMesh mesh(nr, ntheta);
      emit(common, dump(hermetric::io::to_json(hermetric::completion_demo(mesh, completion_rank, example_alpha, steps))));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
