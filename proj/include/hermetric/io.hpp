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

// File formats.
//
//   matrix:   {"re": [[...]], "im": [[...]]}, row-major r x r
//   section:  {"rank": r, "points": [{"id": n, "weight": w, "alpha": a, "h": matrix}]}
//   tangent:  same, matrix key "v"; gauge transform: key "phi"
//   singular: same as section; "h" may be null on points listed in an
//             optional top-level "nullset": [ids]
//   manifest: [{"level": L, "path": "sigma.json", "h0": "h0.json"?}, ...]
//   geodesic trace (CSV): t, point_id, then h_ij re/im pairs, row-major

#pragma once

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hermetric/completion.hpp"
#include "hermetric/disk.hpp"
#include "hermetric/errors.hpp"
#include "hermetric/linalg.hpp"
#include "hermetric/section.hpp"
#include "hermetric/suites.hpp"

namespace hermetric::io {

using nlohmann::json;

inline json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

// "im" may be omitted for real matrices.
inline ComplexMatrix matrix_from_json(const json& j, int rank) {
  if (!j.is_object() || !j.contains("re")) throw ParseError("matrix must be an object with key \"re\"");
  const json& re = j.at("re");
  const json* im = j.contains("im") ? &j.at("im") : nullptr;
  auto check_rows = [rank](const json& a, const char* name) {
    if (!a.is_array() || static_cast<int>(a.size()) != rank) {
      throw ParseError(std::string("matrix \"") + name + "\" must have " + std::to_string(rank) + " rows");
    }
    for (const json& row : a) {
      if (!row.is_array() || static_cast<int>(row.size()) != rank) {
        throw ParseError(std::string("matrix \"") + name + "\" rows must have " + std::to_string(rank) + " entries");
      }
      for (const json& x : row)
        if (!x.is_number()) throw ParseError(std::string("matrix \"") + name + "\" has a non-numeric entry");
    }
  };
  check_rows(re, "re");
  if (im) check_rows(*im, "im");
  ComplexMatrix m(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int k = 0; k < rank; ++k)
      m(i, k) = Complex(re[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>(),
                        im ? (*im)[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>() : 0.0);
  return m;
}

// Mesh and the raw per-point matrix json (null allowed) under `key`.
struct ParsedPoints {
  MeshRef mesh;
  std::vector<const json*> values;  // aligned with mesh order
  std::set<std::int64_t> nullset;
};

// A point without "alpha" takes the document-level "alpha", then
// `default_alpha`; if neither is present the point is rejected.
inline ParsedPoints parse_points(const json& doc, const char* key, std::optional<double> default_alpha = std::nullopt) {
  if (!doc.is_object()) throw ParseError("section document must be a JSON object");
  if (!doc.contains("rank") || !doc.at("rank").is_number_integer()) throw ParseError("missing integer \"rank\"");
  if (!doc.contains("points") || !doc.at("points").is_array()) throw ParseError("missing array \"points\"");
  const int rank = doc.at("rank").get<int>();
  if (doc.contains("alpha")) {
    if (!doc.at("alpha").is_number()) throw ParseError("document-level \"alpha\" must be numeric");
    default_alpha = doc.at("alpha").get<double>();
  }
  std::vector<MeshPoint> pts;
  std::vector<std::pair<std::int64_t, const json*>> raw;
  for (const json& p : doc.at("points")) {
    if (!p.is_object() || !p.contains("id") || !p.at("id").is_number_integer()) {
      throw ParseError("point " + std::to_string(pts.size()) + " (by position) lacks an integer \"id\"");
    }
    const std::int64_t id = p.at("id").get<std::int64_t>();
    const std::string where = "point " + std::to_string(id);
    if (!p.contains("weight") || !p.at("weight").is_number()) throw ParseError(where + ": missing numeric \"weight\"");
    double alpha = 0.0;
    if (p.contains("alpha")) {
      if (!p.at("alpha").is_number()) throw ParseError(where + ": \"alpha\" must be numeric");
      alpha = p.at("alpha").get<double>();
    } else if (default_alpha) {
      alpha = *default_alpha;
    } else {
      throw ParseError(where + ": missing numeric \"alpha\" and no default given");
    }
    if (!p.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
    pts.push_back({id, p.at("weight").get<double>(), alpha});
    raw.emplace_back(id, &p.at(key));
  }
  ParsedPoints out;
  try {
    out.mesh = QuadratureMesh::make(rank, std::move(pts));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& r : raw) out.values.push_back(r.second);
  if (doc.contains("nullset")) {
    for (const json& id : doc.at("nullset")) out.nullset.insert(id.get<std::int64_t>());
  }
  return out;
}

namespace detail {

template <typename F>
auto parse_at(std::int64_t id, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError("point " + std::to_string(id) + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError("point " + std::to_string(id) + ": " + e.what());
  }
}

}  // namespace detail

inline MetricSection metric_section_from_json(const json& doc, std::optional<double> default_alpha = std::nullopt) {
  const ParsedPoints pp = parse_points(doc, "h", default_alpha);
  std::vector<PosDefMatrix> values;
  for (size_t i = 0; i < pp.values.size(); ++i) {
    const std::int64_t id = pp.mesh->point(i).id;
    values.push_back(detail::parse_at(id, [&] {
      if (pp.values[i]->is_null()) throw ParseError("degenerate value in a smooth metric section");
      return PosDefMatrix(matrix_from_json(*pp.values[i], pp.mesh->rank()));
    }));
  }
  return MetricSection(pp.mesh, std::move(values));
}

inline TangentSection tangent_section_from_json(const json& doc, std::optional<double> default_alpha = std::nullopt) {
  const ParsedPoints pp = parse_points(doc, "v", default_alpha);
  std::vector<HermitianMatrix> values;
  for (size_t i = 0; i < pp.values.size(); ++i) {
    values.push_back(detail::parse_at(pp.mesh->point(i).id, [&] {
      return HermitianMatrix(matrix_from_json(*pp.values[i], pp.mesh->rank()));
    }));
  }
  return TangentSection(pp.mesh, std::move(values));
}

inline GaugeTransform gauge_from_json(const json& doc, std::optional<double> default_alpha = std::nullopt) {
  const ParsedPoints pp = parse_points(doc, "phi", default_alpha);
  std::vector<ComplexMatrix> values;
  for (size_t i = 0; i < pp.values.size(); ++i) {
    values.push_back(detail::parse_at(pp.mesh->point(i).id, [&] { return matrix_from_json(*pp.values[i], pp.mesh->rank()); }));
  }
  try {
    return GaugeTransform(pp.mesh, std::move(values));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline SingularSection singular_section_from_json(const json& doc, std::optional<double> default_alpha = std::nullopt) {
  const ParsedPoints pp = parse_points(doc, "h", default_alpha);
  std::vector<std::optional<PosDefMatrix>> values;
  for (size_t i = 0; i < pp.values.size(); ++i) {
    const std::int64_t id = pp.mesh->point(i).id;
    if (pp.values[i]->is_null()) {
      values.emplace_back(std::nullopt);
    } else {
      values.emplace_back(detail::parse_at(id, [&] { return PosDefMatrix(matrix_from_json(*pp.values[i], pp.mesh->rank())); }));
    }
  }
  return SingularSection(pp.mesh, std::move(values), pp.nullset);
}

template <typename Field, typename ToMatrix>
json field_to_json(const Field& f, const char* key, ToMatrix&& to_matrix) {
  json pts = json::array();
  const QuadratureMesh& mesh = *f.mesh();
  for (size_t i = 0; i < f.size(); ++i) {
    const MeshPoint& p = mesh.point(i);
    pts.push_back(json{{"id", p.id}, {"weight", p.weight}, {"alpha", p.alpha}, {key, to_matrix(f[i])}});
  }
  return json{{"rank", mesh.rank()}, {"points", std::move(pts)}};
}

inline json to_json(const MetricSection& h) {
  return field_to_json(h, "h", [](const PosDefMatrix& m) { return matrix_to_json(m.matrix()); });
}
inline json to_json(const TangentSection& v) {
  return field_to_json(v, "v", [](const HermitianMatrix& m) { return matrix_to_json(m.matrix()); });
}
inline json to_json(const GaugeTransform& g) {
  return field_to_json(g, "phi", [](const ComplexMatrix& m) { return matrix_to_json(m); });
}
inline json to_json(const SingularSection& s) {
  json doc = field_to_json(s, "h", [](const std::optional<PosDefMatrix>& m) {
    return m ? matrix_to_json(m->matrix()) : json(nullptr);
  });
  if (!s.nullset().empty()) doc["nullset"] = s.nullset();
  return doc;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Reads a refinement manifest; paths are relative to the manifest. Without an
// "h0" entry the reference is the identity metric on the level's mesh.
inline std::vector<RefinementLevel> read_manifest(const std::filesystem::path& path,
                                                  std::optional<double> default_alpha = std::nullopt) {
  const json doc = read_json_file(path);
  if (!doc.is_array()) throw ParseError("refinement manifest must be a JSON array");
  const std::filesystem::path base = path.parent_path();
  std::vector<RefinementLevel> levels;
  for (const json& e : doc) {
    if (!e.is_object() || !e.contains("level") || !e.contains("path")) {
      throw ParseError("manifest entries need \"level\" and \"path\"");
    }
    SingularSection sigma = singular_section_from_json(read_json_file(base / e.at("path").get<std::string>()), default_alpha);
    MetricSection h0 = e.contains("h0") ? metric_section_from_json(read_json_file(base / e.at("h0").get<std::string>()), default_alpha)
                                        : MetricSection::identity(sigma.mesh());
    levels.push_back(RefinementLevel{e.at("level").get<double>(), std::move(sigma), std::move(h0)});
  }
  return levels;
}

// ---------------------------------------------------------------------------
// CSV geodesic traces.

inline std::string geodesic_csv_header(int rank) {
  std::ostringstream os;
  os << "t,point_id";
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) os << ",h" << i << j << "_re,h" << i << j << "_im";
  os << "\n";
  return os.str();
}

// Rows for t = k / (steps - 1), k = 0..steps-1, each listing every point.
inline std::string geodesic_csv(const MetricSection& h1, const MetricSection& h2, int steps) {
  if (steps < 2) throw PreconditionError("geodesic trace needs at least 2 steps");
  const SectionGeodesic g(h1, h2);
  std::ostringstream os;
  os << std::setprecision(17);
  os << geodesic_csv_header(h1.mesh()->rank());
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    const MetricSection at = g(t);
    for (size_t i = 0; i < at.size(); ++i) {
      os << t << "," << at.id(i);
      const ComplexMatrix& m = at[i].matrix();
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) os << "," << m(a, b).real() << "," << m(a, b).imag();
      os << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Reports.

inline json to_json(const IntegrabilityReport& r) {
  json j{{"l2_log_lambda_min", r.l2_log_lambda_min},
         {"l2_log_lambda_max", r.l2_log_lambda_max},
         {"l2_log_det", r.l2_log_det},
         {"l2_distance", r.l2_distance},
         {"is_l2", r.is_l2}};
  j["refinement_trend"] = r.refinement_trend ? json(*r.refinement_trend) : json(nullptr);
  j["growth_exponent_limit"] = kGrowthExponentLimit;
  if (!r.levels.empty()) {
    j["levels"] = r.levels;
    j["level_norms"] = r.level_norms;
  }
  return j;
}

inline json to_json(const CauchyReport& r) {
  return json{{"factor", r.factor},
              {"step_distances", r.step_distances},
              {"partial_sums", r.partial_sums},
              {"limit_distances", r.limit_distances},
              {"limit_formula", r.limit_formula},
              {"max_relative_mismatch", r.max_relative_mismatch}};
}

inline json to_json(const Cat0Report& r) {
  return json{{"d_pq", r.d_pq},
              {"d_pr", r.d_pr},
              {"d_qr", r.d_qr},
              {"d_pm", r.d_pm},
              {"cn_slack", r.cn_slack},
              {"comparison_distance", r.comparison_distance},
              {"actual_distance", r.actual_distance},
              {"comparison_slack", r.comparison_slack},
              {"degenerate", r.degenerate}};
}

inline json to_json(const PshReport& r) {
  json skipped = json::array();
  for (const Complex& c : r.skipped_centers) skipped.push_back(json::array({c.real(), c.imag()}));
  return json{{"max_violation", r.tested > 0 ? json(r.max_violation) : json(nullptr)},
              {"pass", r.pass},
              {"tolerance", r.tolerance},
              {"tested_centers", r.tested},
              {"skipped_centers", std::move(skipped)}};
}

inline json to_json(const RaufiReport& r) {
  return json{{"mesh", {{"n_r", r.n_r}, {"n_theta", r.n_theta}}},
              {"alpha", r.alpha},
              {"log_det_integral", r.log_det_integral},
              {"log_det_target_8pi", r.log_det_target},
              {"log_det_relative_error", r.log_det_relative_error},
              {"distance_integral", r.distance_integral},
              {"distance_integral_numeric", r.distance_integral_numeric},
              {"integrability", to_json(r.integrability)},
              {"max_lambda", r.max_lambda},
              {"max_lambda_bound", r.max_lambda_bound},
              {"max_det_identity_error", r.max_det_identity_error},
              {"eigenvalue_note",
               {{"claimed", "double eigenvalue |z|^2"},
                {"actual", "(1 + 2|z|^2 -+ sqrt(1 + 4|z|^2)) / 2"},
                {"max_gap", r.double_eigenvalue_claim_gap}}}};
}

inline json to_json(const LineBundleReport& r) {
  return json{{"mesh", {{"n_r", r.n_r}, {"n_theta", r.n_theta}}},
              {"alpha", r.alpha},
              {"phi_l2_squared", r.phi_l2_squared},
              {"phi_target_2pi", r.phi_target},
              {"phi_relative_error", r.phi_relative_error},
              {"distance_to_reference", r.distance_to_reference},
              {"distance_formula", r.distance_formula},
              {"integrability", to_json(r.integrability)}};
}

inline json to_json(const CompletionDemo& d) {
  return json{{"rank", d.rank},
              {"alpha", d.alpha},
              {"truncation", to_json(d.truncation)},
              {"geometric", to_json(d.geometric)},
              {"geometric_sum", d.geometric_sum},
              {"geometric_expected", d.geometric_expected},
              {"geometric_relative_error", d.geometric_relative_error}};
}

inline json to_json(const SectionSectionalCurvature& k) {
  return json{{"sectional_curvature", k.value},
              {"orthonormalized", k.orthonormalized},
              {"orthonormality_defect", k.orthonormality_defect}};
}

inline json to_json(const PropertyResult& p) {
  return json{{"name", p.name},
              {"kind", p.kind == PropertyResult::Kind::kUpper ? "at_most" : "at_least"},
              {"worst", p.worst},
              {"tolerance", p.bound},
              {"evaluations", p.evaluations},
              {"pass", p.pass()}};
}

inline json to_json(const SuiteReport& r) {
  json props = json::array();
  for (const PropertyResult& p : r.properties) props.push_back(to_json(p));
  return json{{"suite", r.suite}, {"seed", r.seed}, {"samples", r.samples}, {"properties", std::move(props)},
              {"pass", r.pass()}};
}

}  // namespace hermetric::io
