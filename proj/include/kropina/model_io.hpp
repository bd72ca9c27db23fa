#pragma once

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kropina/errors.hpp"
#include "kropina/models.hpp"

namespace kropina {
namespace detail {

using ojson = nlohmann::ordered_json;

inline ParseError field_error(const std::string& origin,
                              const std::string& field,
                              const std::string& what) {
  return ParseError(origin + ": field '" + field + "': " + what);
}

inline int get_int(const ojson& v, const std::string& origin,
                   const std::string& field) {
  if (!v.is_number_integer())
    throw field_error(origin, field, "expected an integer");
  return v.get<int>();
}

inline double get_num(const ojson& v, const std::string& origin,
                      const std::string& field) {
  if (!v.is_number()) throw field_error(origin, field, "expected a number");
  return v.get<double>();
}

inline Mat get_matrix(const ojson& v, int dim, const std::string& origin,
                      const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw field_error(origin, field,
                      "expected " + std::to_string(dim) + " rows");
  Mat out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw field_error(origin, field,
                        "row " + std::to_string(i) + " must hold " +
                            std::to_string(dim) + " numbers");
    for (int j = 0; j < dim; ++j)
      out(i, j) = get_num(row[j], origin,
                          field + "[" + std::to_string(i) + "][" +
                              std::to_string(j) + "]");
  }
  return out;
}

inline Vec get_vector(const ojson& v, int dim, const std::string& origin,
                      const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw field_error(origin, field,
                      "expected " + std::to_string(dim) + " numbers");
  Vec out(dim);
  for (int i = 0; i < dim; ++i)
    out(i) = get_num(v[i], origin, field + "[" + std::to_string(i) + "]");
  return out;
}

}  // namespace detail

/// Parses the self-describing model format. Required fields: dim, structure,
/// q0. Optional: phi (default identity), h_indices (default empty), x,
/// name, notes, basis_labels. Indices are 0-based; structure lists the
/// entries with i < j and the antisymmetric partners are filled in.
inline ModelSpec parse_model(const std::string& text,
                             const std::string& origin = "<input>") {
  detail::ojson doc;
  try {
    doc = detail::ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!doc.is_object())
    throw ParseError(origin + ": top level must be an object");

  static const std::vector<std::string> known = {
      "name", "notes",     "dim", "basis_labels", "h_indices",
      "structure", "q0",   "phi", "x"};
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == item.key();
    if (!ok) throw ParseError(origin + ": unknown field '" + item.key() + "'");
  }
  for (const char* req : {"dim", "structure", "q0"})
    if (!doc.contains(req))
      throw ParseError(origin + ": missing required field '" +
                       std::string(req) + "'");

  const int dim = detail::get_int(doc["dim"], origin, "dim");
  if (dim < 1 || dim > 64)
    throw detail::field_error(origin, "dim", "must be between 1 and 64");

  std::vector<std::string> labels;
  if (doc.contains("basis_labels")) {
    const auto& v = doc["basis_labels"];
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
      throw detail::field_error(origin, "basis_labels",
                                "expected " + std::to_string(dim) +
                                    " strings");
    for (const auto& s : v) {
      if (!s.is_string())
        throw detail::field_error(origin, "basis_labels", "expected a string");
      labels.push_back(s.get<std::string>());
    }
  }

  std::vector<StructureEntry> entries;
  {
    const auto& v = doc["structure"];
    if (!v.is_array())
      throw detail::field_error(origin, "structure", "expected an array");
    int idx = 0;
    for (const auto& rec : v) {
      const std::string field = "structure[" + std::to_string(idx++) + "]";
      if (!rec.is_object())
        throw detail::field_error(origin, field, "expected an object");
      for (const auto& item : rec.items())
        if (item.key() != "i" && item.key() != "j" && item.key() != "k" &&
            item.key() != "value")
          throw detail::field_error(origin, field,
                                    "unknown key '" + item.key() + "'");
      for (const char* req : {"i", "j", "k", "value"})
        if (!rec.contains(req))
          throw detail::field_error(origin, field,
                                    "missing key '" + std::string(req) + "'");
      StructureEntry e;
      e.i = detail::get_int(rec["i"], origin, field + ".i");
      e.j = detail::get_int(rec["j"], origin, field + ".j");
      e.k = detail::get_int(rec["k"], origin, field + ".k");
      e.value = detail::get_num(rec["value"], origin, field + ".value");
      entries.push_back(e);
    }
  }
  LieAlgebra algebra = [&] {
    try {
      return LieAlgebra::from_entries(dim, entries, std::move(labels));
    } catch (const ValidationError& e) {
      throw ParseError(origin + ": field 'structure': " + e.what());
    }
  }();

  std::vector<int> h_indices;
  if (doc.contains("h_indices")) {
    const auto& v = doc["h_indices"];
    if (!v.is_array())
      throw detail::field_error(origin, "h_indices", "expected an array");
    int idx = 0;
    for (const auto& item : v)
      h_indices.push_back(detail::get_int(
          item, origin, "h_indices[" + std::to_string(idx++) + "]"));
  }
  ReductiveSplit split = [&] {
    try {
      return ReductiveSplit(dim, std::move(h_indices));
    } catch (const ValidationError& e) {
      throw ParseError(origin + ": field 'h_indices': " + e.what());
    }
  }();

  Mat q0 = detail::get_matrix(doc["q0"], dim, origin, "q0");
  Mat phi = doc.contains("phi")
                ? detail::get_matrix(doc["phi"], dim, origin, "phi")
                : Mat::Identity(dim, dim);

  std::optional<Vec> x;
  if (doc.contains("x")) x = detail::get_vector(doc["x"], dim, origin, "x");

  std::string name =
      doc.contains("name") && doc["name"].is_string()
          ? doc["name"].get<std::string>()
          : std::string();
  if (doc.contains("name") && !doc["name"].is_string())
    throw detail::field_error(origin, "name", "expected a string");
  std::string notes;
  if (doc.contains("notes")) {
    if (!doc["notes"].is_string())
      throw detail::field_error(origin, "notes", "expected a string");
    notes = doc["notes"].get<std::string>();
  }

  return ModelSpec{std::move(name),  std::move(notes),
                   std::move(algebra), std::move(split),
                   InvariantMetric(std::move(q0), std::move(phi)),
                   std::move(x)};
}

/// Canonical serialization: stable key order, i < j structure entries
/// sorted, defaults omitted. Serialize/parse/serialize is byte-identical.
inline std::string serialize_model(const ModelSpec& spec) {
  using detail::ojson;
  ojson doc = ojson::object();
  if (!spec.name.empty()) doc["name"] = spec.name;
  if (!spec.notes.empty()) doc["notes"] = spec.notes;
  const int n = spec.algebra.dim();
  doc["dim"] = n;
  bool default_labels = true;
  for (int i = 0; i < n; ++i)
    default_labels = default_labels &&
                     spec.algebra.basis_labels()[i] == "b" + std::to_string(i);
  if (!default_labels) doc["basis_labels"] = spec.algebra.basis_labels();
  if (spec.split.h_dim() > 0) doc["h_indices"] = spec.split.h_indices();
  ojson entries = ojson::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = spec.algebra.structure(i, j, k);
        if (v != 0.0)
          entries.push_back(
              ojson{{"i", i}, {"j", j}, {"k", k}, {"value", v}});
      }
  doc["structure"] = std::move(entries);
  auto matrix_rows = [n](const Mat& mat) {
    ojson rows = ojson::array();
    for (int i = 0; i < n; ++i) {
      ojson row = ojson::array();
      for (int j = 0; j < n; ++j) row.push_back(mat(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["q0"] = matrix_rows(spec.metric.q0());
  if ((spec.metric.phi() - Mat::Identity(n, n)).lpNorm<Eigen::Infinity>() !=
      0.0)
    doc["phi"] = matrix_rows(spec.metric.phi());
  if (spec.x_field) {
    ojson xs = ojson::array();
    for (int i = 0; i < n; ++i) xs.push_back((*spec.x_field)(i));
    doc["x"] = std::move(xs);
  }
  return doc.dump(2) + "\n";
}

/// Parses and then validates; defective models are rejected with the
/// failing checks named. Use parse_model to inspect a defective file.
inline ModelSpec load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ModelSpec spec = parse_model(buf.str(), path);
  const CheckReport report = structural_report(spec);
  if (!report.passed())
    throw ValidationError(path + ": model fails validation: " +
                          report.failure_summary());
  return spec;
}

inline void save_model(const ModelSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  out << serialize_model(spec);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace kropina
