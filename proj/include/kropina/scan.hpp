#pragma once

#include <charconv>
#include <cstdint>
#include <json.hpp>
#include <random>
#include <string>
#include <vector>

#include "kropina/curvature.hpp"
#include "kropina/errors.hpp"
#include "kropina/finsler.hpp"

namespace kropina {

/// Shortest representation that parses back to the same double. Keeps scan
/// output byte-stable across reruns and locales.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Uniform direction on the <,>-unit sphere of m: normalized Gaussian
/// coordinates in a <,>-orthonormal basis.
inline Vec random_unit_m(std::mt19937_64& rng, const CurvatureContext& ctx) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec c(ctx.m_dim());
    for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
    const double n = c.norm();
    if (n > 1e-12) return ctx.onb_m() * (c / n);
  }
}

/// Unit direction with the 1-form bounded away from zero, by rejection.
inline Vec random_admissible_unit(std::mt19937_64& rng,
                                  const KropinaStructure& structure,
                                  double beta_floor) {
  const double nx = structure.context().metric().norm(structure.x_field());
  for (int tries = 0; tries < 100000; ++tries) {
    const Vec y = random_unit_m(rng, structure.context());
    if (std::abs(structure.beta(y)) >= beta_floor * nx) return y;
  }
  throw Error("rejection sampling failed: the admissibility floor " +
              std::to_string(beta_floor) + " leaves too little sphere");
}

struct ScanRow {
  std::uint64_t seed = 0;
  int index = 0;
  Vec y;  ///< orthonormalized flagpole, algebra coordinates
  Vec u;  ///< orthonormalized transverse direction
  double beta_y = 0.0;
  double k_direct = 0.0;
  double k_theorem_consistent = 0.0;
  double k_theorem_printed = 0.0;
  double residual_consistent_vs_direct = 0.0;
  double residual_printed_vs_direct = 0.0;
};

struct ScanOptions {
  int samples = 100;
  std::uint64_t seed = 0;
  double beta_floor = 0.05;  ///< admissibility floor for sampled flagpoles
};

/// Evaluates all flag-curvature routes on seeded random orthonormal
/// admissible flags. Deterministic in the seed.
inline std::vector<ScanRow> scan_flags(const KropinaStructure& structure,
                                       const ScanOptions& options) {
  if (options.samples < 0) throw ValidationError("sample count must be >= 0");
  if (structure.context().m_dim() < 2)
    throw ValidationError(
        "flags need a tangent summand of dimension at least 2");
  std::mt19937_64 rng(options.seed);
  std::vector<ScanRow> rows;
  rows.reserve(options.samples);
  for (int i = 0; i < options.samples; ++i) {
    const Vec y = random_admissible_unit(rng, structure, options.beta_floor);
    Flag on{y, y};
    for (;;) {
      const Vec u = random_unit_m(rng, structure.context());
      const double overlap = structure.context().metric().inner(u, y);
      if (1.0 - overlap * overlap > 1e-8) {
        on = structure.orthonormalize(Flag{y, u});
        break;
      }
    }
    const FlagCurvatureResult r = structure.flag_curvature_theorem(on);
    ScanRow row;
    row.seed = options.seed;
    row.index = i;
    row.y = on.y;
    row.u = on.u;
    row.beta_y = r.beta_y;
    row.k_direct = r.k_direct;
    row.k_theorem_consistent = r.k_theorem_consistent;
    row.k_theorem_printed = r.k_theorem_printed;
    row.residual_consistent_vs_direct = r.residual_consistent_vs_direct;
    row.residual_printed_vs_direct = r.residual_printed_vs_direct;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Fixed column order, documented by the header row; a trailing comment
/// line carries the residual maxima when any rows were produced.
inline std::string scan_to_csv(const KropinaStructure& structure,
                               const std::vector<ScanRow>& rows) {
  const int n = structure.context().dim();
  std::string out = "seed,index";
  for (int i = 0; i < n; ++i) out += ",y" + std::to_string(i);
  for (int i = 0; i < n; ++i) out += ",u" + std::to_string(i);
  out +=
      ",beta_y,k_direct,k_theorem_consistent,k_theorem_printed,"
      "residual_consistent_vs_direct,residual_printed_vs_direct\n";
  double max_cons = 0.0;
  double max_printed = 0.0;
  for (const auto& row : rows) {
    out += std::to_string(row.seed) + "," + std::to_string(row.index);
    for (int i = 0; i < n; ++i) out += "," + format_double(row.y(i));
    for (int i = 0; i < n; ++i) out += "," + format_double(row.u(i));
    out += "," + format_double(row.beta_y);
    out += "," + format_double(row.k_direct);
    out += "," + format_double(row.k_theorem_consistent);
    out += "," + format_double(row.k_theorem_printed);
    out += "," + format_double(row.residual_consistent_vs_direct);
    out += "," + format_double(row.residual_printed_vs_direct);
    out += "\n";
    max_cons = std::max(max_cons, row.residual_consistent_vs_direct);
    max_printed = std::max(max_printed, row.residual_printed_vs_direct);
  }
  if (!rows.empty()) {
    out += "# samples=" + std::to_string(rows.size()) +
           " max_residual_consistent_vs_direct=" + format_double(max_cons) +
           " max_residual_printed_vs_direct=" + format_double(max_printed) +
           "\n";
  }
  return out;
}

inline std::string scan_to_json(const KropinaStructure& structure,
                                const std::vector<ScanRow>& rows,
                                const ScanOptions& options) {
  using ojson = nlohmann::ordered_json;
  const int n = structure.context().dim();
  ojson doc = ojson::object();
  doc["seed"] = options.seed;
  doc["samples"] = rows.size();
  ojson out_rows = ojson::array();
  double max_cons = 0.0;
  double max_printed = 0.0;
  for (const auto& row : rows) {
    ojson r = ojson::object();
    r["index"] = row.index;
    ojson y = ojson::array();
    ojson u = ojson::array();
    for (int i = 0; i < n; ++i) {
      y.push_back(row.y(i));
      u.push_back(row.u(i));
    }
    r["y"] = std::move(y);
    r["u"] = std::move(u);
    r["beta_y"] = row.beta_y;
    r["k_direct"] = row.k_direct;
    r["k_theorem_consistent"] = row.k_theorem_consistent;
    r["k_theorem_printed"] = row.k_theorem_printed;
    r["residual_consistent_vs_direct"] = row.residual_consistent_vs_direct;
    r["residual_printed_vs_direct"] = row.residual_printed_vs_direct;
    out_rows.push_back(std::move(r));
    max_cons = std::max(max_cons, row.residual_consistent_vs_direct);
    max_printed = std::max(max_printed, row.residual_printed_vs_direct);
  }
  doc["rows"] = std::move(out_rows);
  doc["summary"] = ojson{{"max_residual_consistent_vs_direct", max_cons},
                         {"max_residual_printed_vs_direct", max_printed}};
  return doc.dump(2) + "\n";
}

}  // namespace kropina
