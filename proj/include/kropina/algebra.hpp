#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "kropina/errors.hpp"
#include "kropina/report.hpp"

namespace kropina {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Residual tolerance for structural identities (Jacobi, subalgebra closure,
/// invariance). These are exact algebraic statements, so anything above
/// rounding noise means the input data is wrong, not imprecise.
inline constexpr double kStructuralTol = 1e-9;

/// Relative tolerance below which a direction counts as degenerate for the
/// metric's 1-form (scaled by the norms involved).
inline constexpr double kDegeneracyTol = 1e-8;

/// One structure constant: [b_i, b_j] contains value * b_k.
struct StructureEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

/// Finite-dimensional real Lie algebra given by structure constants in a
/// fixed basis b_0, ..., b_{n-1}:  [b_i, b_j] = sum_k c[i][j][k] b_k.
class LieAlgebra {
 public:
  /// The full table must be antisymmetric in (i, j) exactly; mismatches are
  /// rejected rather than symmetrized so silent data corruption surfaces.
  LieAlgebra(int dim, std::vector<double> table,
             std::vector<std::string> labels = {})
      : dim_(dim), table_(std::move(table)), labels_(std::move(labels)) {
    if (dim_ <= 0) throw ValidationError("algebra dimension must be positive");
    const std::size_t need =
        static_cast<std::size_t>(dim_) * dim_ * dim_;
    if (table_.size() != need)
      throw DimensionMismatch("structure table has " +
                              std::to_string(table_.size()) +
                              " entries, expected " + std::to_string(need));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          if (c(i, j, k) != -c(j, i, k))
            throw ValidationError(
                "structure table is not antisymmetric at (" +
                std::to_string(i) + "," + std::to_string(j) + "," +
                std::to_string(k) + ")");
    if (labels_.empty()) {
      labels_.reserve(dim_);
      for (int i = 0; i < dim_; ++i) labels_.push_back("b" + std::to_string(i));
    }
    if (static_cast<int>(labels_.size()) != dim_)
      throw DimensionMismatch("expected " + std::to_string(dim_) +
                              " basis labels, got " +
                              std::to_string(labels_.size()));
  }

  /// Builds the table from sparse entries, filling in antisymmetric partners.
  /// An entry with i == j or conflicting duplicates is rejected.
  static LieAlgebra from_entries(int dim,
                                 const std::vector<StructureEntry>& entries,
                                 std::vector<std::string> labels = {}) {
    if (dim <= 0) throw ValidationError("algebra dimension must be positive");
    std::vector<double> table(
        static_cast<std::size_t>(dim) * dim * dim, 0.0);
    std::vector<char> set(table.size(), 0);
    auto idx = [dim](int i, int j, int k) {
      return (static_cast<std::size_t>(i) * dim + j) * dim + k;
    };
    for (const auto& e : entries) {
      if (e.i < 0 || e.i >= dim || e.j < 0 || e.j >= dim || e.k < 0 ||
          e.k >= dim)
        throw ValidationError("structure entry (" + std::to_string(e.i) + "," +
                              std::to_string(e.j) + "," + std::to_string(e.k) +
                              ") out of range for dimension " +
                              std::to_string(dim));
      if (e.i == e.j && e.value != 0.0)
        throw ValidationError("nonzero structure entry with i == j at (" +
                              std::to_string(e.i) + "," + std::to_string(e.j) +
                              "," + std::to_string(e.k) + ")");
      const std::size_t a = idx(e.i, e.j, e.k);
      const std::size_t b = idx(e.j, e.i, e.k);
      if ((set[a] && table[a] != e.value) || (set[b] && table[b] != -e.value))
        throw ValidationError("conflicting structure entries at (" +
                              std::to_string(e.i) + "," + std::to_string(e.j) +
                              "," + std::to_string(e.k) + ")");
      table[a] = e.value;
      table[b] = -e.value;
      set[a] = set[b] = 1;
    }
    return LieAlgebra(dim, std::move(table), std::move(labels));
  }

  int dim() const { return dim_; }

  double structure(int i, int j, int k) const { return c(i, j, k); }

  const std::vector<std::string>& basis_labels() const { return labels_; }

  Vec basis_vector(int i) const {
    if (i < 0 || i >= dim_)
      throw ValidationError("basis index " + std::to_string(i) +
                            " out of range");
    Vec e = Vec::Zero(dim_);
    e(i) = 1.0;
    return e;
  }

  Vec bracket(const Vec& x, const Vec& y) const {
    check_vec(x);
    check_vec(y);
    Vec out = Vec::Zero(dim_);
    for (int i = 0; i < dim_; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < dim_; ++j) {
        if (y(j) == 0.0) continue;
        const double s = x(i) * y(j);
        for (int k = 0; k < dim_; ++k) out(k) += s * c(i, j, k);
      }
    }
    return out;
  }

  /// Max-norm residual of the Jacobi identity over all basis triples.
  CheckReport check_jacobi() const {
    double worst = 0.0;
    int wi = 0, wj = 0, wk = 0;
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        for (int k = j + 1; k < dim_; ++k) {
          const Vec r = bracket(basis_vector(i), bracket(basis_vector(j),
                                                         basis_vector(k))) +
                        bracket(basis_vector(j), bracket(basis_vector(k),
                                                         basis_vector(i))) +
                        bracket(basis_vector(k), bracket(basis_vector(i),
                                                         basis_vector(j)));
          const double res = r.lpNorm<Eigen::Infinity>();
          if (res > worst) {
            worst = res;
            wi = i;
            wj = j;
            wk = k;
          }
        }
    CheckReport report;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "worst triple (%d,%d,%d)", wi, wj,
                  wk);
    report.add(make_check("jacobi_identity", worst, kStructuralTol, detail));
    return report;
  }

 private:
  double c(int i, int j, int k) const {
    return table_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }

  void check_vec(const Vec& v) const {
    if (v.size() != dim_)
      throw DimensionMismatch("vector of size " + std::to_string(v.size()) +
                              " in algebra of dimension " +
                              std::to_string(dim_));
  }

  int dim_;
  std::vector<double> table_;
  std::vector<std::string> labels_;
};

/// Basis-aligned decomposition g = h + m: each basis vector belongs to
/// exactly one of the two summands.
class ReductiveSplit {
 public:
  ReductiveSplit(int dim, std::vector<int> h_indices)
      : dim_(dim), h_indices_(std::move(h_indices)) {
    if (dim_ <= 0) throw ValidationError("split dimension must be positive");
    std::sort(h_indices_.begin(), h_indices_.end());
    for (std::size_t a = 0; a < h_indices_.size(); ++a) {
      const int i = h_indices_[a];
      if (i < 0 || i >= dim_)
        throw ValidationError("isotropy index " + std::to_string(i) +
                              " out of range for dimension " +
                              std::to_string(dim_));
      if (a > 0 && h_indices_[a] == h_indices_[a - 1])
        throw ValidationError("duplicate isotropy index " + std::to_string(i));
    }
    if (static_cast<int>(h_indices_.size()) == dim_)
      throw ValidationError("isotropy subalgebra equals the whole algebra");
    in_h_.assign(dim_, false);
    for (int i : h_indices_) in_h_[i] = true;
    for (int i = 0; i < dim_; ++i)
      if (!in_h_[i]) m_indices_.push_back(i);
  }

  int dim() const { return dim_; }
  int h_dim() const { return static_cast<int>(h_indices_.size()); }
  int m_dim() const { return static_cast<int>(m_indices_.size()); }
  const std::vector<int>& h_indices() const { return h_indices_; }
  const std::vector<int>& m_indices() const { return m_indices_; }
  bool in_h(int i) const { return in_h_[i]; }

  Vec project_m(const Vec& x) const {
    check_vec(x);
    Vec out = x;
    for (int i : h_indices_) out(i) = 0.0;
    return out;
  }

  Vec project_h(const Vec& x) const {
    check_vec(x);
    Vec out = Vec::Zero(dim_);
    for (int i : h_indices_) out(i) = x(i);
    return out;
  }

 private:
  void check_vec(const Vec& x) const {
    if (x.size() != dim_)
      throw DimensionMismatch("vector of size " + std::to_string(x.size()) +
                              " in split of dimension " + std::to_string(dim_));
  }

  int dim_;
  std::vector<int> h_indices_;
  std::vector<int> m_indices_;
  std::vector<bool> in_h_;
};

/// Verifies [h, h] in h (subalgebra) and [h, m] in m (reductivity).
inline CheckReport check_split(const LieAlgebra& alg,
                               const ReductiveSplit& split) {
  if (split.dim() != alg.dim())
    throw DimensionMismatch("split dimension " + std::to_string(split.dim()) +
                            " does not match algebra dimension " +
                            std::to_string(alg.dim()));
  CheckReport report;
  double sub = 0.0;
  for (int i : split.h_indices())
    for (int j : split.h_indices()) {
      const Vec r =
          split.project_m(alg.bracket(alg.basis_vector(i), alg.basis_vector(j)));
      sub = std::max(sub, r.lpNorm<Eigen::Infinity>());
    }
  report.add(make_check("h_subalgebra", sub, kStructuralTol));
  double red = 0.0;
  for (int i : split.h_indices())
    for (int j : split.m_indices()) {
      const Vec r =
          split.project_h(alg.bracket(alg.basis_vector(i), alg.basis_vector(j)));
      red = std::max(red, r.lpNorm<Eigen::Infinity>());
    }
  report.add(make_check("h_m_reductive", red, kStructuralTol));
  return report;
}

}  // namespace kropina
