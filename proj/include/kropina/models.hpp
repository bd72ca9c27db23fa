#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kropina/algebra.hpp"
#include "kropina/curvature.hpp"
#include "kropina/errors.hpp"
#include "kropina/finsler.hpp"
#include "kropina/metric.hpp"
#include "kropina/report.hpp"

namespace kropina {

/// A complete problem instance: algebra, reductive split, invariant metric,
/// and (for Kropina work) the defining vector field.
struct ModelSpec {
  std::string name;
  std::string notes;
  LieAlgebra algebra;
  ReductiveSplit split;
  InvariantMetric metric;
  std::optional<Vec> x_field;
};

inline std::vector<std::string> builtin_model_names() {
  return {"su2_biinvariant", "u2_central_kropina",  "s2_normal",
          "circle_su2_mod_u1", "abelian_2", "abelian_4"};
}

inline ModelSpec builtin_model(const std::string& name) {
  if (name == "su2_biinvariant") {
    LieAlgebra alg = LieAlgebra::from_entries(
        3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}});
    return ModelSpec{name,
                     "compact group su(2) with its bi-invariant round metric",
                     std::move(alg),
                     ReductiveSplit(3, {}),
                     InvariantMetric(Mat::Identity(3, 3), Mat::Identity(3, 3)),
                     std::nullopt};
  }
  if (name == "u2_central_kropina") {
    // b0 spans the center, b1..b3 span an su(2) factor.
    LieAlgebra alg = LieAlgebra::from_entries(
        4, {{1, 2, 3, 1.0}, {2, 3, 1, 1.0}, {3, 1, 2, 1.0}});
    Vec x = Vec::Zero(4);
    x(0) = 1.0;
    return ModelSpec{name,
                     "u(2) with bi-invariant metric and central defining field",
                     std::move(alg),
                     ReductiveSplit(4, {}),
                     InvariantMetric(Mat::Identity(4, 4), Mat::Identity(4, 4)),
                     x};
  }
  if (name == "s2_normal") {
    LieAlgebra alg = LieAlgebra::from_entries(
        3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}});
    return ModelSpec{name,
                     "round 2-sphere as so(3)/so(2) with the normal metric",
                     std::move(alg),
                     ReductiveSplit(3, {2}),
                     InvariantMetric(Mat::Identity(3, 3), Mat::Identity(3, 3)),
                     std::nullopt};
  }
  if (name == "circle_su2_mod_u1") {
    // b0 spans a central circle factor, b1..b3 span su(2); the isotropy
    // u(1) is spanned by b3 and the tangent summand by b0, b1, b2.
    LieAlgebra alg = LieAlgebra::from_entries(
        4, {{1, 2, 3, 1.0}, {2, 3, 1, 1.0}, {3, 1, 2, 1.0}});
    Mat phi = Mat::Identity(4, 4);
    phi(0, 0) = 1.5;
    phi(1, 1) = 0.8;
    phi(2, 2) = 0.8;
    Vec x = Vec::Zero(4);
    x(0) = 1.0;
    return ModelSpec{name,
                     "circle times su(2) over u(1), rescaled invariant metric, "
                     "central defining field",
                     std::move(alg),
                     ReductiveSplit(4, {3}),
                     InvariantMetric(Mat::Identity(4, 4), std::move(phi)),
                     x};
  }
  if (name.rfind("abelian_", 0) == 0) {
    const std::string tail = name.substr(8);
    int n = 0;
    bool digits = !tail.empty();
    for (char c : tail) digits = digits && c >= '0' && c <= '9';
    if (digits) n = std::stoi(tail);
    if (!digits || n < 1 || n > 16)
      throw ValidationError("abelian builtin dimension must be 1..16, got '" +
                            tail + "'");
    LieAlgebra alg = LieAlgebra::from_entries(n, {});
    Vec x = Vec::Zero(n);
    x(0) = 1.0;
    return ModelSpec{name,
                     "abelian algebra of dimension " + std::to_string(n) +
                         " with flat metric and coordinate defining field",
                     std::move(alg),
                     ReductiveSplit(n, {}),
                     InvariantMetric(Mat::Identity(n, n), Mat::Identity(n, n)),
                     x};
  }
  throw ValidationError("unknown builtin model '" + name + "'");
}

/// Draws a random admissible metric endomorphism: <,>0-self-adjoint,
/// identity on h, preserving m, with the induced metric ad(h)-invariant and
/// spectrum on m mapped linearly into [lo, hi]. With lo == hi == 1 the
/// result is the identity. Deterministic in the seed.
inline InvariantMetric random_phi(std::uint64_t seed, const LieAlgebra& alg,
                                  const ReductiveSplit& split, const Mat& q0,
                                  double lo, double hi) {
  if (!(lo > 0.0) || hi < lo)
    throw ValidationError("spectrum bounds must satisfy 0 < lo <= hi");
  const int n = alg.dim();
  const int m = split.m_dim();
  Mat em = Mat::Zero(n, m);
  for (int a = 0; a < m; ++a) em(split.m_indices()[a], a) = 1.0;
  const Mat q0m = em.transpose() * q0 * em;
  Eigen::LLT<Mat> llt(q0m);
  if (llt.info() != Eigen::Success)
    throw ValidationError("q0 is not positive definite on m");
  const Mat l = llt.matrixL();
  // Columns of frame are a <,>0-orthonormal basis of m.
  const Mat frame =
      em * l.transpose().triangularView<Eigen::Upper>().solve(
               Mat::Identity(m, m));

  const int s = m * (m + 1) / 2;
  std::vector<std::pair<int, int>> packed;
  packed.reserve(s);
  for (int p = 0; p < m; ++p)
    for (int q = p; q < m; ++q) packed.emplace_back(p, q);
  auto unpack = [&](const Vec& coeff) {
    Mat sym = Mat::Zero(m, m);
    for (int t = 0; t < s; ++t) {
      sym(packed[t].first, packed[t].second) = coeff(t);
      sym(packed[t].second, packed[t].first) = coeff(t);
    }
    return sym;
  };

  // Null space of S -> [S, ad(z)|m] over z in h: the symmetric commutant.
  Mat null_basis;
  if (split.h_dim() == 0) {
    null_basis = Mat::Identity(s, s);
  } else {
    std::vector<Mat> ads;
    for (int z : split.h_indices()) {
      Mat az(m, m);
      for (int a = 0; a < m; ++a)
        az.col(a) = frame.transpose() * q0 *
                    alg.bracket(alg.basis_vector(z), frame.col(a));
      ads.push_back(std::move(az));
    }
    Mat constraint(static_cast<int>(ads.size()) * m * m, s);
    for (int t = 0; t < s; ++t) {
      const Mat b = unpack(Vec::Unit(s, t));
      for (std::size_t zi = 0; zi < ads.size(); ++zi) {
        const Mat comm = b * ads[zi] - ads[zi] * b;
        constraint.block(static_cast<int>(zi) * m * m, t, m * m, 1) =
            Eigen::Map<const Vec>(comm.data(), m * m);
      }
    }
    Eigen::JacobiSVD<Mat> svd(constraint, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    null_basis = svd.matrixV().rightCols(s - rank);
  }

  Mat sym;
  if (hi == lo) {
    sym = lo * Mat::Identity(m, m);
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec coeff(null_basis.cols());
    for (int i = 0; i < coeff.size(); ++i) coeff(i) = gauss(rng);
    sym = unpack(null_basis * coeff);
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    const double lambda_min = es.eigenvalues().minCoeff();
    const double lambda_max = es.eigenvalues().maxCoeff();
    if (lambda_max - lambda_min <
        1e-12 * std::max(1.0, std::abs(lambda_max))) {
      sym = 0.5 * (lo + hi) * Mat::Identity(m, m);
    } else {
      // A linear spectrum map keeps the commutant membership: it is just
      // alpha I + beta S.
      const double beta = (hi - lo) / (lambda_max - lambda_min);
      const double alpha = lo - beta * lambda_min;
      sym = alpha * Mat::Identity(m, m) + beta * sym;
    }
  }

  Mat phi = Mat::Zero(n, n);
  for (int i : split.h_indices()) phi(i, i) = 1.0;
  phi += frame * sym * frame.transpose() * q0;
  return InvariantMetric(q0, std::move(phi));
}

/// Load-time validation: structural identities of the algebra, split, and
/// metric, plus the defining-field invariants when a field is present.
inline CheckReport structural_report(const ModelSpec& model) {
  CheckReport report;
  report.merge(model.algebra.check_jacobi());
  report.merge(check_split(model.algebra, model.split));
  report.merge(check_metric(model.algebra, model.split, model.metric));
  if (model.x_field) {
    const Vec& x = *model.x_field;
    const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    report.add(make_check("x_in_m",
                          model.split.project_h(x).lpNorm<Eigen::Infinity>(),
                          kStructuralTol * scale));
    {
      CheckItem item;
      item.name = "x_nonzero";
      const double nx = model.metric.norm(x);
      item.status = nx > 0.0 ? CheckStatus::pass : CheckStatus::fail;
      item.residual = nx;
      item.threshold = 0.0;
      item.detail = "value is the metric norm of x; must be positive";
      report.add(std::move(item));
    }
    double worst = 0.0;
    for (int h : model.split.h_indices()) {
      const Vec r = model.algebra.bracket(model.algebra.basis_vector(h), x);
      worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
    }
    report.add(
        make_check("x_isotropy_invariant", worst, kStructuralTol * scale));
  }
  return report;
}

/// Structural checks plus the geometric diagnostics: natural reductivity
/// (informational) and, when a defining field is present, the Berwald
/// hypothesis proxy.
inline CheckReport full_report(const ModelSpec& model) {
  CheckReport report = structural_report(model);
  if (!report.passed()) return report;
  CurvatureContext ctx(model.algebra, model.split, model.metric);
  report.add(make_check("naturally_reductive",
                        ctx.naturally_reductive_residual(), kStructuralTol,
                        "closed-form curvature shortcut applies when this "
                        "passes",
                        /*gating=*/false));
  if (model.x_field) {
    KropinaStructure structure(std::move(ctx), *model.x_field);
    report.merge(structure.berwald_hypothesis_check());
  } else {
    CheckItem item;
    item.name = "berwald_nabla_x";
    item.status = CheckStatus::unchecked;
    item.detail = "model has no defining vector field; hypothesis not "
                  "applicable";
    report.add(std::move(item));
  }
  return report;
}

inline CurvatureContext make_context(const ModelSpec& model) {
  return CurvatureContext(model.algebra, model.split, model.metric);
}

inline KropinaStructure make_kropina(const ModelSpec& model) {
  if (!model.x_field)
    throw ValidationError("model '" + model.name +
                          "' has no defining vector field");
  return KropinaStructure(make_context(model), *model.x_field);
}

}  // namespace kropina
