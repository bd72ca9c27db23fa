#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "kropina/algebra.hpp"
#include "kropina/errors.hpp"
#include "kropina/report.hpp"

namespace kropina {

/// Invariant Riemannian data on a reductive homogeneous space, presented on
/// the Lie algebra: a bi-invariant inner product q0 together with a metric
/// endomorphism phi. The geometric metric is <x, y> = q0(phi x, y), with
/// Gram matrix phi^T q0.
class InvariantMetric {
 public:
  InvariantMetric(Mat q0, Mat phi) : q0_(std::move(q0)), phi_(std::move(phi)) {
    if (q0_.rows() != q0_.cols())
      throw DimensionMismatch("q0 must be square");
    if (phi_.rows() != phi_.cols() || phi_.rows() != q0_.rows())
      throw DimensionMismatch("phi must be square with the same size as q0");
    gram_ = phi_.transpose() * q0_;
    phi_lu_.compute(phi_);
    if (!phi_lu_.isInvertible())
      throw ValidationError("metric endomorphism phi is singular");
  }

  int dim() const { return static_cast<int>(q0_.rows()); }
  const Mat& q0() const { return q0_; }
  const Mat& phi() const { return phi_; }
  const Mat& gram() const { return gram_; }

  double inner0(const Vec& x, const Vec& y) const {
    check_vec(x);
    check_vec(y);
    return x.dot(q0_ * y);
  }

  double inner(const Vec& x, const Vec& y) const {
    check_vec(x);
    check_vec(y);
    return x.dot(gram_ * y);
  }

  double norm(const Vec& x) const { return std::sqrt(inner(x, x)); }

  Vec phi_apply(const Vec& x) const {
    check_vec(x);
    return phi_ * x;
  }

  Vec phi_inverse(const Vec& x) const {
    check_vec(x);
    return phi_lu_.solve(x);
  }

 private:
  void check_vec(const Vec& v) const {
    if (v.size() != q0_.rows())
      throw DimensionMismatch("vector of size " + std::to_string(v.size()) +
                              " against metric of dimension " +
                              std::to_string(q0_.rows()));
  }

  Mat q0_;
  Mat phi_;
  Mat gram_;
  Eigen::FullPivLU<Mat> phi_lu_;
};

/// B_plus(x, y) = ([x, phi y] + [y, phi x]) / 2, the symmetric polarization
/// appearing in the curvature formula.
inline Vec b_plus(const LieAlgebra& alg, const InvariantMetric& metric,
                  const Vec& x, const Vec& y) {
  return 0.5 * (alg.bracket(x, metric.phi_apply(y)) +
                alg.bracket(y, metric.phi_apply(x)));
}

/// B_minus(x, y) = ([phi x, y] + [x, phi y]) / 2, the antisymmetric partner.
inline Vec b_minus(const LieAlgebra& alg, const InvariantMetric& metric,
                   const Vec& x, const Vec& y) {
  return 0.5 * (alg.bracket(metric.phi_apply(x), y) +
                alg.bracket(x, metric.phi_apply(y)));
}

/// Validates the metric data against the algebra and split: q0 must be a
/// bi-invariant inner product, h and m must be q0-orthogonal, and phi must
/// be a <,>0-self-adjoint positive operator fixing h and preserving m.
inline CheckReport check_metric(const LieAlgebra& alg,
                                const ReductiveSplit& split,
                                const InvariantMetric& metric) {
  const int n = alg.dim();
  if (metric.dim() != n || split.dim() != n)
    throw DimensionMismatch("algebra, split, and metric dimensions disagree");
  CheckReport report;
  const Mat& q0 = metric.q0();
  const Mat& phi = metric.phi();

  report.add(make_check("q0_symmetric",
                        (q0 - q0.transpose()).lpNorm<Eigen::Infinity>(),
                        kStructuralTol));

  {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q0 + q0.transpose()));
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double rel = hi > 0.0 ? lo / hi : -1.0;
    CheckItem item;
    item.name = "q0_spd";
    item.status = rel > 1e-10 ? CheckStatus::pass : CheckStatus::fail;
    item.residual = rel;
    item.threshold = 1e-10;
    item.detail = "smallest/largest eigenvalue ratio, must exceed tol";
    report.add(std::move(item));
  }

  {
    // ad-invariance of q0: <[z, x], y>0 + <x, [z, y]>0 = 0 for all basis
    // vectors.
    double worst = 0.0;
    for (int z = 0; z < n; ++z)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const Vec bz = alg.basis_vector(z);
          const double r =
              metric.inner0(alg.bracket(bz, alg.basis_vector(i)),
                            alg.basis_vector(j)) +
              metric.inner0(alg.basis_vector(i),
                            alg.bracket(bz, alg.basis_vector(j)));
          worst = std::max(worst, std::abs(r));
        }
    report.add(make_check("q0_biinvariant", worst, kStructuralTol));
  }

  {
    double worst = 0.0;
    for (int i : split.h_indices())
      for (int j : split.m_indices())
        worst = std::max(worst, std::abs(q0(i, j)));
    report.add(make_check("h_m_orthogonal", worst, kStructuralTol));
  }

  report.add(make_check(
      "phi_selfadjoint",
      (q0 * phi - phi.transpose() * q0).lpNorm<Eigen::Infinity>(),
      kStructuralTol));

  {
    // phi positive with respect to <,>0: the q0-congruent symmetrization must
    // be positive definite.
    Eigen::SelfAdjointEigenSolver<Mat> es(
        0.5 * (q0 * phi + phi.transpose() * q0));
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double rel = hi > 0.0 ? lo / hi : -1.0;
    CheckItem item;
    item.name = "phi_positive";
    item.status = rel > 1e-10 ? CheckStatus::pass : CheckStatus::fail;
    item.residual = rel;
    item.threshold = 1e-10;
    item.detail = "smallest/largest eigenvalue ratio of q0 phi, must exceed tol";
    report.add(std::move(item));
  }

  {
    // phi must act as the identity on h and preserve m.
    double worst = 0.0;
    for (int j : split.h_indices()) {
      for (int i = 0; i < n; ++i) {
        const double want = i == j ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(phi(i, j) - want));
      }
    }
    for (int j : split.m_indices())
      for (int i : split.h_indices())
        worst = std::max(worst, std::abs(phi(i, j)));
    report.add(make_check("phi_blocks", worst, kStructuralTol,
                          "phi fixes h and maps m into m"));
  }

  {
    // The induced metric on m must be invariant under ad(h):
    // <[z, x], y> + <x, [z, y]> = 0 for z in h, x, y in m.
    double worst = 0.0;
    for (int z : split.h_indices())
      for (int i : split.m_indices())
        for (int j : split.m_indices()) {
          const Vec bz = alg.basis_vector(z);
          const double r =
              metric.inner(split.project_m(alg.bracket(bz, alg.basis_vector(i))),
                           alg.basis_vector(j)) +
              metric.inner(alg.basis_vector(i),
                           split.project_m(
                               alg.bracket(bz, alg.basis_vector(j))));
          worst = std::max(worst, std::abs(r));
        }
    report.add(make_check("induced_ad_h_invariant", worst, kStructuralTol));
  }

  return report;
}

}  // namespace kropina
