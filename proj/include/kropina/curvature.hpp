#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kropina/algebra.hpp"
#include "kropina/errors.hpp"
#include "kropina/metric.hpp"
#include "kropina/report.hpp"

namespace kropina {

/// Bundles a validated (algebra, split, metric) triple and the cached
/// factorizations needed for curvature work. Construction runs the full
/// structural checks and refuses defective data, so everything downstream
/// may assume a genuine invariant metric on a reductive split.
class CurvatureContext {
 public:
  CurvatureContext(LieAlgebra alg, ReductiveSplit split, InvariantMetric metric)
      : alg_(std::move(alg)),
        split_(std::move(split)),
        metric_(std::move(metric)) {
    const int n = alg_.dim();
    if (split_.dim() != n || metric_.dim() != n)
      throw DimensionMismatch("algebra, split, and metric dimensions disagree");
    CheckReport structural;
    structural.merge(alg_.check_jacobi());
    structural.merge(check_split(alg_, split_));
    structural.merge(check_metric(alg_, split_, metric_));
    if (!structural.passed())
      throw ValidationError("structural checks failed: " +
                            structural.failure_summary());

    const int m = split_.m_dim();
    selector_m_ = Mat::Zero(n, m);
    for (int a = 0; a < m; ++a) selector_m_(split_.m_indices()[a], a) = 1.0;
    gram_m_ = selector_m_.transpose() * metric_.gram() * selector_m_;
    gram_m_llt_.compute(gram_m_);
    gram_full_llt_.compute(metric_.gram());
    if (gram_m_llt_.info() != Eigen::Success ||
        gram_full_llt_.info() != Eigen::Success)
      throw ValidationError("Gram matrix is not positive definite");
    // Columns of onb_m_ form a <,>-orthonormal basis of m inside g.
    const Mat l = gram_m_llt_.matrixL();
    onb_m_ = selector_m_ *
             l.transpose().triangularView<Eigen::Upper>().solve(
                 Mat::Identity(m, m));
  }

  const LieAlgebra& algebra() const { return alg_; }
  const ReductiveSplit& split() const { return split_; }
  const InvariantMetric& metric() const { return metric_; }
  int dim() const { return alg_.dim(); }
  int m_dim() const { return split_.m_dim(); }

  /// n x m_dim matrix whose columns are a <,>-orthonormal basis of m.
  const Mat& onb_m() const { return onb_m_; }

  bool trivial_h() const { return split_.h_dim() == 0; }

  bool phi_is_identity(double tol = kStructuralTol) const {
    return (metric_.phi() - Mat::Identity(dim(), dim()))
               .lpNorm<Eigen::Infinity>() <= tol;
  }

  /// Throws unless x lies in m up to rounding.
  void require_m(const Vec& x, const char* what = "vector") const {
    const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    const double off = split_.project_h(x).lpNorm<Eigen::Infinity>();
    if (off > kStructuralTol * scale)
      throw ValidationError(std::string(what) +
                            " must lie in the tangent summand m (off-m part " +
                            std::to_string(off) + ")");
  }

  /// Curvature pairing <R(x, y)z, w> of the invariant metric, for x, y, z, w
  /// in m. Sign convention: R(x, y) = [nabla_x, nabla_y] - nabla_[x, y],
  /// so <R(u, y)y, u> is the (unnormalized) sectional numerator.
  double puttmann_pairing(const Vec& x, const Vec& y, const Vec& z,
                          const Vec& w) const {
    require_m(x, "x");
    require_m(y, "y");
    require_m(z, "z");
    require_m(w, "w");
    const auto& alg = alg_;
    const auto& g = metric_;
    const Vec xy = alg.bracket(x, y);
    const Vec zw = alg.bracket(z, w);
    const double half =
        0.5 * (g.inner0(b_minus(alg, g, x, y), zw) +
               g.inner0(xy, b_minus(alg, g, z, w)));
    const double quarter =
        0.25 * (g.inner(alg.bracket(x, w), split_.project_m(alg.bracket(y, z))) -
                g.inner(alg.bracket(x, z), split_.project_m(alg.bracket(y, w))) -
                2.0 * g.inner(xy, split_.project_m(zw)));
    const double plus =
        g.inner0(b_plus(alg, g, x, w), g.phi_inverse(b_plus(alg, g, y, z))) -
        g.inner0(b_plus(alg, g, x, z), g.phi_inverse(b_plus(alg, g, y, w)));
    return -(half + quarter + plus);
  }

  /// R(u, y)y as a vector in m, recovered from the pairing against the
  /// m-basis through the induced Gram matrix.
  Vec curvature_vector(const Vec& u, const Vec& y) const {
    const int m = split_.m_dim();
    Vec rhs(m);
    for (int a = 0; a < m; ++a)
      rhs(a) = puttmann_pairing(u, y, y,
                                alg_.basis_vector(split_.m_indices()[a]));
    return selector_m_ * gram_m_llt_.solve(rhs);
  }

  /// Residual of <x, [z, y]_m> + <[z, x]_m, y> = 0 over the m-basis.
  double naturally_reductive_residual() const {
    double worst = 0.0;
    for (int zi : split_.m_indices())
      for (int xi : split_.m_indices())
        for (int yi : split_.m_indices()) {
          const Vec z = alg_.basis_vector(zi);
          const Vec x = alg_.basis_vector(xi);
          const Vec y = alg_.basis_vector(yi);
          const double r =
              metric_.inner(x, split_.project_m(alg_.bracket(z, y))) +
              metric_.inner(split_.project_m(alg_.bracket(z, x)), y);
          worst = std::max(worst, std::abs(r));
        }
    return worst;
  }

  CheckReport naturally_reductive_check() const {
    CheckReport report;
    report.add(make_check("naturally_reductive", naturally_reductive_residual(),
                          kStructuralTol));
    return report;
  }

  /// R(u, y)y through the closed form valid on naturally reductive spaces:
  /// (1/4)[y, [u, y]_m]_m + [y, [u, y]_h].
  Vec naturally_reductive_r(const Vec& u, const Vec& y) const {
    require_m(u, "u");
    require_m(y, "y");
    const Vec uy = alg_.bracket(u, y);
    return 0.25 * split_.project_m(alg_.bracket(y, split_.project_m(uy))) +
           alg_.bracket(y, split_.project_h(uy));
  }

  /// R(u, y)y through the bi-invariant closed form -(1/4)[[u, y], y],
  /// meaningful when phi is the identity and h is trivial.
  Vec bi_invariant_r(const Vec& u, const Vec& y) const {
    require_m(u, "u");
    require_m(y, "y");
    return -0.25 * alg_.bracket(alg_.bracket(u, y), y);
  }

  /// Levi-Civita connection of the left-invariant metric, via the Koszul
  /// formula. Only available when h is trivial, where left-invariant vector
  /// fields realize the whole tangent space.
  Vec koszul_nabla(const Vec& u, const Vec& v) const {
    if (!trivial_h())
      throw ValidationError(
          "koszul_nabla requires a trivial isotropy subalgebra");
    const int n = alg_.dim();
    Vec rhs(n);
    for (int j = 0; j < n; ++j) {
      const Vec w = alg_.basis_vector(j);
      rhs(j) = metric_.inner(alg_.bracket(u, v), w) -
               metric_.inner(alg_.bracket(v, w), u) +
               metric_.inner(alg_.bracket(w, u), v);
    }
    return 0.5 * gram_full_llt_.solve(rhs);
  }

  /// Curvature tensor assembled directly from iterated covariant
  /// derivatives. Slow, but independent of the closed-form pairing; used as
  /// an oracle in the comparison harness.
  Vec oracle_curvature(const Vec& x, const Vec& y, const Vec& z) const {
    return koszul_nabla(x, koszul_nabla(y, z)) -
           koszul_nabla(y, koszul_nabla(x, z)) -
           koszul_nabla(alg_.bracket(x, y), z);
  }

  Vec oracle_r(const Vec& u, const Vec& y) const {
    return oracle_curvature(u, y, y);
  }

 private:
  LieAlgebra alg_;
  ReductiveSplit split_;
  InvariantMetric metric_;
  Mat selector_m_;
  Mat gram_m_;
  Mat onb_m_;
  Eigen::LLT<Mat> gram_m_llt_;
  Eigen::LLT<Mat> gram_full_llt_;
};

}  // namespace kropina
