#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "kropina/algebra.hpp"
#include "kropina/curvature.hpp"
#include "kropina/errors.hpp"
#include "kropina/metric.hpp"
#include "kropina/report.hpp"

namespace kropina {

/// A flag: flagpole direction y together with a transverse direction u.
struct Flag {
  Vec y;
  Vec u;
};

/// Flag curvature of one flag, through every implemented route.
///
/// k_direct is the ratio definition evaluated with the exact fundamental
/// tensor and needs no normalization of the flag. The two closed-form values
/// k_theorem_consistent and k_theorem_printed differ in one power of the
/// 1-form value along the flagpole; they agree exactly when that value is 1.
/// See README.md for the distinction.
struct FlagCurvatureResult {
  double k_direct = 0.0;
  double k_theorem_consistent = 0.0;
  double k_theorem_printed = 0.0;
  double beta_y = 0.0;  ///< 1-form value on the normalized flagpole
  bool orthonormal_flag = false;
  double residual_consistent_vs_direct = 0.0;
  double residual_printed_vs_direct = 0.0;
};

/// Invariant Kropina metric F(y) = <y, y> / <x, y> on a reductive
/// homogeneous space, built from a curvature context and an invariant
/// vector field x in m.
class KropinaStructure {
 public:
  KropinaStructure(CurvatureContext ctx, Vec x_field)
      : ctx_(std::move(ctx)), x_(std::move(x_field)) {
    if (x_.size() != ctx_.dim())
      throw DimensionMismatch("vector field has size " +
                              std::to_string(x_.size()) +
                              ", algebra has dimension " +
                              std::to_string(ctx_.dim()));
    ctx_.require_m(x_, "defining vector field");
    const double nx = ctx_.metric().norm(x_);
    if (!(nx > 0.0))
      throw ValidationError("defining vector field must be nonzero");
    // Invariance of the field under the isotropy action.
    double worst = 0.0;
    for (int h : ctx_.split().h_indices()) {
      const Vec r = ctx_.algebra().bracket(ctx_.algebra().basis_vector(h), x_);
      worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
    }
    if (worst > kStructuralTol * std::max(1.0, x_.lpNorm<Eigen::Infinity>()))
      throw ValidationError(
          "defining vector field is not isotropy invariant (residual " +
          std::to_string(worst) + ")");
  }

  const CurvatureContext& context() const { return ctx_; }
  const Vec& x_field() const { return x_; }

  /// The defining 1-form: beta(y) = <x, y>.
  double beta(const Vec& y) const { return ctx_.metric().inner(x_, y); }

  /// Throws DegenerateDirection when y is (nearly) orthogonal to the
  /// defining field, where the Kropina norm blows up.
  void require_admissible(const Vec& y) const {
    ctx_.require_m(y, "y");
    const double scale =
        ctx_.metric().norm(y) * ctx_.metric().norm(x_);
    if (std::abs(beta(y)) < kDegeneracyTol * scale)
      throw DegenerateDirection(
          "direction is degenerate for the Kropina metric: |<x, y>| = " +
          std::to_string(std::abs(beta(y))) + " against scale " +
          std::to_string(scale));
  }

  double kropina_f(const Vec& y) const {
    require_admissible(y);
    return ctx_.metric().inner(y, y) / beta(y);
  }

  /// Fundamental tensor g_y(u, v) in closed form. With b = <y, x> and
  /// q = <y, y>:
  ///   g_y(u, v) = b^-4 [ (2<y,u>b - <u,x>q)(2<y,v>b - <v,x>q)
  ///               + q ( b (2<u,v>b + 2<y,v><u,x> - 2<v,x><y,u>)
  ///                     - 2<u,x>(2<y,v>b - <v,x>q) ) ].
  double g_y(const Vec& y, const Vec& u, const Vec& v) const {
    require_admissible(y);
    ctx_.require_m(u, "u");
    ctx_.require_m(v, "v");
    const auto& g = ctx_.metric();
    const double b = beta(y);
    const double q = g.inner(y, y);
    const double yu = g.inner(y, u);
    const double yv = g.inner(y, v);
    const double ux = g.inner(u, x_);
    const double vx = g.inner(v, x_);
    const double uv = g.inner(u, v);
    const double du = 2.0 * yu * b - ux * q;
    const double dv = 2.0 * yv * b - vx * q;
    const double inner =
        du * dv +
        q * (b * (2.0 * uv * b + 2.0 * yv * ux - 2.0 * vx * yu) - 2.0 * ux * dv);
    return inner / (b * b * b * b);
  }

  /// Fundamental tensor through a second-order finite difference of F^2,
  /// as an independent cross-check of g_y. A nonpositive step selects
  /// 1e-4 times the metric norm of y. The Richardson pass re-evaluates at
  /// half step and cancels the leading error term.
  double g_y_fd(const Vec& y, const Vec& u, const Vec& v, double step = 0.0,
                bool richardson = false) const {
    require_admissible(y);
    if (step <= 0.0) step = 1e-4 * ctx_.metric().norm(y);
    auto f2 = [this](const Vec& z) {
      const double f = kropina_f(z);
      return f * f;
    };
    auto stencil = [&](double h) {
      return 0.5 *
             (f2(y + h * u + h * v) - f2(y + h * u - h * v) -
              f2(y - h * u + h * v) + f2(y - h * u - h * v)) /
             (4.0 * h * h);
    };
    const double coarse = stencil(step);
    if (!richardson) return coarse;
    return (4.0 * stencil(0.5 * step) - coarse) / 3.0;
  }

  /// Flag curvature straight from the definition,
  ///   K = g_y(r, u) / (g_y(y, y) g_y(u, u) - g_y(y, u)^2),
  /// given r = R(u, y)y. Invariant under reparametrization of the flag, so
  /// no orthonormalization is applied.
  double flag_curvature_direct(const Flag& flag, const Vec& r_vec) const {
    const double gyy = g_y(flag.y, flag.y, flag.y);
    const double guu = g_y(flag.y, flag.u, flag.u);
    const double gyu = g_y(flag.y, flag.y, flag.u);
    const double denom = gyy * guu - gyu * gyu;
    if (std::abs(denom) < 1e-12)
      throw DegenerateFlag("flag is degenerate: g_y Gram determinant " +
                           std::to_string(denom));
    return g_y(flag.y, r_vec, flag.u) / denom;
  }

  /// Rescales the flagpole to unit length and replaces u by its normalized
  /// component orthogonal to y, in the underlying metric. The flag plane is
  /// unchanged.
  Flag orthonormalize(const Flag& flag) const {
    const auto& g = ctx_.metric();
    ctx_.require_m(flag.y, "y");
    ctx_.require_m(flag.u, "u");
    const double ny = g.norm(flag.y);
    if (!(ny > 0.0)) throw DegenerateFlag("flagpole is the zero vector");
    const Vec y = flag.y / ny;
    const Vec u_perp = flag.u - g.inner(flag.u, y) * y;
    const double nu = g.norm(u_perp);
    if (nu <= 1e-10 * g.norm(flag.u) || !(nu > 0.0))
      throw DegenerateFlag("flag directions are linearly dependent");
    return Flag{y, u_perp / nu};
  }

  /// Flag curvature through the closed form for orthonormal flags. With
  /// a = <u, x>, b = <y, x>, and r = R(u, y)y:
  ///   K = (3 a <r, x> + 2 b^2 <r, u>) / (2 (a/b)^2 + 2)    (consistent)
  ///   K = (3 a <r, x> + 2 b   <r, u>) / (2 (a/b)^2 + 2)    (printed)
  /// The direct ratio definition is evaluated alongside both.
  FlagCurvatureResult flag_curvature_theorem(const Flag& flag) const {
    require_admissible(flag.y);
    const Flag on = orthonormalize(flag);
    require_admissible(on.y);
    const auto& g = ctx_.metric();
    const double a = g.inner(on.u, x_);
    const double b = g.inner(on.y, x_);
    const double rx = ctx_.puttmann_pairing(on.u, on.y, on.y, x_);
    const double ru = ctx_.puttmann_pairing(on.u, on.y, on.y, on.u);
    const double ratio = a / b;
    const double denom = 2.0 * ratio * ratio + 2.0;
    FlagCurvatureResult out;
    out.k_theorem_consistent = (3.0 * a * rx + 2.0 * b * b * ru) / denom;
    out.k_theorem_printed = (3.0 * a * rx + 2.0 * b * ru) / denom;
    out.k_direct =
        flag_curvature_direct(on, ctx_.curvature_vector(on.u, on.y));
    out.beta_y = b;
    out.orthonormal_flag = true;
    out.residual_consistent_vs_direct =
        std::abs(out.k_theorem_consistent - out.k_direct);
    out.residual_printed_vs_direct =
        std::abs(out.k_theorem_printed - out.k_direct);
    return out;
  }

  /// Specialization of the closed form to a bi-invariant underlying metric
  /// (identity endomorphism, trivial isotropy), expressed through the double
  /// bracket d = [[u, y], y]:
  ///   K = -(3 a <d, x> + 2 b^2 <d, u>) / (8 (a/b)^2 + 8)   (consistent)
  ///   K = -(3 a <d, x> + 2 b   <d, u>) / (8 (a/b)^2 + 8)   (printed)
  /// When the endomorphism really is the identity, the result is asserted
  /// against the general closed form; with a deformed endomorphism the
  /// value is still computed and its residual fields carry the deviation.
  FlagCurvatureResult flag_curvature_bi_invariant(const Flag& flag) const {
    if (!ctx_.trivial_h())
      throw ValidationError(
          "bi-invariant flag curvature requires a trivial isotropy "
          "subalgebra");
    require_admissible(flag.y);
    const Flag on = orthonormalize(flag);
    require_admissible(on.y);
    const auto& g = ctx_.metric();
    const auto& alg = ctx_.algebra();
    const double a = g.inner(on.u, x_);
    const double b = g.inner(on.y, x_);
    const Vec d = alg.bracket(alg.bracket(on.u, on.y), on.y);
    const double dx = g.inner(d, x_);
    const double du = g.inner(d, on.u);
    const double ratio = a / b;
    const double denom = 8.0 * ratio * ratio + 8.0;
    FlagCurvatureResult out;
    out.k_theorem_consistent = -(3.0 * a * dx + 2.0 * b * b * du) / denom;
    out.k_theorem_printed = -(3.0 * a * dx + 2.0 * b * du) / denom;
    out.k_direct =
        flag_curvature_direct(on, ctx_.curvature_vector(on.u, on.y));
    out.beta_y = b;
    out.orthonormal_flag = true;
    out.residual_consistent_vs_direct =
        std::abs(out.k_theorem_consistent - out.k_direct);
    out.residual_printed_vs_direct =
        std::abs(out.k_theorem_printed - out.k_direct);
    if (ctx_.phi_is_identity()) {
      const FlagCurvatureResult general = flag_curvature_theorem(on);
      if (std::abs(out.k_theorem_consistent - general.k_theorem_consistent) >
              1e-10 ||
          std::abs(out.k_theorem_printed - general.k_theorem_printed) > 1e-10)
        throw Error(
            "double-bracket closed form disagrees with the general closed "
            "form on a bi-invariant metric");
    }
    return out;
  }

  /// Checks the Berwald hypothesis proxy: the defining field must be
  /// parallel for the underlying metric. Evaluated through the connection,
  /// so it is only available when the isotropy subalgebra is trivial;
  /// otherwise the item is reported as unchecked.
  CheckReport berwald_hypothesis_check() const {
    CheckReport report;
    if (!ctx_.trivial_h()) {
      CheckItem item;
      item.name = "berwald_nabla_x";
      item.status = CheckStatus::unchecked;
      item.detail =
          "connection test needs a trivial isotropy subalgebra; not evaluated";
      report.add(std::move(item));
      return report;
    }
    double worst = 0.0;
    for (int i = 0; i < ctx_.dim(); ++i) {
      const Vec nx = ctx_.koszul_nabla(ctx_.algebra().basis_vector(i), x_);
      worst = std::max(worst, ctx_.metric().norm(nx));
    }
    report.add(make_check("berwald_nabla_x", worst, kStructuralTol,
                          "max over basis directions of |nabla x|"));
    return report;
  }

 private:
  CurvatureContext ctx_;
  Vec x_;
};

}  // namespace kropina
