// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Usage: kropina_acceptance <path-to-cli-binary>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "kropina/kropina.hpp"

using namespace kropina;

namespace {

int failures = 0;

void report(int index, bool pass, const std::string& what,
            double worst, double tol) {
  std::printf("criterion %d: %s - %s (worst %.3e vs tol %.3e)\n", index,
              pass ? "PASS" : "FAIL", what.c_str(), worst, tol);
  if (!pass) ++failures;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult result;
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.out.append(buf, got);
  const int status = ::pclose(pipe);
  if (status >= 0 && WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  return result;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

Flag random_on_flag(std::mt19937_64& rng, const KropinaStructure& ks,
                    double beta_floor) {
  const auto& ctx = ks.context();
  for (;;) {
    const Vec y = random_admissible_unit(rng, ks, beta_floor);
    const Vec u = random_unit_m(rng, ctx);
    const double overlap = ctx.metric().inner(u, y);
    if (1.0 - overlap * overlap > 1e-8)
      return ks.orthonormalize(Flag{y, u});
  }
}

/// Unit flagpole with <y, x> = 1 exactly up to rounding, when |x| >= 1:
/// y = x/|x|^2 plus an orthogonal correction restoring unit length.
Vec unit_beta_one_pole(const KropinaStructure& ks) {
  const auto& ctx = ks.context();
  const Vec& x = ks.x_field();
  const double nx2 = ctx.metric().inner(x, x);
  Vec y = x / nx2;
  const double deficit = 1.0 - ctx.metric().inner(y, y);
  if (deficit > 1e-14) {
    for (int i = 0; i < ctx.m_dim(); ++i) {
      Vec v = ctx.onb_m().col(i);
      v -= ctx.metric().inner(v, x) / nx2 * x;
      const double nv = ctx.metric().norm(v);
      if (nv > 1e-8) {
        y += std::sqrt(deficit) / nv * v;
        break;
      }
    }
  }
  return y;
}

const std::vector<std::string> kKropinaModels = {
    "u2_central_kropina", "circle_su2_mod_u1", "abelian_2", "abelian_4"};

void criterion_1() {
  const double tol = 1e-6;
  double worst = 0.0;
  for (const auto& name : kKropinaModels) {
    const KropinaStructure ks = make_kropina(builtin_model(name));
    std::mt19937_64 rng(101);
    for (int s = 0; s < 200; ++s) {
      const Vec y = random_admissible_unit(rng, ks, 0.25);
      const Vec u = random_unit_m(rng, ks.context());
      const Vec v = random_unit_m(rng, ks.context());
      const double exact = ks.g_y(y, u, v);
      const double fd = ks.g_y_fd(y, u, v, 0.0, /*richardson=*/true);
      worst = std::max(worst, rel(exact, fd));
    }
  }
  report(1, worst <= tol,
         "fundamental tensor closed form vs finite differences, 200 triples "
         "per model",
         worst, tol);
}

void criterion_2() {
  const double tol = 1e-10;
  double worst_det = 0.0;
  double worst_orth = 0.0;
  for (const char* name : {"u2_central_kropina", "circle_su2_mod_u1"}) {
    const KropinaStructure ks = make_kropina(builtin_model(name));
    const auto& ctx = ks.context();
    std::mt19937_64 rng(103);
    for (int s = 0; s < 60; ++s) {
      const Flag on = random_on_flag(rng, ks, 0.25);
      const double a = ctx.metric().inner(on.u, ks.x_field());
      const double b = ks.beta(on.y);
      const double det = ks.g_y(on.y, on.y, on.y) * ks.g_y(on.y, on.u, on.u) -
                         std::pow(ks.g_y(on.y, on.y, on.u), 2.0);
      const double closed =
          2.0 * a * a / std::pow(b, 6.0) + 2.0 / std::pow(b, 4.0);
      worst_det = std::max(worst_det, rel(det, closed));
      const Vec r = ctx.curvature_vector(on.u, on.y);
      worst_orth = std::max(worst_orth, std::abs(ctx.metric().inner(r, on.y)));
    }
  }
  const double worst = std::max(worst_det, worst_orth);
  report(2, worst <= tol,
         "Gram determinant closed form and flagpole orthogonality of the "
         "curvature vector, 120 orthonormal flags",
         worst, tol);
}

void criterion_3() {
  const double tol_oracle = 1e-9;
  const double tol_sectional = 1e-10;
  double worst_oracle = 0.0;
  const ModelSpec su2 = builtin_model("su2_biinvariant");
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const InvariantMetric metric =
        random_phi(seed, su2.algebra, su2.split, su2.metric.q0(), 0.5, 3.0);
    const CurvatureContext ctx(su2.algebra, su2.split, metric);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < 40; ++s) {
      const Vec x = random_unit_m(rng, ctx);
      const Vec y = random_unit_m(rng, ctx);
      const Vec z = random_unit_m(rng, ctx);
      const Vec w = random_unit_m(rng, ctx);
      const double closed = ctx.puttmann_pairing(x, y, z, w);
      const double oracle = ctx.metric().inner(ctx.oracle_curvature(x, y, z), w);
      worst_oracle = std::max(worst_oracle, rel(closed, oracle));
    }
  }
  double worst_sectional = 0.0;
  const CurvatureContext flat = make_context(su2);
  std::mt19937_64 rng(107);
  for (int s = 0; s < 50; ++s) {
    const Vec u = random_unit_m(rng, flat);
    const Vec y = random_unit_m(rng, flat);
    const Vec uy = flat.algebra().bracket(u, y);
    worst_sectional = std::max(
        worst_sectional, std::abs(flat.puttmann_pairing(u, y, y, u) -
                                  0.25 * flat.metric().inner(uy, uy)));
  }
  const bool pass =
      worst_oracle <= tol_oracle && worst_sectional <= tol_sectional;
  report(3, pass,
         "curvature pairing vs connection oracle over random endomorphisms "
         "(120 quadruples), and quarter-bracket sectional values",
         std::max(worst_oracle, worst_sectional), tol_oracle);
}

void criterion_4() {
  const double tol = 1e-10;
  double worst = 0.0;
  for (const char* name : {"s2_normal", "su2_biinvariant"}) {
    const CurvatureContext ctx = make_context(builtin_model(name));
    std::mt19937_64 rng(109);
    for (int s = 0; s < 50; ++s) {
      const Vec u = random_unit_m(rng, ctx);
      const Vec y = random_unit_m(rng, ctx);
      worst = std::max(worst,
                       (ctx.naturally_reductive_r(u, y) -
                        ctx.curvature_vector(u, y)).lpNorm<Eigen::Infinity>());
    }
  }
  const CurvatureContext s2 = make_context(builtin_model("s2_normal"));
  const Vec b0 = s2.algebra().basis_vector(0);
  const Vec b1 = s2.algebra().basis_vector(1);
  worst = std::max(worst, std::abs(s2.puttmann_pairing(b0, b1, b1, b0) - 1.0));
  report(4, worst <= tol,
         "naturally reductive closed form vs curvature vector, and the unit "
         "sphere sectional value",
         worst, tol);
}

void criterion_5() {
  const double tol = 1e-10;
  double worst = 0.0;
  for (const char* name : {"su2_biinvariant", "u2_central_kropina",
                           "abelian_4"}) {
    const CurvatureContext ctx = make_context(builtin_model(name));
    std::mt19937_64 rng(113);
    for (int s = 0; s < 50; ++s) {
      const Vec u = random_unit_m(rng, ctx);
      const Vec y = random_unit_m(rng, ctx);
      worst = std::max(worst, (ctx.bi_invariant_r(u, y) - ctx.oracle_r(u, y))
                                  .lpNorm<Eigen::Infinity>());
    }
  }
  report(5, worst <= tol,
         "double-bracket closed form vs connection oracle on bi-invariant "
         "models",
         worst, tol);
}

void criterion_6() {
  const double tol_headline = 1e-8;
  const KropinaStructure u2 = make_kropina(builtin_model("u2_central_kropina"));
  const Vec y = [] {
    Vec v = Vec::Zero(4);
    v(0) = v(2) = 1.0 / std::sqrt(2.0);
    return v;
  }();
  const Vec u = Vec::Unit(4, 1);
  const FlagCurvatureResult headline = u2.flag_curvature_theorem(Flag{y, u});
  double worst_headline =
      std::max({std::abs(headline.k_direct - 1.0 / 16.0),
                std::abs(headline.k_theorem_consistent - 1.0 / 16.0),
                std::abs(headline.k_theorem_printed - std::sqrt(2.0) / 16.0)});

  double worst_consistent = 0.0;
  double printed_deviation = 0.0;
  double worst_beta_one = 0.0;
  for (const auto& name : kKropinaModels) {
    const KropinaStructure ks = make_kropina(builtin_model(name));
    std::mt19937_64 rng(127);
    for (int s = 0; s < 100; ++s) {
      const Flag on = random_on_flag(rng, ks, 0.05);
      const FlagCurvatureResult r = ks.flag_curvature_theorem(on);
      worst_consistent =
          std::max(worst_consistent, r.residual_consistent_vs_direct);
      printed_deviation =
          std::max(printed_deviation, r.residual_printed_vs_direct);
    }
    // Constructed flags with the 1-form equal to 1 on the flagpole: both
    // closed-form variants must coincide there.
    const Vec pole = unit_beta_one_pole(ks);
    if (std::abs(ks.beta(pole) - 1.0) <= 1e-9) {
      for (int i = 0; i < ks.context().m_dim(); ++i) {
        const Vec cand = ks.context().onb_m().col(i);
        const double overlap = ks.context().metric().inner(cand, pole);
        if (1.0 - overlap * overlap <= 1e-8) continue;
        const FlagCurvatureResult r =
            ks.flag_curvature_theorem(Flag{pole, cand});
        worst_beta_one =
            std::max(worst_beta_one, std::abs(r.k_theorem_printed -
                                              r.k_theorem_consistent));
      }
    }
  }
  const bool pass = worst_headline <= tol_headline &&
                    worst_consistent <= 1e-8 && worst_beta_one <= 1e-9;
  report(6, pass,
         "headline flag adjudication (1/16 vs sqrt(2)/16, printed deviation " +
             format_double(printed_deviation) +
             " over 400 random flags, zero on the unit-1-form subset)",
         std::max({worst_headline, worst_consistent, worst_beta_one}),
         tol_headline);
}

void criterion_7() {
  const double tol = 1e-12;
  const CheckReport central =
      make_kropina(builtin_model("u2_central_kropina"))
          .berwald_hypothesis_check();
  const ModelSpec su2 = builtin_model("su2_biinvariant");
  const KropinaStructure skew(make_context(su2), Vec(Vec::Unit(3, 1)));
  const CheckReport off = skew.berwald_hypothesis_check();
  const CheckItem* item = off.find("berwald_nabla_x");
  const double residual_gap =
      item ? std::abs(item->residual - 0.5) : 1.0;
  const bool pass = central.passed() && item && !off.passed() &&
                    residual_gap <= tol;
  report(7, pass,
         "parallel-field hypothesis passes for the central field and fails "
         "at residual 1/2 for a skew field",
         residual_gap, tol);
}

void criterion_8(const std::string& cli) {
  bool round_trip = true;
  for (const auto& name : builtin_model_names()) {
    const std::string text = serialize_model(builtin_model(name));
    round_trip = round_trip && serialize_model(parse_model(text)) == text;
  }
  const std::string scan_cmd =
      cli + " scan u2_central_kropina --samples 25 --seed 5";
  const CommandResult scan_a = run_command(scan_cmd);
  const CommandResult scan_b = run_command(scan_cmd);
  const bool deterministic = scan_a.exit_code == 0 &&
                             scan_b.exit_code == 0 && scan_a.out == scan_b.out;
  bool validated = true;
  for (const auto& name : builtin_model_names())
    validated =
        validated && run_command(cli + " validate " + name).exit_code == 0;
  const bool pass = round_trip && deterministic && validated;
  report(8, pass,
         std::string("infrastructure: round-trip ") +
             (round_trip ? "stable" : "UNSTABLE") + ", scan " +
             (deterministic ? "deterministic" : "NONDETERMINISTIC") +
             ", catalog validation " + (validated ? "clean" : "FAILING"),
         pass ? 0.0 : 1.0, 0.5);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
    return 2;
  }
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8(argv[1]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 99;
  }
  return failures;
}
