#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kropina/kropina.hpp"

namespace {

using kropina::Vec;
using ojson = nlohmann::ordered_json;

// Exit codes: 0 success, 1 unexpected, 2 parse, 3 validation, 4 degeneracy,
// 5 tolerance, 64 usage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string model;
  std::string format = "text";
  std::string output;
  int samples = 100;
  std::uint64_t seed = 0;
  double tolerance = -1.0;  // negative means unset
  double step = 0.0;        // nonpositive means automatic
  std::string y_coords;
  std::string u_coords;
  std::string name;
};

kropina::ModelSpec resolve_model(const std::string& ref, bool validated) {
  if (std::filesystem::exists(ref)) {
    if (validated) return kropina::load_model(ref);
    std::ifstream in(ref, std::ios::binary);
    if (!in) throw kropina::ParseError("cannot open model file: " + ref);
    std::ostringstream buf;
    buf << in.rdbuf();
    return kropina::parse_model(buf.str(), ref);
  }
  try {
    return kropina::builtin_model(ref);
  } catch (const kropina::ValidationError&) {
    throw kropina::ValidationError("'" + ref +
                                   "' is neither a readable file nor a "
                                   "builtin model (see: kropina models list)");
  }
}

Vec parse_coords(const std::string& text, int dim, const char* what) {
  std::vector<double> values;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      while (used < token.size() && std::isspace(
                 static_cast<unsigned char>(token[used])))
        ++used;
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse '" + token +
                       "' as a number");
    }
  }
  if (static_cast<int>(values.size()) != dim)
    throw UsageError(std::string(what) + ": expected " + std::to_string(dim) +
                     " comma-separated numbers, got " +
                     std::to_string(values.size()));
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out(i) = values[i];
  return out;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw kropina::Error("cannot write output file: " + output);
  out << text;
}

std::string join_coords(const Vec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += kropina::format_double(v(i));
  }
  return out;
}

ojson coords_json(const Vec& v) {
  ojson arr = ojson::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

ojson report_json(const kropina::CheckReport& report) {
  ojson checks = ojson::array();
  for (const auto& item : report.items()) {
    ojson c = ojson::object();
    c["name"] = item.name;
    c["status"] = item.status == kropina::CheckStatus::pass        ? "pass"
                  : item.status == kropina::CheckStatus::fail      ? "fail"
                                                                   : "unchecked";
    if (item.status != kropina::CheckStatus::unchecked) {
      c["residual"] = item.residual;
      c["threshold"] = item.threshold;
    }
    c["gating"] = item.gating;
    if (!item.detail.empty()) c["detail"] = item.detail;
    checks.push_back(std::move(c));
  }
  return checks;
}

int run_validate(const CommonOptions& opt) {
  kropina::ModelSpec model = resolve_model(opt.model, /*validated=*/false);
  const kropina::CheckReport report = kropina::full_report(model);
  if (opt.format == "json") {
    ojson doc = ojson::object();
    doc["model"] = model.name.empty() ? opt.model : model.name;
    doc["passed"] = report.passed();
    doc["checks"] = report_json(report);
    emit(doc.dump(2) + "\n", opt.output);
  } else {
    std::string text = "model: ";
    text += model.name.empty() ? opt.model : model.name;
    text += "\n" + report.to_text();
    text += report.passed() ? "validation passed\n" : "validation FAILED: ";
    if (!report.passed()) text += report.failure_summary() + "\n";
    emit(text, opt.output);
  }
  return report.passed() ? 0 : 3;
}

int run_flag(const CommonOptions& opt) {
  kropina::ModelSpec model = resolve_model(opt.model, /*validated=*/true);
  kropina::KropinaStructure structure = kropina::make_kropina(model);
  const int n = structure.context().dim();
  const Vec y = parse_coords(opt.y_coords, n, "--y");
  const Vec u = parse_coords(opt.u_coords, n, "--u");
  const kropina::Flag on = structure.orthonormalize(kropina::Flag{y, u});
  const kropina::FlagCurvatureResult r = structure.flag_curvature_theorem(on);

  // Independent finite-difference read of the fundamental tensor on the
  // orthonormalized flag, as a per-invocation diagnostic.
  double fd_worst = 0.0;
  const double step =
      opt.step > 0.0 ? opt.step
                     : 1e-4 * structure.context().metric().norm(on.y);
  const Vec* dirs[2] = {&on.y, &on.u};
  for (const Vec* a : dirs)
    for (const Vec* b : dirs) {
      const double exact = structure.g_y(on.y, *a, *b);
      const double fd = structure.g_y_fd(on.y, *a, *b, step, true);
      fd_worst = std::max(fd_worst, kropina::relative_residual(exact, fd));
    }

  if (opt.format == "json") {
    ojson doc = ojson::object();
    doc["model"] = model.name.empty() ? opt.model : model.name;
    doc["y"] = coords_json(y);
    doc["u"] = coords_json(u);
    doc["orthonormal_y"] = coords_json(on.y);
    doc["orthonormal_u"] = coords_json(on.u);
    doc["beta_y"] = r.beta_y;
    doc["k_direct"] = r.k_direct;
    doc["k_theorem_consistent"] = r.k_theorem_consistent;
    doc["k_theorem_printed"] = r.k_theorem_printed;
    doc["residual_consistent_vs_direct"] = r.residual_consistent_vs_direct;
    doc["residual_printed_vs_direct"] = r.residual_printed_vs_direct;
    doc["beta_positive"] = r.beta_y > 0.0;
    doc["fd_cross_check"] =
        ojson{{"step", step}, {"max_relative_residual", fd_worst}};
    emit(doc.dump(2) + "\n", opt.output);
  } else {
    char buf[256];
    std::string text;
    auto line = [&](const char* key, const std::string& value) {
      std::snprintf(buf, sizeof(buf), "%-30s %s\n", key, value.c_str());
      text += buf;
    };
    line("model", model.name.empty() ? opt.model : model.name);
    line("orthonormal y", join_coords(on.y));
    line("orthonormal u", join_coords(on.u));
    line("beta_y", kropina::format_double(r.beta_y));
    line("k_direct", kropina::format_double(r.k_direct));
    line("k_theorem_consistent", kropina::format_double(r.k_theorem_consistent));
    line("k_theorem_printed", kropina::format_double(r.k_theorem_printed));
    line("residual consistent|direct",
         kropina::format_double(r.residual_consistent_vs_direct));
    line("residual printed|direct",
         kropina::format_double(r.residual_printed_vs_direct));
    line("fd cross-check residual", kropina::format_double(fd_worst) +
                                        " (step " + kropina::format_double(step) +
                                        ")");
    if (r.beta_y < 0.0)
      text +=
          "note: beta(y) < 0 on this flagpole; a positive Kropina norm needs "
          "beta > 0\n";
    emit(text, opt.output);
  }
  return 0;
}

int run_scan(const CommonOptions& opt) {
  kropina::ModelSpec model = resolve_model(opt.model, /*validated=*/true);
  kropina::KropinaStructure structure = kropina::make_kropina(model);
  kropina::ScanOptions scan_opt;
  scan_opt.samples = opt.samples;
  scan_opt.seed = opt.seed;
  const auto rows = kropina::scan_flags(structure, scan_opt);
  const std::string text = opt.format == "json"
                               ? kropina::scan_to_json(structure, rows, scan_opt)
                               : kropina::scan_to_csv(structure, rows);
  emit(text, opt.output);
  return 0;
}

int run_compare(const CommonOptions& opt) {
  kropina::ModelSpec model = resolve_model(opt.model, /*validated=*/true);
  kropina::CompareOptions cmp;
  cmp.samples = opt.samples;
  cmp.seed = opt.seed;
  if (opt.tolerance >= 0.0) cmp.tolerance = opt.tolerance;
  if (opt.step > 0.0) cmp.fd_step_scale = opt.step;
  const kropina::CheckReport report = kropina::compare_model(model, cmp);
  if (opt.format == "json") {
    ojson doc = ojson::object();
    doc["model"] = model.name.empty() ? opt.model : model.name;
    doc["samples"] = cmp.samples;
    doc["seed"] = cmp.seed;
    doc["passed"] = report.passed();
    doc["checks"] = report_json(report);
    emit(doc.dump(2) + "\n", opt.output);
  } else {
    std::string text = "model: ";
    text += model.name.empty() ? opt.model : model.name;
    text += "\n" + report.to_text();
    text += report.passed() ? "comparison passed\n" : "comparison FAILED: ";
    if (!report.passed()) text += report.failure_summary() + "\n";
    emit(text, opt.output);
  }
  return report.passed() ? 0 : 5;
}

int run_models_list(const CommonOptions& opt) {
  if (opt.format == "json") {
    ojson doc = ojson::array();
    for (const auto& name : kropina::builtin_model_names()) {
      const kropina::ModelSpec model = kropina::builtin_model(name);
      doc.push_back(ojson{{"name", name},
                          {"dim", model.algebra.dim()},
                          {"has_x", model.x_field.has_value()},
                          {"notes", model.notes}});
    }
    emit(doc.dump(2) + "\n", opt.output);
  } else {
    std::string text;
    char buf[256];
    for (const auto& name : kropina::builtin_model_names()) {
      const kropina::ModelSpec model = kropina::builtin_model(name);
      std::snprintf(buf, sizeof(buf), "%-20s dim %-3d %-4s %s\n", name.c_str(),
                    model.algebra.dim(),
                    model.x_field ? "x" : "-", model.notes.c_str());
      text += buf;
    }
    emit(text, opt.output);
  }
  return 0;
}

int run_models_export(const CommonOptions& opt) {
  const kropina::ModelSpec model = kropina::builtin_model(opt.name);
  emit(kropina::serialize_model(model), opt.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant Kropina metrics on homogeneous spaces: validation, "
               "flag curvature, scans, and oracle comparisons"};
  app.require_subcommand(1);
  CommonOptions opt;
  int rc = 0;

  auto add_format = [&opt](CLI::App* sub) {
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", opt.output, "write output to a file");
  };
  auto add_model = [&opt](CLI::App* sub) {
    sub->add_option("model", opt.model, "model file path or builtin name")
        ->required();
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "run all structural and hypothesis checks");
  add_model(validate);
  add_format(validate);
  validate->callback([&]() { rc = run_validate(opt); });

  CLI::App* flag = app.add_subcommand(
      "flag", "flag curvature of one flag, every route");
  add_model(flag);
  add_format(flag);
  flag->add_option("--y", opt.y_coords,
                   "flagpole coordinates, comma separated")
      ->required();
  flag->add_option("--u", opt.u_coords,
                   "transverse coordinates, comma separated")
      ->required();
  flag->add_option("--step", opt.step, "finite-difference step override");
  flag->callback([&]() { rc = run_flag(opt); });

  CLI::App* scan = app.add_subcommand(
      "scan", "tabulate flag curvature over seeded random flags");
  add_model(scan);
  add_format(scan);
  scan->add_option("--samples", opt.samples, "number of flags");
  scan->add_option("--seed", opt.seed, "RNG seed");
  scan->callback([&]() { rc = run_scan(opt); });

  CLI::App* compare = app.add_subcommand(
      "compare", "cross-validate closed forms against independent oracles");
  add_model(compare);
  add_format(compare);
  compare->add_option("--samples", opt.samples, "samples per pairing");
  compare->add_option("--seed", opt.seed, "RNG seed");
  compare->add_option("--tolerance", opt.tolerance,
                      "also gate the printed closed-form variant at this "
                      "tolerance");
  compare->add_option("--step", opt.step,
                      "finite-difference step scale override");
  compare->callback([&]() { rc = run_compare(opt); });

  CLI::App* models = app.add_subcommand("models", "builtin model catalog");
  models->require_subcommand(1);
  CLI::App* list = models->add_subcommand("list", "list builtin models");
  add_format(list);
  list->callback([&]() { rc = run_models_list(opt); });
  CLI::App* exp = models->add_subcommand(
      "export", "write a builtin model in the canonical file format");
  exp->add_option("name", opt.name, "builtin model name")->required();
  add_format(exp);
  exp->callback([&]() { rc = run_models_export(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 64;
  } catch (const kropina::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const kropina::DegeneracyError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const kropina::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
