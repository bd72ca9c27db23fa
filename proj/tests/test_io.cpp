#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace kropina;
using test_support::vec;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string temp_path(const std::string& stem) {
  const auto dir = std::filesystem::temp_directory_path();
  return (dir / (stem + "-" + std::to_string(::getpid()) + ".json")).string();
}

const char* kSu2Text = R"({
  "dim": 3,
  "structure": [
    {"i": 0, "j": 1, "k": 2, "value": 1.0},
    {"i": 1, "j": 2, "k": 0, "value": 1.0},
    {"i": 2, "j": 0, "k": 1, "value": 1.0}
  ],
  "q0": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
})";

}  // namespace

TEST_CASE("serialization round-trips the catalog", "[io]") {
  for (const auto& name : builtin_model_names()) {
    INFO(name);
    const ModelSpec original = builtin_model(name);
    const std::string text = serialize_model(original);
    const ModelSpec back = parse_model(text);
    CHECK(back.name == original.name);
    CHECK(back.algebra.dim() == original.algebra.dim());
    CHECK(back.split.h_indices() == original.split.h_indices());
    CHECK((back.metric.q0() - original.metric.q0()).lpNorm<Eigen::Infinity>() ==
          0.0);
    CHECK((back.metric.phi() - original.metric.phi())
              .lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(back.x_field.has_value() == original.x_field.has_value());
    if (back.x_field)
      CHECK((*back.x_field - *original.x_field).lpNorm<Eigen::Infinity>() ==
            0.0);
    double worst = 0.0;
    for (int i = 0; i < original.algebra.dim(); ++i)
      for (int j = 0; j < original.algebra.dim(); ++j)
        for (int k = 0; k < original.algebra.dim(); ++k)
          worst = std::max(worst,
                           std::abs(back.algebra.structure(i, j, k) -
                                    original.algebra.structure(i, j, k)));
    CHECK(worst == 0.0);
    // Canonical form is a fixed point.
    CHECK(serialize_model(back) == text);
  }
}

TEST_CASE("defaults are omitted from the canonical form", "[io]") {
  const std::string text = serialize_model(builtin_model("su2_biinvariant"));
  CHECK_THAT(text, !ContainsSubstring("\"phi\""));
  CHECK_THAT(text, !ContainsSubstring("\"h_indices\""));
  CHECK_THAT(text, !ContainsSubstring("\"x\""));
  CHECK_THAT(text, !ContainsSubstring("\"basis_labels\""));
  const std::string circle =
      serialize_model(builtin_model("circle_su2_mod_u1"));
  CHECK_THAT(circle, ContainsSubstring("\"phi\""));
  CHECK_THAT(circle, ContainsSubstring("\"h_indices\""));
  CHECK_THAT(circle, ContainsSubstring("\"x\""));
}

TEST_CASE("custom basis labels survive the round trip", "[io]") {
  LieAlgebra alg = LieAlgebra::from_entries(
      2, {}, std::vector<std::string>{"t", "z"});
  const ModelSpec model{"flatland",
                        "",
                        std::move(alg),
                        ReductiveSplit(2, {}),
                        InvariantMetric(Mat::Identity(2, 2),
                                        Mat::Identity(2, 2)),
                        std::nullopt};
  const std::string text = serialize_model(model);
  CHECK_THAT(text, ContainsSubstring("basis_labels"));
  const ModelSpec back = parse_model(text);
  CHECK(back.algebra.basis_labels() ==
        std::vector<std::string>({"t", "z"}));
  CHECK(serialize_model(back) == text);
}

TEST_CASE("minimal text parses with defaults filled in", "[io]") {
  const ModelSpec model = parse_model(kSu2Text);
  CHECK(model.algebra.dim() == 3);
  CHECK(model.split.h_dim() == 0);
  CHECK((model.metric.phi() - Mat::Identity(3, 3)).lpNorm<Eigen::Infinity>() ==
        0.0);
  CHECK_FALSE(model.x_field.has_value());
  // Antisymmetric completion happened.
  CHECK(model.algebra.structure(1, 0, 2) == -1.0);
}

TEST_CASE("parse errors name the offending field", "[io]") {
  CHECK_THROWS_WITH(parse_model("{\"dim\": 3, \"structure\": []}"),
                    ContainsSubstring("'q0'"));
  CHECK_THROWS_WITH(parse_model("{\"dim\": 3, \"q0\": []}"),
                    ContainsSubstring("'structure'"));
  CHECK_THROWS_WITH(
      parse_model(
          "{\"dim\": 1, \"structure\": [], \"q0\": [[1]], \"frobnicate\": 1}"),
      ContainsSubstring("frobnicate"));
  CHECK_THROWS_WITH(parse_model("{\"dim\": 0, \"structure\": [], \"q0\": []}"),
                    ContainsSubstring("dim"));
  CHECK_THROWS_AS(parse_model("not json at all"), ParseError);
  CHECK_THROWS_WITH(parse_model("[1, 2, 3]"),
                    ContainsSubstring("top level must be an object"));
}

TEST_CASE("structure records are strictly validated", "[io]") {
  const std::string head = "{\"dim\": 3, \"q0\": [[1,0,0],[0,1,0],[0,0,1]], ";
  CHECK_THROWS_AS(
      parse_model(head + "\"structure\": [{\"i\": 0, \"j\": 1, \"k\": 2}]}"),
      ParseError);
  CHECK_THROWS_WITH(
      parse_model(head +
                  "\"structure\": [{\"i\": 0, \"j\": 1, \"k\": 2, \"value\": "
                  "1, \"extra\": 2}]}"),
      ContainsSubstring("extra"));
  CHECK_THROWS_WITH(
      parse_model(head +
                  "\"structure\": ["
                  "{\"i\": 0, \"j\": 1, \"k\": 2, \"value\": 1},"
                  "{\"i\": 1, \"j\": 0, \"k\": 2, \"value\": 1}]}"),
      ContainsSubstring("structure"));
  CHECK_THROWS_AS(
      parse_model(head +
                  "\"structure\": [{\"i\": 0, \"j\": 5, \"k\": 2, \"value\": "
                  "1}]}"),
      ParseError);
  CHECK_THROWS_AS(
      parse_model(head +
                  "\"structure\": [{\"i\": 1, \"j\": 1, \"k\": 2, \"value\": "
                  "1}]}"),
      ParseError);
}

TEST_CASE("matrix and vector fields are checked for shape", "[io]") {
  CHECK_THROWS_WITH(
      parse_model("{\"dim\": 2, \"structure\": [], \"q0\": [[1, 0]]}"),
      ContainsSubstring("q0"));
  CHECK_THROWS_WITH(
      parse_model(
          "{\"dim\": 2, \"structure\": [], \"q0\": [[1, 0], [0, 1, 2]]}"),
      ContainsSubstring("q0"));
  CHECK_THROWS_WITH(
      parse_model("{\"dim\": 2, \"structure\": [], \"q0\": [[1, 0], [0, 1]], "
                  "\"x\": [1]}"),
      ContainsSubstring("x"));
  CHECK_THROWS_WITH(
      parse_model("{\"dim\": 2, \"structure\": [], \"q0\": [[1, 0], [0, 1]], "
                  "\"x\": [1, \"a\"]}"),
      ContainsSubstring("x"));
  CHECK_THROWS_WITH(
      parse_model("{\"dim\": 2, \"structure\": [], \"q0\": [[1, 0], [0, 1]], "
                  "\"h_indices\": [7]}"),
      ContainsSubstring("h_indices"));
  CHECK_THROWS_WITH(
      parse_model("{\"dim\": 2, \"structure\": [], \"q0\": [[1, 0], [0, 1]], "
                  "\"h_indices\": [0, 0]}"),
      ContainsSubstring("h_indices"));
}

TEST_CASE("loading validates beyond parsing", "[io]") {
  // Bi-invariance of q0 fails for this stretched form on su(2).
  std::string text(kSu2Text);
  const std::string needle = "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]";
  text.replace(text.find(needle), needle.size(),
               "[[1, 0, 0], [0, 1, 0], [0, 0, 2]]");
  CHECK_NOTHROW(parse_model(text));
  const std::string path = temp_path("kropina-io-bad");
  {
    std::ofstream out(path);
    out << text;
  }
  CHECK_THROWS_AS(load_model(path), ValidationError);
  CHECK_THROWS_WITH(load_model(path), ContainsSubstring("q0_biinvariant"));
  std::filesystem::remove(path);
}

TEST_CASE("save and load are inverse on disk", "[io]") {
  const ModelSpec model = builtin_model("u2_central_kropina");
  const std::string path = temp_path("kropina-io-roundtrip");
  save_model(model, path);
  {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == serialize_model(model));
  }
  const ModelSpec back = load_model(path);
  CHECK(back.name == model.name);
  CHECK(serialize_model(back) == serialize_model(model));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_model(path), ParseError);
}
