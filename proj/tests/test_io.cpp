// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gemini/io.hpp"
#include "gemini/rng.hpp"

using namespace gemini;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gemini_io_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles print in shortest round-trip form") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("matrix and labelled CSV round-trip") {
  Rng rng(2);
  Matrix m(7, 3);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  const auto path = temp_path("m.csv");
  write_matrix_csv(path, m);
  CHECK(read_matrix_csv(path) == m);

  LabeledData d{DataMatrix(m), {0, 1, 2, 0, 1, 2, 5}};
  const auto lpath = temp_path("l.csv");
  write_labeled_csv(lpath, d);
  const auto back = read_labeled_csv(lpath);
  CHECK(back.X.values() == m);
  CHECK(back.labels == d.labels);
}

TEST_CASE("malformed CSV is reported") {
  CHECK_THROWS_AS(read_matrix_csv(temp_path("missing.csv")), IoError);
  const auto ragged = temp_path("ragged.csv");
  std::ofstream(ragged) << "1,2\n3\n";
  CHECK_THROWS_AS(read_matrix_csv(ragged), IoError);
  const auto text = temp_path("text.csv");
  std::ofstream(text) << "1,abc\n";
  CHECK_THROWS_AS(read_matrix_csv(text), IoError);
  const auto frac = temp_path("frac.csv");
  std::ofstream(frac) << "1,0.5\n";
  CHECK_THROWS_AS(read_labeled_csv(frac), IoError);
}

TEST_CASE("configuration and checkpoint JSON round-trip") {
  auto spec = ModelSpec::mlp(2, {16, 8}, 5, 42);
  spec.init_scale = 0.25;
  const auto spec_back = model_spec_from_json(model_spec_to_json(spec));
  CHECK(spec_back.kind == spec.kind);
  CHECK(spec_back.hidden == spec.hidden);
  CHECK(spec_back.clusters == 5);
  CHECK(spec_back.seed == 42);
  CHECK(spec_back.init_scale == 0.25);

  TrainConfig cfg;
  cfg.objective = Objective::parse("wasserstein-ovo");
  cfg.geometry = GeometrySpec::shortest_path(0.1);
  cfg.epochs = 12;
  cfg.batch_size = 30;
  cfg.adam.learning_rate = 0.01;
  cfg.seed = 9;
  const auto cfg_back = train_config_from_json(train_config_to_json(cfg));
  CHECK(cfg_back.objective.name() == "wasserstein-ovo");
  REQUIRE(cfg_back.geometry.has_value());
  CHECK(cfg_back.geometry->kind == GeometryKind::ShortestPath);
  CHECK(cfg_back.geometry->quantile == 0.1);
  CHECK(cfg_back.epochs == 12);
  CHECK(cfg_back.batch_size == 30);
  CHECK(cfg_back.adam.learning_rate == 0.01);
  CHECK(cfg_back.seed == 9);

  Checkpoint ck{spec, init_model(spec), cfg};
  const auto path = temp_path("ck.json");
  write_json(path, checkpoint_to_json(ck));
  const Checkpoint back = checkpoint_from_json(read_json(path));
  CHECK(back.params.values == ck.params.values);
  CHECK(back.spec.hidden == spec.hidden);
  CHECK(train_config_to_json(back.config) == train_config_to_json(cfg));

  Json bad = checkpoint_to_json(ck);
  bad["params"].erase(bad["params"].size() - 1);
  CHECK_THROWS_AS(checkpoint_from_json(bad), ConfigError);
  const auto broken = temp_path("broken.json");
  std::ofstream(broken) << "{ nope";
  CHECK_THROWS_AS(read_json(broken), ConfigError);
}

TEST_CASE("geometry JSON") {
  for (const auto& spec : {GeometrySpec::linear_kernel(), GeometrySpec::gaussian_kernel(0.7),
                           GeometrySpec::euclidean(), GeometrySpec::shortest_path(0.2)}) {
    const auto back = geometry_from_json(geometry_to_json(spec));
    CHECK(back.kind == spec.kind);
    CHECK(back.bandwidth == spec.bandwidth);
    CHECK(back.quantile == spec.quantile);
  }
  CHECK_THROWS_AS(geometry_from_json(Json{{"kind", "cosine"}}), ConfigError);
}

}  // TEST_SUITE
