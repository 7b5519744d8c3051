// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gemini {
namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      if (first == std::string::npos) throw IoError(path + ":" + std::to_string(line_no) + ": empty field");
      const std::string token = field.substr(first, last - first + 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw IoError(path + ":" + std::to_string(line_no) + ": cannot parse '" + token + "'");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("'" + path + "' holds no rows");
  return rows;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Matrix read_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

LabeledData read_labeled_csv(const std::string& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() < 2) throw IoError("'" + path + "' needs feature columns and a label column");
  LabelVector labels(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    const double v = m(i, m.cols() - 1);
    if (v != std::floor(v) || v < 0) throw IoError("'" + path + "' has a non-integer label");
    labels[static_cast<std::size_t>(i)] = static_cast<int>(v);
  }
  return {DataMatrix(m.leftCols(m.cols() - 1)), std::move(labels)};
}

void write_labeled_csv(const std::string& path, const LabeledData& data) {
  auto out = open_out(path);
  const Matrix& X = data.X.values();
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) out << format_double(X(i, j)) << ',';
    out << data.labels[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
  auto out = open_out(path);
  out << "epoch,objective,nonempty,ari,ms\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << format_double(r.objective) << ',' << r.nonempty << ','
        << format_double(r.ari) << ',' << format_double(r.ms) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json geometry_to_json(const GeometrySpec& spec) {
  Json j{{"kind", to_string(spec.kind)}};
  switch (spec.kind) {
    case GeometryKind::GaussianKernel: j["bandwidth"] = spec.bandwidth; break;
    case GeometryKind::ShortestPath: j["quantile"] = spec.quantile; break;
    case GeometryKind::Precomputed:
      j["path"] = spec.source;
      j["is_kernel"] = spec.precomputed_is_kernel;
      break;
    default: break;
  }
  return j;
}

GeometrySpec geometry_from_json(const Json& j) {
  GeometrySpec spec;
  spec.kind = geometry_kind_from_string(j.at("kind").get<std::string>());
  spec.bandwidth = get_or(j, "bandwidth", 1.0);
  spec.quantile = get_or(j, "quantile", 0.05);
  if (spec.kind == GeometryKind::Precomputed) {
    spec.source = j.at("path").get<std::string>();
    spec.precomputed_is_kernel = get_or(j, "is_kernel", false);
    spec.matrix = read_matrix_csv(spec.source);
  }
  spec.validate();
  return spec;
}

Json model_spec_to_json(const ModelSpec& spec) {
  Json j{{"kind", to_string(spec.kind)},
         {"clusters", spec.clusters},
         {"seed", spec.seed},
         {"init_scale", spec.init_scale}};
  if (spec.kind == ModelKind::CategoricalTable) {
    j["n_samples"] = spec.n_samples;
  } else {
    j["input_dim"] = spec.input_dim;
  }
  if (spec.kind == ModelKind::Mlp) j["hidden"] = spec.hidden;
  return j;
}

ModelSpec model_spec_from_json(const Json& j) {
  ModelSpec spec;
  spec.kind = model_kind_from_string(j.at("kind").get<std::string>());
  spec.clusters = j.at("clusters").get<int>();
  spec.seed = get_or<std::uint64_t>(j, "seed", 0);
  spec.n_samples = get_or(j, "n_samples", 0);
  spec.input_dim = get_or(j, "input_dim", 0);
  spec.init_scale = get_or(j, "init_scale", 0.0);
  if (j.contains("hidden")) spec.hidden = j.at("hidden").get<std::vector<int>>();
  spec.validate();
  return spec;
}

Json train_config_to_json(const TrainConfig& cfg) {
  Json j{{"objective", cfg.objective.name()},
         {"epochs", cfg.epochs},
         {"batch_size", cfg.batch_size},
         {"learning_rate", cfg.adam.learning_rate},
         {"beta1", cfg.adam.beta1},
         {"beta2", cfg.adam.beta2},
         {"epsilon", cfg.adam.epsilon},
         {"seed", cfg.seed},
         {"record_timing", cfg.record_timing}};
  if (cfg.objective.family == ObjectiveFamily::WassersteinSampled) {
    j["pairs"] = cfg.objective.sampled_pairs;
  }
  if (cfg.geometry) j["geometry"] = geometry_to_json(*cfg.geometry);
  return j;
}

TrainConfig train_config_from_json(const Json& j) {
  TrainConfig cfg;
  cfg.objective = Objective::parse(j.at("objective").get<std::string>(), get_or(j, "pairs", 1));
  if (j.contains("geometry")) cfg.geometry = geometry_from_json(j.at("geometry"));
  cfg.epochs = get_or(j, "epochs", cfg.epochs);
  cfg.batch_size = get_or(j, "batch_size", cfg.batch_size);
  cfg.adam.learning_rate = get_or(j, "learning_rate", cfg.adam.learning_rate);
  cfg.adam.beta1 = get_or(j, "beta1", cfg.adam.beta1);
  cfg.adam.beta2 = get_or(j, "beta2", cfg.adam.beta2);
  cfg.adam.epsilon = get_or(j, "epsilon", cfg.adam.epsilon);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.record_timing = get_or(j, "record_timing", cfg.record_timing);
  if (cfg.objective.needs_geometry() && !cfg.geometry) {
    throw ConfigError(cfg.objective.name() + " needs a geometry");
  }
  if (!(cfg.adam.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (cfg.epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (cfg.batch_size < 0) throw ConfigError("batch_size must be nonnegative");
  return cfg;
}

Json checkpoint_to_json(const Checkpoint& ckpt) {
  std::vector<double> values(ckpt.params.values.data(),
                             ckpt.params.values.data() + ckpt.params.values.size());
  return Json{{"model", model_spec_to_json(ckpt.spec)},
              {"params", values},
              {"train", train_config_to_json(ckpt.config)}};
}

Checkpoint checkpoint_from_json(const Json& j) {
  Checkpoint ckpt;
  ckpt.spec = model_spec_from_json(j.at("model"));
  ckpt.params = zero_params(ckpt.spec);
  const auto values = j.at("params").get<std::vector<double>>();
  if (static_cast<Index>(values.size()) != ckpt.params.size()) {
    throw ConfigError("checkpoint holds " + std::to_string(values.size()) + " parameters, model needs " +
                      std::to_string(ckpt.params.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) ckpt.params.values(static_cast<Index>(i)) = values[i];
  if (j.contains("train")) ckpt.config = train_config_from_json(j.at("train"));
  return ckpt;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace gemini
