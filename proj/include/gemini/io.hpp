// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gemini/core.hpp"
#include "gemini/geometry.hpp"
#include "gemini/models.hpp"
#include "gemini/synthdata.hpp"
#include "gemini/train.hpp"

namespace gemini {

using Json = nlohmann::json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Header-free, comma-separated numeric matrix.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Features followed by an integer label column.
LabeledData read_labeled_csv(const std::string& path);
void write_labeled_csv(const std::string& path, const LabeledData& data);

void write_history_csv(const std::string& path, const TrainHistory& history);

Json geometry_to_json(const GeometrySpec& spec);
/// `{"kind": "precomputed", "path": ..., "is_kernel": ...}` loads the matrix from CSV.
GeometrySpec geometry_from_json(const Json& j);

Json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const Json& j);

Json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const Json& j);

struct Checkpoint {
  ModelSpec spec;
  ModelParams params;
  TrainConfig config;
};

Json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const Json& j);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace gemini
