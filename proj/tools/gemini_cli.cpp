// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: data generation, training, evaluation and the
// desk-scale experiment tables.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O.
// Failures print a JSON object {"error": ..., "message": ...} on stderr.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gemini/eval.hpp"
#include "gemini/experiments.hpp"
#include "gemini/io.hpp"
#include "gemini/parallel.hpp"

namespace fs = std::filesystem;
using namespace gemini;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

/// GEMINI_SEED, when set, replaces every seed taken from flags or recipes.
std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("GEMINI_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto value = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(std::string("GEMINI_SEED is not an unsigned integer: '") + raw + "'");
  }
}

std::uint64_t seed_or(std::uint64_t flag) { return env_seed().value_or(flag); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(flag) + " is empty");
  return out;
}

/// "2..20" or "2,5,10".
std::vector<int> parse_ints(const std::string& text, const char* flag) {
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots)), hi = std::stoi(text.substr(dots + 2));
      if (lo > hi) throw ConfigError(std::string(flag) + ": empty range " + text);
      std::vector<int> out;
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::vector<int> out;
    for (const auto& item : split(text, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw ConfigError(std::string(flag) + " is empty");
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(flag) + ": cannot parse '" + text + "'");
  }
}

std::string labeled_csv_text(const LabeledData& d, const std::vector<std::pair<std::string, LabelVector>>& extra = {}) {
  std::ostringstream out;
  for (Index i = 0; i < d.X.rows(); ++i) {
    for (Index j = 0; j < d.X.cols(); ++j) out << format_double(d.X(i, j)) << ',';
    out << d.labels[static_cast<std::size_t>(i)];
    for (const auto& [name, labels] : extra) out << ',' << labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  return out.str();
}

std::string with_header(const std::string& header, const std::string& body) { return header + "\n" + body; }

void append_history(std::ostringstream& out, const std::string& run, const TrainHistory& h) {
  for (const auto& r : h) {
    out << run << ',' << r.epoch << ',' << format_double(r.objective) << ',' << r.nonempty << ','
        << format_double(r.ari) << '\n';
  }
}

std::string bias_csv(const std::vector<BiasRow>& rows) {
  std::ostringstream out;
  out << "objective,batch,mse,se\n";
  for (const auto& r : rows) out << r.objective << ',' << r.batch << ',' << format_double(r.mse) << ',' << format_double(r.se) << '\n';
  return out.str();
}

std::string boundary_csv(const std::vector<BoundaryDemoResult>& rows) {
  std::ostringstream out;
  out << "epsilon,beta,pi_b,mi_a,mi_b,delta\n";
  for (const auto& r : rows) {
    out << format_double(r.epsilon) << ',' << format_double(r.beta) << ',' << format_double(r.pi_b) << ','
        << format_double(r.mi_a) << ',' << format_double(r.mi_b) << ',' << format_double(r.delta) << '\n';
  }
  return out.str();
}

std::vector<double> default_betas() {
  std::vector<double> betas;
  for (int i = 1; i <= 99; ++i) betas.push_back(0.01 * i);
  return betas;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string kind = "moons";
  int n = 400;
  std::uint64_t seed = 0;
  double noise = 0.03;
  double radius = 1.0;
  std::optional<double> offset;
  double sigma = 1.0;
  double alpha = 3.0;
  double rho = 1.0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const std::uint64_t seed = seed_or(a.seed);
  LabeledData d;
  if (a.kind == "moons") {
    d = gen_moons(a.n, a.radius, a.noise, a.offset.value_or(0.5 * a.radius), seed);
  } else if (a.kind == "gstm") {
    GstmConfig cfg;
    cfg.n = a.n;
    cfg.alpha = a.alpha;
    cfg.sigma = a.sigma;
    cfg.rho = a.rho;
    cfg.seed = seed;
    d = gen_gstm(cfg);
  } else if (a.kind == "blobs") {
    Matrix means(3, 2);
    means << -3, 0, 3, 0, 0, 5;
    d = gen_gaussian_mixture(means, a.sigma, a.n, seed);
  } else if (a.kind == "collinear") {
    Matrix means(3, 2);
    means << -2, 0, 0, 0, 2, 0;
    d = gen_gaussian_mixture(means, a.sigma, a.n, seed);
  } else {
    throw ConfigError("unknown dataset kind '" + a.kind + "' (moons, gstm, blobs, collinear)");
  }
  emit(a.out, labeled_csv_text(d));
  return 0;
}

// ---- train / eval ----------------------------------------------------------

struct TrainArgs {
  std::string recipe;
  std::string data;
  std::string checkpoint;
  std::string history;
};

int run_train(const TrainArgs& a) {
  const Json recipe = read_json(a.recipe);
  std::string data_path = a.data;
  if (data_path.empty()) {
    if (!recipe.contains("data")) throw ConfigError("recipe has no \"data\" entry and --data is missing");
    data_path = recipe.at("data").get<std::string>();
    // Relative data paths are taken from the recipe's directory.
    if (fs::path(data_path).is_relative()) data_path = (fs::path(a.recipe).parent_path() / data_path).string();
  }
  const LabeledData data = read_labeled_csv(data_path);

  Json model = recipe.at("model");
  if (!model.contains("input_dim")) model["input_dim"] = data.X.cols();
  if (!model.contains("n_samples")) model["n_samples"] = data.X.rows();
  Json train_json = recipe.at("train");
  if (!train_json.contains("record_timing")) train_json["record_timing"] = false;
  if (const auto s = env_seed()) {
    model["seed"] = *s;
    train_json["seed"] = *s;
  }
  const ModelSpec spec = model_spec_from_json(model);
  const TrainConfig cfg = train_config_from_json(train_json);

  const TrainResult result = train(spec, data.X, cfg, &data.labels);
  write_json(a.checkpoint, checkpoint_to_json({spec, result.params, cfg}));
  if (!a.history.empty()) write_history_csv(a.history, result.history);
  return 0;
}

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string out;
  std::string entropy_out;
  double order = 2.0;
};

int run_eval(const EvalArgs& a) {
  const Checkpoint ck = checkpoint_from_json(read_json(a.checkpoint));
  const LabeledData data = read_labeled_csv(a.data);
  std::optional<GeometryMatrix> geometry;
  if (ck.config.objective.needs_geometry()) geometry = build_geometry(data.X, *ck.config.geometry);
  const EpochRecord rec = evaluate_model(ck.spec, ck.params, data.X, ck.config.objective,
                                         geometry ? &*geometry : nullptr, &data.labels);
  const Json metrics{{"objective_name", ck.config.objective.name()},
                     {"objective", rec.objective},
                     {"ari", rec.ari},
                     {"nonempty", rec.nonempty},
                     {"clusters", ck.spec.clusters},
                     {"n", data.X.rows()}};
  emit(a.out, metrics.dump(2) + "\n");

  if (!a.entropy_out.empty()) {
    const SoftAssignment P = forward(ck.params, ck.spec, data.X);
    std::ostringstream out;
    out << "sample,renyi\n";
    for (Index i = 0; i < P.n(); ++i) {
      out << i << ',' << format_double(renyi_entropy(P.probs().row(i).transpose(), a.order)) << '\n';
    }
    write_text(a.entropy_out, out.str());
  }
  return 0;
}

// ---- tables ----------------------------------------------------------------

struct BiasArgs {
  int n = 1000;
  int k = 10;
  int trials = 50;
  std::string batches = "10,20,50,100,200,500,1000";
  std::string objectives;
  std::uint64_t seed = 0;
  std::string out;
};

int run_bias(const BiasArgs& a) {
  const auto objectives = a.objectives.empty() ? bias_objectives() : split(a.objectives, ',');
  emit(a.out, bias_csv(bias_study(a.n, a.k, objectives, parse_ints(a.batches, "--batches"), a.trials, seed_or(a.seed))));
  return 0;
}

struct BoundaryArgs {
  std::string epsilons = "1e-9,0.01,0.05,0.1";
  std::string betas;
  std::string out;
};

int run_boundary(const BoundaryArgs& a) {
  const auto betas = a.betas.empty() ? default_betas() : parse_doubles(a.betas, "--betas");
  emit(a.out, boundary_csv(boundary_sweep(parse_doubles(a.epsilons, "--epsilons"), betas)));
  return 0;
}

struct BenchArgs {
  int n = 100;
  std::string k = "2..20";
  int repeats = 3;
  std::uint64_t seed = 0;
  std::string out;
};

int run_bench_cmd(const BenchArgs& a) {
  std::ostringstream out;
  out << "objective,k,ms\n";
  for (const auto& r : run_bench(a.n, parse_ints(a.k, "--k"), a.repeats, seed_or(a.seed))) {
    out << r.objective << ',' << r.clusters << ',' << format_double(r.ms) << '\n';
  }
  emit(a.out, out.str());
  return 0;
}

// ---- repro -----------------------------------------------------------------

struct ReproArgs {
  std::string figure;
  std::string out_dir = ".";
};

int run_repro(const ReproArgs& a) {
  fs::create_directories(a.out_dir);
  const auto path = [&](const std::string& name) { return (fs::path(a.out_dir) / name).string(); };
  const std::uint64_t seed = seed_or(0);

  if (a.figure == "fig2") {
    std::ostringstream out;
    out << "objective,three_clusters,merged_left\n";
    for (const auto& r : separation_study(200, seed)) {
      out << r.objective << ',' << format_double(r.balanced) << ',' << format_double(r.merged) << '\n';
    }
    write_text(path("fig2.csv"), out.str());
  } else if (a.figure == "fig3") {
    write_text(path("fig3.csv"), bias_csv(bias_study(1000, 10, bias_objectives(),
                                                     {10, 20, 50, 100, 200, 500, 1000}, 50, seed)));
  } else if (a.figure == "fig4") {
    const auto mmd_recipe = categorical_recipe("mmd-ova", seed);
    const auto mmd = run_recipe(mmd_recipe);
    const auto kl = run_recipe(categorical_recipe("kl-ova", seed));
    write_text(path("fig4_assignments.csv"),
               with_header("x,y,label,mmd_ova,kl_ova",
                           labeled_csv_text(mmd_recipe.data, {{"mmd", mmd.predicted}, {"kl", kl.predicted}})));
    std::ostringstream hist;
    hist << "run,epoch,objective,nonempty,ari\n";
    append_history(hist, "mmd-ova", mmd.result.history);
    append_history(hist, "kl-ova", kl.result.history);
    write_text(path("fig4_history.csv"), hist.str());
  } else if (a.figure == "fig7") {
    const auto base = moons_recipe("wasserstein-ovo", 2, seed);
    const auto w2 = run_recipe(base);
    const auto w5 = run_recipe(moons_recipe("wasserstein-ovo", 5, seed));
    const auto kl5 = run_recipe(moons_recipe("kl-ova", 5, seed));
    write_text(path("fig7_assignments.csv"),
               with_header("x,y,label,wasserstein_ovo_k2,wasserstein_ovo_k5,kl_ova_k5",
                           labeled_csv_text(base.data, {{"w2", w2.predicted}, {"w5", w5.predicted}, {"kl5", kl5.predicted}})));
    std::ostringstream hist;
    hist << "run,epoch,objective,nonempty,ari\n";
    append_history(hist, "wasserstein-ovo-k2", w2.result.history);
    append_history(hist, "wasserstein-ovo-k5", w5.result.history);
    append_history(hist, "kl-ova-k5", kl5.result.history);
    write_text(path("fig7_history.csv"), hist.str());
  } else if (a.figure == "fig9") {
    write_text(path("fig9.csv"), boundary_csv(boundary_sweep({1e-9, 0.01, 0.05, 0.1}, default_betas())));
  } else {
    throw ConfigError("unknown figure '" + a.figure + "' (fig2, fig3, fig4, fig7, fig9)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GEMINI discriminative clustering toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads")->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a labelled synthetic data set as CSV");
  gen_cmd->add_option("--kind", gen.kind, "moons, gstm, blobs or collinear")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Samples (moons) or samples per component")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Moons noise")->capture_default_str();
  gen_cmd->add_option("--radius", gen.radius, "Moons radius")->capture_default_str();
  gen_cmd->add_option("--offset", gen.offset, "Moons vertical offset (default radius/2)");
  gen_cmd->add_option("--sigma", gen.sigma, "Component standard deviation")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "GSTM mean spread")->capture_default_str();
  gen_cmd->add_option("--rho", gen.rho, "GSTM Student-t degrees of freedom")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV (stdout when omitted)");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a JSON recipe");
  train_cmd->add_option("--recipe", tr.recipe, "Recipe JSON with data, model and train entries")->required();
  train_cmd->add_option("--data", tr.data, "Labelled CSV, overrides the recipe");
  train_cmd->add_option("--checkpoint", tr.checkpoint, "Output checkpoint JSON")->required();
  train_cmd->add_option("--history", tr.history, "Output history CSV");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on labelled data");
  eval_cmd->add_option("--checkpoint", ev.checkpoint)->required();
  eval_cmd->add_option("--data", ev.data)->required();
  eval_cmd->add_option("--out", ev.out, "Metrics JSON (stdout when omitted)");
  eval_cmd->add_option("--entropy-out", ev.entropy_out, "Per-sample Renyi entropy CSV");
  eval_cmd->add_option("--order", ev.order, "Renyi order")->capture_default_str();

  BiasArgs bi;
  auto* bias_cmd = app.add_subcommand("bias", "Batch estimator MSE against the full-data value");
  bias_cmd->add_option("--n", bi.n)->capture_default_str();
  bias_cmd->add_option("--k", bi.k)->capture_default_str();
  bias_cmd->add_option("--trials", bi.trials)->capture_default_str();
  bias_cmd->add_option("--batches", bi.batches)->capture_default_str();
  bias_cmd->add_option("--objectives", bi.objectives, "Comma-separated objective names");
  bias_cmd->add_option("--seed", bi.seed)->capture_default_str();
  bias_cmd->add_option("--out", bi.out);

  BoundaryArgs bd;
  auto* boundary_cmd = app.add_subcommand("boundary-demo", "Closed-form MI of two decision boundaries");
  boundary_cmd->add_option("--epsilons", bd.epsilons)->capture_default_str();
  boundary_cmd->add_option("--betas", bd.betas, "Comma-separated, default 0.01..0.99");
  boundary_cmd->add_option("--out", bd.out);

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "Time one objective evaluation per K");
  bench_cmd->add_option("--n", be.n)->capture_default_str();
  bench_cmd->add_option("--k", be.k, "Range a..b or list")->capture_default_str();
  bench_cmd->add_option("--repeats", be.repeats)->capture_default_str();
  bench_cmd->add_option("--seed", be.seed)->capture_default_str();
  bench_cmd->add_option("--out", be.out);

  ReproArgs re;
  auto* repro_cmd = app.add_subcommand("repro", "Write the data behind one figure");
  repro_cmd->add_option("figure", re.figure, "fig2, fig3, fig4, fig7 or fig9")->required();
  repro_cmd->add_option("--out-dir", re.out_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitConfig);
  }

  try {
    if (threads > 0) set_max_threads(threads);
    if (*gen_cmd) return run_gen(gen);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_eval(ev);
    if (*bias_cmd) return run_bias(bi);
    if (*boundary_cmd) return run_boundary(bd);
    if (*bench_cmd) return run_bench_cmd(be);
    if (*repro_cmd) return run_repro(re);
  } catch (const IoError& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const NumericError& e) {
    return fail("numeric", e.what(), kExitNumeric);
  } catch (const Json::exception& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const Error& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
