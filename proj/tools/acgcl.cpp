/*
 * Copyright 2026 The ACGCL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acgcl/config.hpp"
#include "acgcl/error.hpp"
#include "acgcl/graph.hpp"
#include "acgcl/trainer.hpp"

namespace fs = std::filesystem;
using namespace acgcl;

namespace {

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
  std::string data;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.path, "configuration file (key = value lines)");
  if (config_required) opt->required();
  cmd->add_option("--set", args.overrides, "override a configuration key, as key=value")->take_all();
  cmd->add_option("--data", args.data, "graph directory (overrides the data key)");
}

// Relative data paths resolve against the configuration file's directory.
TrainConfig load_config(const ConfigArgs& args) {
  TrainConfig config = args.path.empty() ? apply_overrides(TrainConfig{}, args.overrides)
                                         : parse_config(args.path, args.overrides);
  if (!args.data.empty()) {
    config.data = args.data;
  } else if (!config.data.empty() && fs::path(config.data).is_relative() && !args.path.empty()) {
    const fs::path candidate = fs::path(args.path).parent_path() / config.data;
    if (!fs::exists(config.data) && fs::exists(candidate)) config.data = candidate.string();
  }
  if (config.data.empty()) throw ConfigError("data: no graph directory given");
  return config;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

nlohmann::json epoch_json(const EpochRow& r) {
  return {{"epoch", r.epoch},
          {"theta", r.theta},
          {"gamma", r.gamma},
          {"lambda1", r.lambda1},
          {"lambda2", r.lambda2},
          {"mean_loss", r.mean_loss},
          {"active_fraction", r.active_fraction},
          {"val_accuracy", std::isfinite(r.val_accuracy) ? nlohmann::json(r.val_accuracy) : nlohmann::json()}};
}

int cmd_train(const ConfigArgs& args, const std::string& out_dir) {
  const TrainConfig config = load_config(args);
  const Graph graph = load_graph_dir(config.data);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir + "': " + ec.message());
  const fs::path out(out_dir);
  MetricsSink sink(out / "metrics.jsonl");
  const PreparedGraph prepared = prepare(graph, config);
  TrainResult result = train(graph, prepared, config, &sink);
  const fs::path checkpoint = out / "checkpoint.txt";
  save_model(result.params, config, checkpoint);
  result.report.checkpoint = checkpoint.string();
  const Matrix embeddings = embed_all(result.params, prepared.subgraphs);
  export_embeddings(embeddings, out / "embeddings.csv");

  nlohmann::json report;
  report["checkpoint"] = checkpoint.string();
  report["patience_left"] = result.report.patience_left;
  report["epochs"] = nlohmann::json::array();
  for (const auto& r : result.report.epochs) report["epochs"].push_back(epoch_json(r));
  if (!result.report.epochs.empty()) {
    const double v = result.report.epochs.back().val_accuracy;
    report["final_val_accuracy"] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
  }
  if (graph.labels()) report["test_accuracy"] = test_accuracy(embeddings, graph, prepared.splits, config);
  std::ofstream(out / "report.json") << report.dump(2) << '\n';
  std::cout << report.dump() << '\n';
  return 0;
}

int cmd_evaluate(const std::string& checkpoint, const std::string& data) {
  TrainConfig config;
  const GcnParams params = load_model(checkpoint, &config);
  if (!data.empty()) config.data = data;
  const Graph graph = load_graph_dir(config.data);
  if (!graph.labels()) throw ContractError("evaluate needs labels.csv in '" + config.data + "'");
  if (graph.feature_dim() != params.input_dim()) {
    throw ShapeError("checkpoint expects " + std::to_string(params.input_dim()) + " features, data has " +
                     std::to_string(graph.feature_dim()));
  }
  const PreparedGraph prepared = prepare(graph, config);
  const Matrix embeddings = embed_all(params, prepared.subgraphs);
  nlohmann::json out;
  const double val = validation_accuracy(embeddings, graph, prepared.splits, config);
  out["val_accuracy"] = std::isfinite(val) ? nlohmann::json(val) : nlohmann::json();
  out["test_accuracy"] = test_accuracy(embeddings, graph, prepared.splits, config);
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_augment_inspect(const ConfigArgs& args, long node, double theta, const std::string& out_path) {
  const TrainConfig config = load_config(args);
  const Graph graph = load_graph_dir(config.data);
  if (node < 0 || static_cast<std::size_t>(node) >= graph.n_nodes()) {
    throw IndexError("node " + std::to_string(node) + " out of range [0, " + std::to_string(graph.n_nodes()) + ")");
  }
  const PreparedGraph prepared = prepare(graph, config);
  const double gamma = quantile(prepared.distances, theta);
  const Subgraph& s = prepared.subgraphs[static_cast<std::size_t>(node)];
  const MirrorGraphs m = cg_augment(s, gamma, prepared.semantics, config.distance_metric(), true);
  // One long-format table: a "pair" row per position pair with the three
  // edge states, then a "replacement" row per mirror found.
  std::ostringstream csv;
  csv << "record,a,b,parent_a,parent_b,original,positive,negative,polarity,c,d,distance_sum,mirrored_edge\n";
  const auto& pid = s.parent_indices;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      csv << "pair," << a << ',' << b << ',' << pid[a] << ',' << pid[b] << ',' << s.adjacency(a, b) << ','
          << m.positive(a, b) << ',' << m.negative(a, b) << ",,,,,\n";
  for (const auto& r : m.log) {
    csv << "replacement," << r.a << ',' << r.b << ',' << pid[r.a] << ',' << pid[r.b] << ',' << r.original_edge
        << ",,," << (r.polarity == Polarity::positive ? "positive" : "negative") << ',' << r.c << ',' << r.d << ','
        << format_double(r.distance_sum) << ',' << r.mirrored_edge << '\n';
  }
  std::cerr << "node " << node << " theta " << format_double(theta) << " gamma " << format_double(gamma)
            << ": positive " << m.stats.positive_replaced << " replaced / " << m.stats.positive_unmatched
            << " unmatched, negative " << m.stats.negative_replaced << " replaced / " << m.stats.negative_unmatched
            << " unmatched\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::trunc);
    if (!f || !(f << csv.str())) throw IoError("cannot write '" + out_path + "'");
  }
  std::cout << csv.str();
  return 0;
}

int cmd_validate_difficulty(const ConfigArgs& args, const std::string& grid_text, const std::string& checkpoint,
                            const std::string& out_path) {
  const TrainConfig config = load_config(args);
  const std::vector<double> grid = parse_list(grid_text, "grid");
  const Graph graph = load_graph_dir(config.data);
  const PreparedGraph prepared = prepare(graph, config);
  GcnParams params;
  if (!checkpoint.empty()) {
    params = load_model(checkpoint);
  } else {
    params = train(graph, prepared, config).params;
  }
  const auto rows = difficulty_curve(params, prepared, config, grid);
  if (!out_path.empty()) {
    save_difficulty_csv(rows, out_path);
  }
  std::cout << "theta,gamma,mean_loss,std\n";
  for (const auto& r : rows) {
    std::cout << format_double(r.theta) << ',' << format_double(r.gamma) << ',' << format_double(r.mean_loss) << ','
              << format_double(r.std_loss) << '\n';
  }
  return 0;
}

int cmd_gen_sbm(const std::string& blocks, SbmConfig config, std::uint64_t seed, const std::string& out) {
  config.block_sizes.clear();
  for (double b : parse_list(blocks, "blocks")) {
    if (b < 1 || b != static_cast<double>(static_cast<std::size_t>(b))) {
      throw ConfigError("blocks: sizes must be positive integers");
    }
    config.block_sizes.push_back(static_cast<std::size_t>(b));
  }
  const Graph g = generate_sbm(config, seed);
  save_graph_dir(g, out);
  std::cout << nlohmann::json{{"nodes", g.n_nodes()}, {"edges", g.n_edges()}, {"out", out}}.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acgcl: subgraph contrastive learning with curriculum reweighting"};
  app.require_subcommand(1);

  ConfigArgs train_args;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "train an encoder");
  add_config_options(train_cmd, train_args);
  train_cmd->add_option("--out", train_out, "output directory")->required();

  std::string eval_checkpoint, eval_data;
  auto* eval_cmd = app.add_subcommand("evaluate", "probe a trained checkpoint");
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--data", eval_data, "graph directory (default: the one recorded in the checkpoint)");

  ConfigArgs inspect_args;
  long inspect_node = 0;
  double inspect_theta = 0.0;
  auto* inspect_cmd = app.add_subcommand("augment-inspect", "show mirror replacements for one node's subgraph");
  add_config_options(inspect_cmd, inspect_args);
  inspect_cmd->add_option("--node", inspect_node, "center node id")->required();
  inspect_cmd->add_option("--theta", inspect_theta, "difficulty in percent points")->required();
  std::string inspect_out;
  inspect_cmd->add_option("--out", inspect_out, "also write the CSV here");

  ConfigArgs vd_args;
  std::string vd_grid = "10,20,30,40,50", vd_checkpoint, vd_out;
  auto* vd_cmd = app.add_subcommand("validate-difficulty", "mean inter-graph loss of a frozen encoder per difficulty");
  add_config_options(vd_cmd, vd_args);
  vd_cmd->add_option("--grid", vd_grid, "comma-separated difficulties");
  vd_cmd->add_option("--checkpoint", vd_checkpoint, "frozen encoder (trained from the config when absent)");
  vd_cmd->add_option("--out", vd_out, "CSV output path");

  std::string sbm_blocks, sbm_out;
  std::uint64_t sbm_seed = 0;
  SbmConfig sbm;
  auto* sbm_cmd = app.add_subcommand("gen-sbm", "generate a stochastic block model graph directory");
  sbm_cmd->add_option("--blocks", sbm_blocks, "comma-separated block sizes")->required();
  sbm_cmd->add_option("--p-intra", sbm.p_intra, "edge probability within a block");
  sbm_cmd->add_option("--p-inter", sbm.p_inter, "edge probability across blocks");
  sbm_cmd->add_option("--feature-dim", sbm.feature_dim, "feature dimension");
  sbm_cmd->add_option("--noise", sbm.feature_noise, "feature noise standard deviation");
  sbm_cmd->add_option("--train-frac", sbm.train_fraction, "train split fraction");
  sbm_cmd->add_option("--val-frac", sbm.val_fraction, "validation split fraction");
  sbm_cmd->add_option("--seed", sbm_seed, "random seed");
  sbm_cmd->add_option("--out", sbm_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    std::cerr << "UsageError: " << msg << '\n';
    return 2;
  }

  try {
    if (*train_cmd) return cmd_train(train_args, train_out);
    if (*eval_cmd) return cmd_evaluate(eval_checkpoint, eval_data);
    if (*inspect_cmd) return cmd_augment_inspect(inspect_args, inspect_node, inspect_theta, inspect_out);
    if (*vd_cmd) return cmd_validate_difficulty(vd_args, vd_grid, vd_checkpoint, vd_out);
    if (*sbm_cmd) return cmd_gen_sbm(sbm_blocks, sbm, sbm_seed, sbm_out);
  } catch (const std::exception& e) {
    std::cerr << describe(e) << '\n';
    return 1;
  }
  return 0;
}
