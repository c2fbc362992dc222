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

#include "acgcl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "acgcl/error.hpp"
#include "acgcl/losses.hpp"
#include "acgcl/optimizer.hpp"
#include "acgcl/parallel.hpp"
#include "acgcl/random.hpp"

namespace acgcl {

namespace {

std::vector<Matrix> flatten(const GcnParams& p) {
  std::vector<Matrix> out;
  for (const auto& layer : p.layers) {
    out.push_back(layer.weight);
    out.push_back(Matrix::scalar(layer.slope));
  }
  return out;
}

void unflatten(const std::vector<Matrix>& flat, GcnParams& p) {
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    p.layers[l].weight = flat[2 * l];
    p.layers[l].slope = flat[2 * l + 1].item();
  }
}

BlockList make_blocks(const std::vector<const Matrix*>& adjacencies) {
  auto blocks = std::make_shared<std::vector<Matrix>>();
  blocks->reserve(adjacencies.size());
  for (const Matrix* a : adjacencies) blocks->push_back(*a);
  return blocks;
}

// B distinct indices from [0, n), ascending.
std::vector<std::size_t> sample_batch(std::size_t n, std::size_t b, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < b; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(b);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

[[noreturn]] void dump_batch(std::size_t epoch, std::size_t step, const std::vector<std::size_t>& batch,
                             const std::vector<Subgraph>& subgraphs, std::span<const double> intra,
                             std::span<const double> inter, double balance) {
  std::ostringstream os;
  os << "non-finite loss at epoch " << epoch << " step " << step << "; balance=" << balance << "; batch:";
  std::size_t shown = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (std::isfinite(intra[i]) && std::isfinite(inter[i]) && shown > 0) continue;
    os << " [node " << subgraphs[batch[i]].center << " L_S=" << intra[i] << " L_CL=" << inter[i] << "]";
    if (++shown == 8) break;
  }
  throw NumericError(os.str());
}

}  // namespace

Splits resolve_splits(const Graph& graph, const TrainConfig& config) {
  if (graph.splits()) return *graph.splits();
  return random_splits(graph.n_nodes(), config.train_frac, config.val_frac, config.seed);
}

namespace {

std::vector<Subgraph> sampled_subgraphs(const Graph& graph, const TrainConfig& config) {
  const std::filesystem::path cache(config.subgraph_cache);
  if (config.subgraph_cache.empty() || !std::filesystem::exists(cache)) {
    auto subgraphs = sample_all_subgraphs(graph, config.subgraph_size, config.ppr());
    if (!config.subgraph_cache.empty()) save_subgraph_indices(subgraphs, cache);
    return subgraphs;
  }
  const auto indices = load_subgraph_indices(cache);
  if (indices.size() != graph.n_nodes()) {
    throw ContractError("subgraph_cache: '" + cache.string() + "' holds " + std::to_string(indices.size()) +
                        " subgraphs for a graph of " + std::to_string(graph.n_nodes()) + " nodes");
  }
  std::vector<Subgraph> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i].size() != config.subgraph_size || indices[i].front() != i) {
      throw ContractError("subgraph_cache: entry " + std::to_string(i) + " of '" + cache.string() +
                          "' does not match subgraph_size " + std::to_string(config.subgraph_size));
    }
    out[i] = extract_subgraph(graph, indices[i]);
  }
  return out;
}

}  // namespace

PreparedGraph prepare(const Graph& graph, const TrainConfig& config) {
  config.validate();
  graph.validate();
  if (config.subgraph_size > graph.n_nodes()) {
    throw ConfigError("subgraph_size: " + std::to_string(config.subgraph_size) + " exceeds the node count " +
                      std::to_string(graph.n_nodes()));
  }
  PreparedGraph p;
  p.subgraphs = sampled_subgraphs(graph, config);
  p.semantics = make_semantics(graph, config.semantic_kind(), config.degree_buckets);
  p.distances =
      estimate_distance_distribution(p.subgraphs, config.distance_metric(), config.distance_samples, config.seed);
  p.splits = resolve_splits(graph, config);
  return p;
}

Matrix embed_all(const GcnParams& params, const std::vector<Subgraph>& subgraphs) {
  Matrix out(subgraphs.size(), params.output_dim());
  parallel_for(subgraphs.size(), [&](std::size_t i) {
    const Matrix h = gcn_forward(params, subgraphs[i].adjacency, subgraphs[i].features);
    std::copy(h.row(0).begin(), h.row(0).end(), out.row(i).begin());
  });
  return out;
}

double validation_accuracy(const Matrix& embeddings, const Graph& graph, const Splits& splits,
                           const TrainConfig& config) {
  if (!graph.labels() || splits.val.empty()) return std::numeric_limits<double>::quiet_NaN();
  return probe_accuracy(embeddings, *graph.labels(), splits.train, splits.val, config.probe());
}

double test_accuracy(const Matrix& embeddings, const Graph& graph, const Splits& splits, const TrainConfig& config) {
  if (!graph.labels()) throw ContractError("probe needs node labels");
  return probe_accuracy(embeddings, *graph.labels(), splits.train, splits.test, config.probe());
}

TrainResult train(const Graph& graph, const TrainConfig& config, MetricsSink* sink) {
  return train(graph, prepare(graph, config), config, sink);
}

TrainResult train(const Graph& graph, const PreparedGraph& prepared, const TrainConfig& config, MetricsSink* sink) {
  config.validate();
  TrainResult result;
  result.params = init_gcn(graph.feature_dim(), config.embed_dim, config.n_layers, config.seed);
  result.report.patience_left = config.patience;
  if (config.patience == 0) return result;

  const auto& subgraphs = prepared.subgraphs;
  const std::size_t n = subgraphs.size();
  const std::size_t k = config.subgraph_size;
  const std::size_t b = std::min(config.batch_size, n);
  if (b < 2) throw SizeError("training needs at least 2 subgraphs per batch");
  const DistanceMetric metric = config.distance_metric();
  const WeightMode mode = config.weight_mode();
  const LossWeights loss_weights = config.loss_weights();
  const SinkhornConfig sinkhorn = config.sinkhorn();
  const PacingConfig pacing = config.pacing_config();

  std::vector<Matrix> norm_original(n), norm_positive(n), norm_negative(n);
  parallel_for(n, [&](std::size_t i) { norm_original[i] = normalize_adjacency(subgraphs[i].adjacency); });

  std::vector<Matrix> flat = flatten(result.params);
  AdamState adam;
  Rng batch_rng = make_rng(config.seed, seed_role::kBatches);
  double best_val = -std::numeric_limits<double>::infinity();
  std::size_t& patience = result.report.patience_left;

  for (std::size_t epoch = 1; epoch <= config.epochs && patience > 0; ++epoch) {
    EpochRow row;
    row.epoch = epoch;
    row.theta = config.pacing_kind() == Pacing::constant ? config.max_difficulty
                                                         : pacing_theta(static_cast<double>(epoch), pacing);
    row.gamma = config.gamma >= 0.0 ? config.gamma : quantile(prepared.distances, row.theta);

    std::vector<MirrorStats> stats(n);
    parallel_for(n, [&](std::size_t i) {
      MirrorGraphs m = cg_augment(subgraphs[i], row.gamma, prepared.semantics, metric);
      norm_positive[i] = normalize_adjacency(m.positive);
      norm_negative[i] = normalize_adjacency(m.negative);
      stats[i] = m.stats;
    });
    for (const auto& s : stats) {
      row.positive_replaced += s.positive_replaced;
      row.negative_replaced += s.negative_replaced;
    }

    const std::vector<std::size_t> negatives = shuffle_negatives(b, config.seed + 7919 * epoch);
    AclThresholds thresholds;
    double loss_sum = 0.0, active_sum = 0.0;
    for (std::size_t step = 1; step <= config.inner_steps; ++step) {
      const auto batch = sample_batch(n, b, batch_rng);
      Matrix x(b * k, graph.feature_dim());
      std::vector<const Matrix*> orig, pos, neg;
      for (std::size_t i = 0; i < b; ++i) {
        const Subgraph& s = subgraphs[batch[i]];
        std::copy(s.features.values().begin(), s.features.values().end(), x.row(i * k).begin());
        orig.push_back(&norm_original[batch[i]]);
        pos.push_back(&norm_positive[batch[i]]);
        neg.push_back(&norm_negative[batch[i]]);
      }

      ad::Tape tape;
      GcnParams current = result.params;
      unflatten(flat, current);
      const GcnVars vars = bind(tape, current, true);
      const TripleVars h = encode_triple(vars, tape.constant(std::move(x)), make_blocks(orig), make_blocks(pos),
                                         make_blocks(neg));
      const ad::Var inter = inter_graph_loss(h.original, h.positive, h.negative, k, loss_weights.xi);
      const ad::Var intra = intra_graph_loss(h.original, k, negatives, loss_weights.epsilon);
      const ad::Var balance = loss_weights.alpha > 0.0 ? balance_loss(h.original, h.positive, h.negative, sinkhorn)
                                                       : tape.constant(Matrix::scalar(0.0));
      const ad::Var per_sample = per_sample_loss(intra, inter, balance, loss_weights);
      const auto losses = per_sample.value().values();
      const double balance_value = balance.value().item();
      for (double l : losses) {
        if (!std::isfinite(l)) dump_batch(epoch, step, batch, subgraphs, intra.value().values(), inter.value().values(), balance_value);
      }

      if (step == 1) {
        thresholds = init_thresholds(losses, config.eta1, config.eta2);
        thresholds.lambda2 = std::max(thresholds.lambda2, 1e-12);
        thresholds.lambda1 = std::max(thresholds.lambda1, 2.0 * thresholds.lambda2);
      }
      const SampleWeights w = compute_weights(mode, losses, thresholds);
      const ad::Var total = weighted_total_loss(per_sample, w.values, config.normalize_total);
      if (!std::isfinite(total.value().item())) {
        dump_batch(epoch, step, batch, subgraphs, intra.value().values(), inter.value().values(), balance_value);
      }
      tape.backward(total);
      std::vector<Matrix> grads;
      for (std::size_t l = 0; l < vars.weights.size(); ++l) {
        grads.push_back(vars.weights[l].grad());
        grads.push_back(vars.slopes[l].grad());
      }
      adam_step(flat, grads, adam, config.learning_rate);

      StepRow s;
      s.epoch = epoch;
      s.step = step;
      s.total = total.value().item();
      s.mean_loss = mean_of(losses);
      s.mean_intra = mean_of(intra.value().values());
      s.mean_inter = mean_of(inter.value().values());
      s.balance = balance_value;
      s.lambda1 = thresholds.lambda1;
      s.lambda2 = thresholds.lambda2;
      s.weights = histogram(w.values);
      s.active_fraction = 1.0 - s.weights.zero;
      loss_sum += s.mean_loss;
      active_sum += s.active_fraction;
      if (sink) {
        sink->write({{"type", "step"},
                     {"epoch", s.epoch},
                     {"step", s.step},
                     {"total", s.total},
                     {"mean_loss", s.mean_loss},
                     {"mean_intra", s.mean_intra},
                     {"mean_inter", s.mean_inter},
                     {"balance", s.balance},
                     {"lambda1", s.lambda1},
                     {"lambda2", s.lambda2},
                     {"active_fraction", s.active_fraction},
                     {"w_zero", s.weights.zero},
                     {"w_fractional", s.weights.fractional},
                     {"w_one", s.weights.one}});
      }
      result.report.steps.push_back(s);
      thresholds = decay_thresholds(thresholds);
    }
    unflatten(flat, result.params);

    row.lambda1 = thresholds.lambda1;
    row.lambda2 = thresholds.lambda2;
    row.mean_loss = loss_sum / static_cast<double>(config.inner_steps);
    row.active_fraction = active_sum / static_cast<double>(config.inner_steps);
    row.val_accuracy = validation_accuracy(embed_all(result.params, subgraphs), graph, prepared.splits, config);
    if (std::isfinite(row.val_accuracy)) {
      if (row.val_accuracy > best_val + config.min_improvement) {
        best_val = row.val_accuracy;
      } else {
        --patience;
      }
    }
    if (sink) {
      sink->write({{"type", "epoch"},
                   {"epoch", row.epoch},
                   {"theta", row.theta},
                   {"gamma", row.gamma},
                   {"lambda1", row.lambda1},
                   {"lambda2", row.lambda2},
                   {"mean_loss", row.mean_loss},
                   {"active_fraction", row.active_fraction},
                   {"val_accuracy", std::isfinite(row.val_accuracy) ? nlohmann::json(row.val_accuracy) : nlohmann::json()},
                   {"positive_replaced", row.positive_replaced},
                   {"negative_replaced", row.negative_replaced},
                   {"patience_left", patience}});
    }
    result.report.epochs.push_back(row);
  }
  return result;
}

void export_embeddings(const Matrix& embeddings, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "node_id";
  for (std::size_t c = 0; c < embeddings.cols(); ++c) out << ",e" << c;
  out << '\n';
  for (std::size_t r = 0; r < embeddings.rows(); ++r) {
    out << r;
    for (std::size_t c = 0; c < embeddings.cols(); ++c) out << ',' << format_double(embeddings(r, c));
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_model(const GcnParams& params, const TrainConfig& config, const std::filesystem::path& path) {
  save_checkpoint(params, config.to_key_values(), path);
}

GcnParams load_model(const std::filesystem::path& path, TrainConfig* config) {
  CheckpointMeta meta;
  GcnParams params = load_checkpoint(path, &meta);
  if (config) *config = from_key_values(meta);
  return params;
}

std::vector<DifficultyRow> difficulty_curve(const GcnParams& params, const PreparedGraph& prepared,
                                            const TrainConfig& config, const std::vector<double>& theta_grid) {
  const DistanceMetric metric = config.distance_metric();
  std::vector<DifficultyRow> rows;
  for (double theta : theta_grid) {
    if (!(theta >= 0.0 && theta <= 100.0)) throw RangeError("difficulty must lie in [0, 100]");
    DifficultyRow row;
    row.theta = theta;
    row.gamma = quantile(prepared.distances, theta);
    std::vector<double> losses(prepared.subgraphs.size());
    parallel_for(losses.size(), [&](std::size_t i) {
      const Subgraph& s = prepared.subgraphs[i];
      const MirrorGraphs m = cg_augment(s, row.gamma, prepared.semantics, metric);
      const EmbeddingTriple e = encode_triple(params, s, m);
      losses[i] = inter_graph_loss(e.original, e.positive, e.negative, config.xi);
    });
    row.mean_loss = mean_of(losses);
    double var = 0.0;
    for (double l : losses) var += (l - row.mean_loss) * (l - row.mean_loss);
    row.std_loss = losses.empty() ? 0.0 : std::sqrt(var / static_cast<double>(losses.size()));
    rows.push_back(row);
  }
  return rows;
}

void save_difficulty_csv(const std::vector<DifficultyRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "theta,gamma,mean_loss,std\n";
  for (const auto& r : rows) {
    out << format_double(r.theta) << ',' << format_double(r.gamma) << ',' << format_double(r.mean_loss) << ','
        << format_double(r.std_loss) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace acgcl
