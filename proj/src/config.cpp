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

#include "acgcl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>

#include "acgcl/error.hpp"

namespace acgcl {

namespace {

// Seeds are 64-bit on every platform; wrapped so the variant stays
// well-formed where size_t and uint64_t coincide.
struct SeedRef {
  std::uint64_t* p;
};

using Field = std::variant<std::string*, SeedRef, std::size_t*, double*, bool*>;

std::vector<std::pair<std::string_view, Field>> fields(TrainConfig& c) {
  return {
      {"data", &c.data},
      {"seed", SeedRef{&c.seed}},
      {"subgraph_size", &c.subgraph_size},
      {"embed_dim", &c.embed_dim},
      {"n_layers", &c.n_layers},
      {"learning_rate", &c.learning_rate},
      {"batch_size", &c.batch_size},
      {"inner_steps", &c.inner_steps},
      {"epochs", &c.epochs},
      {"ramp_epochs", &c.ramp_epochs},
      {"theta0", &c.theta0},
      {"max_difficulty", &c.max_difficulty},
      {"pacing", &c.pacing},
      {"gamma", &c.gamma},
      {"acl_mode", &c.acl_mode},
      {"eta1", &c.eta1},
      {"eta2", &c.eta2},
      {"alpha", &c.alpha},
      {"beta", &c.beta},
      {"xi", &c.xi},
      {"epsilon", &c.epsilon},
      {"normalize_total", &c.normalize_total},
      {"metric", &c.metric},
      {"semantics", &c.semantics},
      {"degree_buckets", &c.degree_buckets},
      {"patience", &c.patience},
      {"min_improvement", &c.min_improvement},
      {"teleport", &c.teleport},
      {"dense_cutoff", &c.dense_cutoff},
      {"sinkhorn_reg", &c.sinkhorn_reg},
      {"sinkhorn_iters", &c.sinkhorn_iters},
      {"sinkhorn_tol", &c.sinkhorn_tol},
      {"distance_samples", &c.distance_samples},
      {"subgraph_cache", &c.subgraph_cache},
      {"probe_iters", &c.probe_iters},
      {"probe_l2", &c.probe_l2},
      {"probe_lr", &c.probe_lr},
      {"train_frac", &c.train_frac},
      {"val_frac", &c.val_frac},
  };
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key) + ": cannot parse '" + std::string(value) + "'");
  }
  return out;
}

void require(bool ok, std::string_view key, const std::string& what) {
  if (!ok) throw ConfigError(std::string(key) + ": " + what);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void TrainConfig::set(std::string_view key, std::string_view value) {
  for (auto& [name, field] : fields(*this)) {
    if (name != key) continue;
    std::visit(
        [&](auto p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<decltype(p), SeedRef>) {
            *p.p = parse_number<std::uint64_t>(key, value);
          } else if constexpr (std::is_same_v<T, std::string>) {
            *p = std::string(value);
          } else if constexpr (std::is_same_v<T, bool>) {
            if (value == "true" || value == "1") {
              *p = true;
            } else if (value == "false" || value == "0") {
              *p = false;
            } else {
              throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(value) + "'");
            }
          } else {
            *p = parse_number<T>(key, value);
          }
        },
        field);
    return;
  }
  throw ConfigError(std::string(key) + ": unknown key");
}

std::vector<std::pair<std::string, std::string>> TrainConfig::to_key_values() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& [name, field] : fields(const_cast<TrainConfig&>(*this))) {
    std::string text = std::visit(
        [](auto p) -> std::string {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<decltype(p), SeedRef>) {
            return std::to_string(*p.p);
          } else if constexpr (std::is_same_v<T, std::string>) {
            return *p;
          } else if constexpr (std::is_same_v<T, bool>) {
            return *p ? "true" : "false";
          } else if constexpr (std::is_same_v<T, double>) {
            return format_double(*p);
          } else {
            return std::to_string(*p);
          }
        },
        field);
    out.emplace_back(std::string(name), std::move(text));
  }
  return out;
}

void TrainConfig::validate() const {
  require(subgraph_size >= 2, "subgraph_size", "must be >= 2");
  require(embed_dim >= 1, "embed_dim", "must be >= 1");
  require(n_layers == 1 || n_layers == 2, "n_layers", "must be 1 or 2");
  require(learning_rate > 0.0, "learning_rate", "must be > 0");
  require(batch_size >= 2, "batch_size", "must be >= 2");
  require(inner_steps >= 1, "inner_steps", "must be >= 1");
  require(epochs >= 1, "epochs", "must be >= 1");
  require(ramp_epochs == 0.0 || ramp_epochs >= 1.0, "ramp_epochs", "must be 0 (use epochs) or >= 1");
  require(theta0 > 0.0, "theta0", "must be > 0");
  require(max_difficulty <= 100.0, "max_difficulty", "must be <= 100");
  require(theta0 <= max_difficulty, "theta0", "must be <= max_difficulty (" + format_double(max_difficulty) + ")");
  require(pacing == "linear" || pacing == "constant", "pacing", "must be linear or constant");
  try {
    weight_mode();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("acl_mode: ") + e.what());
  }
  require(eta1 > 1.0, "eta1", "must be > 1");
  require(eta2 > 0.0 && eta2 < 1.0, "eta2", "must be in (0, 1)");
  require(alpha >= 0.0, "alpha", "must be >= 0");
  require(beta >= 0.0, "beta", "must be >= 0");
  require(xi >= 0.0, "xi", "must be >= 0");
  require(epsilon >= 0.0, "epsilon", "must be >= 0");
  try {
    distance_metric();
  } catch (const Error& e) {
    throw ConfigError(std::string("metric: ") + e.what());
  }
  try {
    semantic_kind();
  } catch (const Error& e) {
    throw ConfigError(std::string("semantics: ") + e.what());
  }
  require(degree_buckets >= 1, "degree_buckets", "must be >= 1");
  require(min_improvement >= 0.0, "min_improvement", "must be >= 0");
  require(teleport > 0.0 && teleport < 1.0, "teleport", "must be in (0, 1)");
  require(sinkhorn_reg > 0.0, "sinkhorn_reg", "must be > 0");
  require(sinkhorn_iters >= 1, "sinkhorn_iters", "must be >= 1");
  require(sinkhorn_tol > 0.0, "sinkhorn_tol", "must be > 0");
  require(distance_samples >= 1, "distance_samples", "must be >= 1");
  require(probe_iters >= 1, "probe_iters", "must be >= 1");
  require(probe_l2 >= 0.0, "probe_l2", "must be >= 0");
  require(probe_lr > 0.0, "probe_lr", "must be > 0");
  require(train_frac > 0.0 && train_frac < 1.0, "train_frac", "must be in (0, 1)");
  require(val_frac >= 0.0 && train_frac + val_frac < 1.0, "val_frac", "must be >= 0 with train_frac + val_frac < 1");
}

PacingConfig TrainConfig::pacing_config() const {
  return {theta0, max_difficulty, ramp_epochs > 0.0 ? ramp_epochs : static_cast<double>(epochs)};
}

Pacing TrainConfig::pacing_kind() const { return pacing == "constant" ? Pacing::constant : Pacing::linear; }

SinkhornConfig TrainConfig::sinkhorn() const {
  SinkhornConfig s;
  s.reg_scale = sinkhorn_reg;
  s.max_iters = sinkhorn_iters;
  s.tolerance = sinkhorn_tol;
  return s;
}

PprOptions TrainConfig::ppr() const {
  PprOptions p;
  p.teleport = teleport;
  p.dense_cutoff = dense_cutoff;
  return p;
}

TrainConfig parse_config_text(std::string_view text, std::string_view origin) {
  TrainConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

TrainConfig apply_overrides(TrainConfig config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    config.set(trim(std::string_view(o).substr(0, eq)), trim(std::string_view(o).substr(eq + 1)));
  }
  config.validate();
  return config;
}

TrainConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_overrides(parse_config_text(ss.str(), path.string()), overrides);
}

TrainConfig from_key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  TrainConfig config;
  for (const auto& [k, v] : kv) config.set(k, v);
  config.validate();
  return config;
}

}  // namespace acgcl
