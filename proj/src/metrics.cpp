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

#include "acgcl/metrics.hpp"

#include "acgcl/error.hpp"

namespace acgcl {

MetricsSink::MetricsSink(const std::filesystem::path& path) : out_(path, std::ios::trunc), path_(path.string()) {
  if (!out_) throw IoError("cannot open metrics file '" + path_ + "'");
}

void MetricsSink::write(const nlohmann::json& record) {
  if (!out_.is_open()) return;
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_ + "'");
}

}  // namespace acgcl
