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

#pragma once

#include <cstdint>
#include <random>

namespace acgcl {

using Rng = std::mt19937_64;

// Every random stream is seeded with the user seed plus a fixed role offset.
namespace seed_role {
inline constexpr std::uint64_t kGraph = 0;
inline constexpr std::uint64_t kSplits = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kBatches = 3;
inline constexpr std::uint64_t kShuffle = 4;
inline constexpr std::uint64_t kDistances = 5;
inline constexpr std::uint64_t kProbe = 6;
}  // namespace seed_role

inline Rng make_rng(std::uint64_t seed, std::uint64_t role) { return Rng(seed + role); }

}  // namespace acgcl
