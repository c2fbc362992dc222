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

#include <atomic>
#include <cstdlib>
#include <string>

#include "acgcl/error.hpp"
#include "acgcl/kernels.hpp"

namespace acgcl::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* detect() {
  if (const char* env = std::getenv("ACGCL_KERNELS"); env != nullptr && *env != '\0') {
    const Backend wanted = parse_backend(env);
    if (available(wanted)) return &table(wanted);
  }
#if defined(__aarch64__)
  return &neon::table();
#else
  if (cpu_has_avx2()) return &table(Backend::avx2);
  return &scalar::table();
#endif
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{detect()};
  return ptr;
}

}  // namespace

bool available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return cpu_has_avx2();
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend backend) {
  if (!available(backend)) throw ConfigError("kernel backend not available on this CPU");
  switch (backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return avx2::table();
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return neon::table();
#endif
    default:
      return scalar::table();
  }
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void select(Backend backend) { current().store(&table(backend), std::memory_order_relaxed); }

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw ConfigError("unknown kernel backend '" + std::string(name) + "'");
}

}  // namespace acgcl::kernels
