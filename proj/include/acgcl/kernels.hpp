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

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops. Every kernel has a scalar reference
// implementation and, where the target supports it, a SIMD variant. The
// active table is picked once at startup from CPU feature detection and can
// be overridden with ACGCL_KERNELS=scalar|avx2|neon or kernels::select().
namespace acgcl::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // sum_i |a[i] - b[i]|
  double (*manhattan_distance)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] = x[i] * scale
  void (*scale)(const double* x, double scale, double* y, std::size_t n);
};

namespace scalar {
const KernelTable& table();
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(__aarch64__)
namespace neon {
const KernelTable& table();
}
#endif

bool available(Backend backend);
const KernelTable& table(Backend backend);

// Table used by the rest of the library.
const KernelTable& active();

// Switches the active table; throws ConfigError if unavailable on this CPU.
void select(Backend backend);

Backend parse_backend(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}
inline double manhattan_distance(std::span<const double> a, std::span<const double> b) {
  return active().manhattan_distance(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace acgcl::kernels
