// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lelong/kernels.hpp"

namespace lelong::kern {

namespace {
const KernelTable* g_active = nullptr;

const KernelTable* resolve(const std::string& name) {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") {
    const KernelTable* t = avx2_table();
    if (!t) throw std::runtime_error("avx2 kernels requested but CPU lacks AVX2/FMA");
    return t;
  }
  if (name == "auto" || name.empty()) {
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
  }
  throw std::invalid_argument("unknown kernel backend: " + name);
}
}  // namespace

const KernelTable& active() {
  if (!g_active) {
    const char* env = std::getenv("LELONG_KERNEL");
    g_active = resolve(env ? env : "auto");
  }
  return *g_active;
}

void set_active(const std::string& name) { g_active = resolve(name); }

}  // namespace lelong::kern
