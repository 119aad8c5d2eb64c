// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Compiled with -mavx2 -mfma; only reached when the CPU reports support.
#include "vec_avx2.hpp"
#include "kernels_impl.inl"

namespace lelong::kern {

const KernelTable* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (!supported) return nullptr;
  static const KernelTable t = make_table<VecAvx2>("avx2");
  return &t;
}

}  // namespace lelong::kern
