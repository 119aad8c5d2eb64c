// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "vec_scalar.hpp"
#include "kernels_impl.inl"

namespace lelong::kern {

const KernelTable& scalar_table() {
  static const KernelTable t = make_table<VecScalar>("scalar");
  return t;
}

}  // namespace lelong::kern
