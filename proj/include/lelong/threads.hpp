// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <cstddef>
#include <functional>

namespace lelong {

// Global worker count (0 = hardware concurrency). Set once at startup.
void set_worker_count(int n);
int worker_count();

// Runs fn(i) for i in [0, n). Tasks are statically partitioned; each task
// must write only to its own output slot, which keeps results independent
// of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lelong
