// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lelong {

namespace {
int g_workers = 0;
}

void set_worker_count(int n) { g_workers = n < 0 ? 0 : n; }

int worker_count() {
  if (g_workers > 0) return g_workers;
  if (const char* env = std::getenv("LELONG_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next(0);
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int use = static_cast<int>(std::min<std::size_t>(workers, n));
  pool.reserve(use - 1);
  for (int w = 1; w < use; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

}  // namespace lelong
