// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_SRC_PARALLEL_HPP
#define VDS_SRC_PARALLEL_HPP

#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "vds/core.hpp"

namespace vds::detail {

// Strided task loop. Each task writes only its own output slot, so results
// are identical for any worker count.
inline void parallel_for(Index count, int threads, const std::function<void(Index)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = int(std::min<Index>(threads, count));
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  pool.reserve(size_t(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (Index i = t; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vds::detail

#endif  // VDS_SRC_PARALLEL_HPP
