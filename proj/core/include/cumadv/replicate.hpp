#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cumadv/rng.hpp"

namespace cumadv {

/// Replications are grouped into fixed-size chunks; chunk c always draws from
/// rng.split(c). Results therefore do not depend on the worker count.
inline constexpr std::size_t kReplicationChunk = 4096;

/// Worker threads used by replication loops. 0 means hardware_concurrency().
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(chunk_index, first, last, chunk_rng) for every chunk covering
/// [0, count), possibly in parallel. body must only write to state owned by
/// its chunk.
template <class Body>
void for_each_chunk(std::size_t count, const RngStream& rng, Body&& body) {
  const std::size_t chunks = (count + kReplicationChunk - 1) / kReplicationChunk;
  auto run_chunk = [&](std::size_t c) {
    RngStream chunk_rng = rng.split(c);
    const std::size_t first = c * kReplicationChunk;
    const std::size_t last = std::min(count, first + kReplicationChunk);
    body(c, first, last, chunk_rng);
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
          try {
            run_chunk(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cumadv
