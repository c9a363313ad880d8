#include "cumadv/rng.hpp"

#include <utility>

namespace cumadv {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
  // seed_seq mixes every word; the depth word keeps [] and [0] apart.
  std::vector<std::uint32_t> words;
  words.reserve(3 + 2 * path.size());
  auto push64 = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push64(seed);
  words.push_back(static_cast<std::uint32_t>(path.size()));
  for (auto p : path) push64(p);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)), engine_(seeded_engine(seed_, path_)) {}

RngStream RngStream::split(std::uint64_t index) const {
  auto child_path = path_;
  child_path.push_back(index);
  return RngStream(seed_, std::move(child_path));
}

RngStream make_rng(std::uint64_t seed) { return RngStream(seed); }

RngStream split_rng(const RngStream& stream, std::uint64_t index) { return stream.split(index); }

}  // namespace cumadv

#include "cumadv/replicate.hpp"

namespace cumadv {
namespace {
std::atomic<unsigned> g_workers{0};
}

void set_worker_count(unsigned workers) { g_workers = workers; }

unsigned worker_count() {
  const unsigned w = g_workers.load();
  if (w != 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace cumadv
