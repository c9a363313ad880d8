#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace cumadv {

/// Deterministic, splittable random source.
///
/// The output stream is a pure function of (seed, path). A child obtained
/// with split() depends only on the parent's identity, never on how many
/// draws the parent has already produced, so replication loops can hand one
/// child to each task and merge results in index order.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions directly.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::vector<std::uint64_t> path = {});

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const std::vector<std::uint64_t>& path() const noexcept { return path_; }

  [[nodiscard]] RngStream split(std::uint64_t index) const;

  static constexpr result_type min() noexcept { return std::mt19937_64::min(); }
  static constexpr result_type max() noexcept { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); never returns 0.
  double uniform_open01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

RngStream make_rng(std::uint64_t seed);
RngStream split_rng(const RngStream& stream, std::uint64_t index);

}  // namespace cumadv
