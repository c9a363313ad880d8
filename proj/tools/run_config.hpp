#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumadv/generator_spec.hpp"
#include "cumadv/musiclab.hpp"

namespace cumadv::cli {

enum class Command { Simulate, Twin, Compare, Exchangeability, FitMusiclab, ReportMusiclab };
enum class Format { Csv, Json };

const char* to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Model name plus its raw parameters; validated by make_generator.
struct GeneratorEntry {
  std::string model;
  ParamMap params;
};

/// Invalid or incomplete configuration. line() is 0 when not tied to a file line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct RunConfig {
  std::optional<Command> command;
  std::optional<GeneratorEntry> model;  // simulate, exchangeability
  std::optional<GeneratorEntry> a;      // compare
  std::optional<GeneratorEntry> b;
  std::optional<ParamMap> q_model;  // twin
  std::optional<ParamMap> twin;

  std::uint64_t seed = kDefaultSeed;
  bool seed_explicit = false;
  std::size_t reps = 0;    // 0: command default
  std::size_t length = 0;  // 0: command default
  std::optional<double> horizon;
  std::string output;
  Format format = Format::Csv;

  double significance = 1e-3;
  double tvd_threshold = 0.01;
  std::vector<std::vector<std::size_t>> permutations;  // 1-based, as written by users
  std::size_t bootstrap = 1999;
  std::size_t buckets = 12;

  std::string input;
  std::optional<double> f;
  double level = 0.95;
  musiclab::TwoStageGrid grid;
};

/// Flat `key = value` text. `[model]`, `[a]`, `[b]` sections hold `model = name`
/// plus that model's parameters; `[q-model]` and `[twin]` hold twin-mapping
/// parameters. `#` and `;` start comments.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// "2,1,3;3,2,1" -> {{2,1,3},{3,2,1}}
std::vector<std::vector<std::size_t>> parse_permutations(std::string_view text);

std::size_t default_reps(Command c);
std::size_t default_length(Command c);

GeneratorSpec build_generator(const GeneratorEntry& entry, const std::optional<double>& horizon);

}  // namespace cumadv::cli
