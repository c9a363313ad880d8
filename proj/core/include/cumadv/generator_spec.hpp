#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cumadv/discrete.hpp"
#include "cumadv/gaussian_twins.hpp"
#include "cumadv/point_process.hpp"
#include "cumadv/rng.hpp"
#include "cumadv/sequence.hpp"

namespace cumadv {

struct PolyaBinarySpec {};
struct TalentBinarySpec {
  TalentBinaryParams params;
};
struct BernoulliIidSpec {
  double p;
};
struct PriceSpec {};
struct SimonSpec {
  SimonParams params;
};
/// The path length doubles as t_end.
struct BarabasiAlbertSpec {
  std::int64_t initial_links;
  std::int64_t entry_time;
};
struct GibratSpec {
  GibratParams params;
};
/// Without a fixed word length the tracked word is drawn uniformly among all
/// words of length <= K (the talent), then occurrences are i.i.d. given it.
struct MonkeySpec {
  MonkeyParams params;
  std::optional<std::int64_t> word_length;
};
struct MulticolorUrnSpec {
  UrnState init;
};
struct QModelSpec {
  QModelParams params;
};
struct GaussianTwinSpec {
  TwinParams params;
};
/// Paths are counts at horizon * k / length, k = 1..length.
struct ContagiousPoissonSpec {
  PointProcessParams params;
};
struct MixedPoissonSpec {
  PointProcessParams params;
};

using GeneratorSpec =
    std::variant<PolyaBinarySpec, TalentBinarySpec, BernoulliIidSpec, PriceSpec, SimonSpec, BarabasiAlbertSpec,
                 GibratSpec, MonkeySpec, MulticolorUrnSpec, QModelSpec, GaussianTwinSpec, ContagiousPoissonSpec,
                 MixedPoissonSpec>;

using ParamMap = std::map<std::string, std::string, std::less<>>;

/// Splits "k=v,k=v". Throws std::invalid_argument on a malformed entry.
ParamMap parse_param_list(std::string_view text);

/// Builds a generator from its model name and parameters. Unknown models and
/// unknown or invalid parameters raise std::invalid_argument naming the field.
GeneratorSpec make_generator(std::string_view name, const ParamMap& params);
GeneratorSpec make_generator(std::string_view name, std::string_view param_list);

const std::vector<std::string>& generator_names();

std::string model_id(const GeneratorSpec& spec);
OutcomeKind outcome_kind(const GeneratorSpec& spec);
/// Canonical "name k=v,..." form accepted by make_generator.
std::string describe(const GeneratorSpec& spec);

bool is_point_process(const GeneratorSpec& spec);

SequenceSample sample_path(const GeneratorSpec& spec, std::size_t length, RngStream& rng);

/// Full timeline for point-process generators; throws std::invalid_argument otherwise.
EventTimeline sample_timeline(const GeneratorSpec& spec, RngStream& rng);

}  // namespace cumadv
