#include "cumadv/discrete.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cumadv {
namespace {

std::size_t draw_index(const std::vector<double>& weights, double total, RngStream& rng) {
  double target = rng.uniform01() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return weights.size() - 1;
}

}  // namespace

UrnState::UrnState(std::vector<double> counts, std::vector<double> reinforcement)
    : counts_(std::move(counts)), reinforcement_(std::move(reinforcement)), total_(0.0) {
  if (counts_.size() < 2) throw std::invalid_argument("UrnState: at least 2 colors required");
  if (reinforcement_.size() != counts_.size()) {
    throw std::invalid_argument("UrnState: reinforcement must have one entry per color");
  }
  for (double c : counts_) {
    if (!(std::isfinite(c) && c > 0.0)) throw std::invalid_argument("UrnState: every count must be > 0");
  }
  for (double r : reinforcement_) {
    if (!(std::isfinite(r) && r >= 0.0)) throw std::invalid_argument("UrnState: reinforcement must be >= 0");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

UrnState UrnState::uniform(std::size_t colors) {
  return UrnState(std::vector<double>(colors, 1.0), std::vector<double>(colors, 1.0));
}

double UrnState::probability(std::size_t color) const { return counts_.at(color) / total_; }

UrnState UrnState::reinforced(std::size_t color) const {
  UrnState next = *this;
  next.reinforce(color);
  return next;
}

void UrnState::reinforce(std::size_t color) {
  counts_.at(color) += reinforcement_[color];
  total_ += reinforcement_[color];
}

UrnDraw polya_draw(const UrnState& state, RngStream& rng) {
  const std::size_t color = draw_index(state.counts(), state.total(), rng);
  return {color, state.reinforced(color)};
}

SequenceSample polya_binary_sequence(std::size_t n, RngStream& rng) {
  // Two colors, one ball each: P(black at step k) = (1 + blacks so far)/(k + 1).
  SequenceSample::Integers y(n);
  std::int64_t blacks = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = static_cast<double>(blacks + 1) / static_cast<double>(k + 2);
    y[k] = rng.uniform01() < p ? 1 : 0;
    blacks += y[k];
  }
  return {"polya-binary", std::move(y)};
}

TalentBinaryParams::TalentBinaryParams(Distribution talent_dist) : talent(std::move(talent_dist)) {
  if (talent.support_min() < 0.0 || talent.support_max() > 1.0) {
    throw std::invalid_argument("TalentBinaryParams: talent distribution must be supported on [0, 1]");
  }
}

SequenceSample talent_binary_sequence(const TalentBinaryParams& params, std::size_t n, RngStream& rng) {
  const double p = params.talent.sample(rng);
  SequenceSample::Integers y(n);
  for (auto& v : y) v = rng.uniform01() < p ? 1 : 0;
  return {"talent-binary", std::move(y)};
}

SequenceSample bernoulli_iid_sequence(double p, std::size_t n, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli_iid_sequence: p must lie in [0, 1]");
  SequenceSample::Integers y(n);
  for (auto& v : y) v = rng.uniform01() < p ? 1 : 0;
  return {"bernoulli-iid", std::move(y)};
}

SequenceSample price_sequence(std::size_t n, RngStream& rng) {
  SequenceSample::Integers y(n, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double cont = static_cast<double>(k) / static_cast<double>(k + 1);
    if (!(rng.uniform01() < cont)) break;
    y[k - 1] = 1;
  }
  return {"price", std::move(y)};
}

SimonParams::SimonParams(double alpha, std::int64_t n_r0, std::int64_t k0)
    : new_word_prob(alpha), initial_occurrences(n_r0), initial_words(k0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("SimonParams: alpha must lie in (0, 1)");
  if (n_r0 < 1) throw std::invalid_argument("SimonParams: n_R0 must be >= 1");
  if (k0 < 1) throw std::invalid_argument("SimonParams: K0 must be >= 1");
  if (n_r0 > k0) throw std::invalid_argument("SimonParams: n_R0 must not exceed K0");
}

double simon_occurrence_probability(const SimonParams& params, std::size_t k, std::int64_t prior_successes) {
  const double occurrences = static_cast<double>(params.initial_occurrences + prior_successes);
  const double words = static_cast<double>(k - 1) + static_cast<double>(params.initial_words);
  return (1.0 - params.new_word_prob) * occurrences / words;
}

SequenceSample simon_occurrence_sequence(const SimonParams& params, std::size_t n, RngStream& rng) {
  SequenceSample::Integers y(n);
  std::int64_t successes = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    y[k - 1] = rng.uniform01() < simon_occurrence_probability(params, k, successes) ? 1 : 0;
    successes += y[k - 1];
  }
  return {"simon", std::move(y)};
}

BarabasiAlbertParams::BarabasiAlbertParams(std::int64_t m0, std::int64_t t_entry, std::int64_t t_end)
    : initial_links(m0), entry_time(t_entry), end_time(t_end) {
  if (m0 < 1) throw std::invalid_argument("BarabasiAlbertParams: m0 must be >= 1");
  if (t_entry < 1) throw std::invalid_argument("BarabasiAlbertParams: t_entry must be >= 1");
  if (t_end < t_entry) throw std::invalid_argument("BarabasiAlbertParams: t_entry must not exceed t_end");
}

double ba_link_probability(std::int64_t initial_links, std::int64_t t, std::int64_t degree) {
  return static_cast<double>(degree) / (2.0 * static_cast<double>(t + initial_links));
}

SequenceSample ba_degree_sequence(const BarabasiAlbertParams& params, RngStream& rng) {
  SequenceSample::Integers degree(static_cast<std::size_t>(params.end_time), 0);
  std::int64_t current = 0;
  for (std::int64_t t = 1; t <= params.end_time; ++t) {
    if (t == params.entry_time) {
      current = 1;
    } else if (t > params.entry_time && rng.uniform01() < ba_link_probability(params.initial_links, t, current)) {
      ++current;
    }
    degree[static_cast<std::size_t>(t - 1)] = current;
  }
  return {"ba-degree", std::move(degree)};
}

GibratParams::GibratParams(double y0, GrowthLaw growth_law) : initial_size(y0), growth(std::move(growth_law)) {
  if (!(std::isfinite(y0) && y0 > 0.0)) throw std::invalid_argument("GibratParams: y0 must be > 0");
  const double lowest = std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Distribution>) {
          return g.support_min();
        } else {
          return g.quantile(0.0);
        }
      },
      growth);
  if (!(lowest > -1.0)) throw std::invalid_argument("GibratParams: growth support must stay above -1");
}

SequenceSample gibrat_sequence(const GibratParams& params, std::size_t n, RngStream& rng) {
  SequenceSample::Reals y(n);
  double size = params.initial_size;
  for (auto& v : y) {
    const double x = std::visit(
        [&rng](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, Distribution>) {
            return g.sample(rng);
          } else {
            return inverse_transform(g.quantile, rng.uniform01());
          }
        },
        params.growth);
    size *= 1.0 + x;
    v = size;
  }
  return {"gibrat", std::move(y)};
}

MonkeyParams::MonkeyParams(double alpha, std::int64_t n, std::int64_t k)
    : space_prob(alpha), alphabet_size(n), max_length(k) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("MonkeyParams: alpha must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("MonkeyParams: N must be >= 1");
  if (k < 1) throw std::invalid_argument("MonkeyParams: K must be >= 1");
}

double monkey_word_probability(const MonkeyParams& params, std::int64_t word_length) {
  const double per_key = (1.0 - params.space_prob) / static_cast<double>(params.alphabet_size);
  return std::pow(per_key, static_cast<double>(word_length)) * params.space_prob;
}

SequenceSample monkey_occurrence_sequence(const MonkeyParams& params, std::int64_t word_length, std::size_t n,
                                          RngStream& rng) {
  if (word_length < 1 || word_length > params.max_length) {
    throw std::invalid_argument("monkey_occurrence_sequence: word length must lie in [1, K]");
  }
  const double q = monkey_word_probability(params, word_length);
  SequenceSample::Integers y(n);
  for (auto& v : y) v = rng.uniform01() < q ? 1 : 0;
  return {"monkey", std::move(y)};
}

std::int64_t monkey_random_word_length(const MonkeyParams& params, RngStream& rng) {
  // N^k / sum_l N^l, rescaled by N^-K to stay finite for long words.
  const double log_n = std::log(static_cast<double>(params.alphabet_size));
  std::vector<double> weights(static_cast<std::size_t>(params.max_length));
  for (std::int64_t k = 1; k <= params.max_length; ++k) {
    weights[static_cast<std::size_t>(k - 1)] = std::exp(static_cast<double>(k - params.max_length) * log_n);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  return static_cast<std::int64_t>(draw_index(weights, total, rng)) + 1;
}

SequenceSample multicolor_urn_sequence(const UrnState& init, std::size_t n, RngStream& rng) {
  UrnState urn = init;
  SequenceSample::Vectors draws;
  draws.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t color = draw_index(urn.counts(), urn.total(), rng);
    std::vector<int> one_hot(urn.colors(), 0);
    one_hot[color] = 1;
    draws.push_back(std::move(one_hot));
    urn.reinforce(color);
  }
  return {"multicolor-urn", std::move(draws)};
}

}  // namespace cumadv
