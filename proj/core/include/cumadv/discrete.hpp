#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "cumadv/distribution.hpp"
#include "cumadv/rng.hpp"
#include "cumadv/sequence.hpp"

namespace cumadv {

/// Urn contents with real-valued ball counts, so fractional reinforcement is
/// representable. At least two colors, every count strictly positive.
class UrnState {
 public:
  UrnState(std::vector<double> counts, std::vector<double> reinforcement);

  /// `colors` colors, one ball each, unit reinforcement.
  static UrnState uniform(std::size_t colors);

  [[nodiscard]] std::size_t colors() const noexcept { return counts_.size(); }
  [[nodiscard]] const std::vector<double>& counts() const noexcept { return counts_; }
  [[nodiscard]] const std::vector<double>& reinforcement() const noexcept { return reinforcement_; }
  [[nodiscard]] double total() const noexcept { return total_; }
  [[nodiscard]] double probability(std::size_t color) const;

  /// Returns the state after drawing `color`.
  [[nodiscard]] UrnState reinforced(std::size_t color) const;
  void reinforce(std::size_t color);

 private:
  std::vector<double> counts_;
  std::vector<double> reinforcement_;
  double total_;
};

struct UrnDraw {
  std::size_t color;
  UrnState state;
};

UrnDraw polya_draw(const UrnState& state, RngStream& rng);

/// Binary Pólya sequence from an urn with one black and one red ball and unit
/// reinforcement; Y_k = 1 iff black is drawn at step k.
SequenceSample polya_binary_sequence(std::size_t n, RngStream& rng);

struct TalentBinaryParams {
  Distribution talent;
  explicit TalentBinaryParams(Distribution talent_dist);
};

/// Draws p once from the talent law, then n conditionally independent
/// Bernoulli(p) outcomes.
SequenceSample talent_binary_sequence(const TalentBinaryParams& params, std::size_t n, RngStream& rng);

/// i.i.d. Bernoulli(p) outcomes (a talent model with a point-mass talent).
SequenceSample bernoulli_iid_sequence(double p, std::size_t n, RngStream& rng);

/// Price's urn: success at step k continues with probability k/(k+1) while
/// every previous step succeeded; the first failure is absorbing.
SequenceSample price_sequence(std::size_t n, RngStream& rng);

struct SimonParams {
  double new_word_prob;          // alpha in (0,1)
  std::int64_t initial_occurrences;  // n_R0
  std::int64_t initial_words;        // K0
  SimonParams(double alpha, std::int64_t n_r0, std::int64_t k0);
};

/// P(Y_k = 1 | sum of earlier successes) for the focal word at step k (1-based).
double simon_occurrence_probability(const SimonParams& params, std::size_t k, std::int64_t prior_successes);

SequenceSample simon_occurrence_sequence(const SimonParams& params, std::size_t n, RngStream& rng);

struct BarabasiAlbertParams {
  std::int64_t initial_links;  // m0
  std::int64_t entry_time;     // t'
  std::int64_t end_time;
  BarabasiAlbertParams(std::int64_t m0, std::int64_t t_entry, std::int64_t t_end);
};

/// Probability that a node of the given degree gains a link at time t.
double ba_link_probability(std::int64_t initial_links, std::int64_t t, std::int64_t degree);

/// Degree of the focal node at t = 1..end_time.
SequenceSample ba_degree_sequence(const BarabasiAlbertParams& params, RngStream& rng);

/// Growth law X_n for Gibrat's process, either a Distribution or a generalized
/// inverse CDF applied to a uniform draw.
struct QuantileGrowth {
  QuantileFunction quantile;
  std::string label;
};
using GrowthLaw = std::variant<Distribution, QuantileGrowth>;

struct GibratParams {
  double initial_size;
  GrowthLaw growth;
  /// Rejects y0 <= 0 and growth laws whose support reaches -1.
  GibratParams(double y0, GrowthLaw growth_law);
};

/// Y_k = Y_{k-1} (1 + X_k), k = 1..n, starting from Y_0 = y0 (not emitted).
SequenceSample gibrat_sequence(const GibratParams& params, std::size_t n, RngStream& rng);

struct MonkeyParams {
  double space_prob;           // alpha in (0,1)
  std::int64_t alphabet_size;  // N
  std::int64_t max_length;     // K
  MonkeyParams(double alpha, std::int64_t n, std::int64_t k);
};

/// ((1 - alpha)/N)^k * alpha
double monkey_word_probability(const MonkeyParams& params, std::int64_t word_length);

/// Occurrences of a fixed word of the given length: i.i.d. Bernoulli(q).
SequenceSample monkey_occurrence_sequence(const MonkeyParams& params, std::int64_t word_length, std::size_t n,
                                          RngStream& rng);

/// Length of a word drawn uniformly from all words of length 1..K:
/// P(k) = N^k / sum_l N^l.
std::int64_t monkey_random_word_length(const MonkeyParams& params, RngStream& rng);

/// One-hot record of n successive draws from the urn.
SequenceSample multicolor_urn_sequence(const UrnState& init, std::size_t n, RngStream& rng);

}  // namespace cumadv
