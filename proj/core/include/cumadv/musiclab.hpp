#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cumadv/distribution.hpp"
#include "cumadv/rng.hpp"

namespace cumadv::musiclab {

inline constexpr std::size_t kQuartiles = 4;

struct DownloadEvent {
  std::string user_id;
  std::int32_t song_id;
};

/// Ordered downloads. Song ids lie in [0, n_songs) and no user repeats a song.
struct DownloadLog {
  std::vector<DownloadEvent> events;
  std::int32_t n_songs = 0;
  std::map<std::string, std::string> metadata;
};

/// Ingest failure; row() is the 1-based line number in the source.
class LogFormatError : public std::runtime_error {
 public:
  LogFormatError(std::size_t row, const std::string& what);
  [[nodiscard]] std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Reads the `user_id,song_id` CSV format with optional leading `#key=value`
/// lines. `#n_songs` fixes S; without it S is one past the largest song id.
DownloadLog ingest_log(std::istream& in);
void write_log(std::ostream& out, const DownloadLog& log);

/// Per-quartile per-song download counts.
struct UrnRunResult {
  std::array<std::vector<std::uint32_t>, kQuartiles> counts_over_time;
  std::uint64_t total_downloads = 0;
};

/// Sizes of the four consecutive download blocks: ceil(D/4) or floor(D/4),
/// earlier blocks taking the larger size.
std::array<std::size_t, kQuartiles> quartile_sizes(std::size_t downloads);

/// Counts of the empirical log arranged like a simulation result.
UrnRunResult empirical_counts(const DownloadLog& log);

/// One urn replication following the log's user sequence. The urn starts with
/// one ball per song; each draw adds f balls of the drawn song; songs the user
/// already drew are excluded and the rest renormalized. Throws
/// std::invalid_argument if a user downloads more songs than exist.
UrnRunResult simulate_urn_replication(const DownloadLog& log, double f, RngStream& rng);

/// Percentage of the quartile's downloads per song, sorted descending (ties by
/// song id). quartile is 1-based. Throws std::invalid_argument on an empty
/// quartile.
std::vector<double> rank_proportions(const UrnRunResult& result, std::size_t quartile);

struct FitResult {
  double f_star = 0.0;
  std::map<double, double> losses;
  std::vector<double> grid;
  std::size_t reps_per_point = 0;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Loss at each grid value: sum over quartiles and ranks of
/// |empirical pct - mean simulated pct|. Replication r uses rng.split(r) for
/// every f, so grid points are compared under common random numbers.
FitResult fit_f(const DownloadLog& log, const std::vector<double>& grid, std::size_t reps_per_point,
                const RngStream& rng);

struct TwoStageGrid {
  double coarse_lo = 0.1;
  double coarse_hi = 0.6;
  double coarse_step = 0.05;
  double fine_step = 0.005;
  /// The fine grid spans coarse minimum +/- this value.
  double fine_half_width = 0.05;
};

std::vector<double> arithmetic_grid(double lo, double hi, double step);

/// Coarse search, then a fine grid around the coarse minimum. The returned
/// losses and grid cover both stages.
FitResult fit_f_two_stage(const DownloadLog& log, const TwoStageGrid& grid, std::size_t reps_per_point,
                          const RngStream& rng);

struct RankInterval {
  double mean;
  double low;
  double high;
};

struct IntervalReport {
  std::array<std::vector<RankInterval>, kQuartiles> quartiles;
  std::size_t reps = 0;
  double level = 0.95;
  /// 1-based order statistics used for the interval ends.
  std::size_t low_rank = 0;
  std::size_t high_rank = 0;
};

/// Symmetric nearest-rank order statistics for a central interval:
/// low = ceil(reps (1 - level)/2), high = reps + 1 - low.
std::pair<std::size_t, std::size_t> interval_order_statistics(std::size_t reps, double level);

IntervalReport interval_report(const DownloadLog& log, double f, std::size_t reps, double level, const RngStream& rng);

/// Writes `rank,empirical_pct,sim_mean_pct,sim_low_pct,sim_high_pct` for one
/// quartile (1-based), preceded by '#key=value' header lines.
void write_quartile_csv(std::ostream& out, const DownloadLog& log, const IntervalReport& report,
                        std::size_t quartile, const std::map<std::string, std::string>& header);

/// Fraction of empirical rank-proportion points inside the simulated intervals.
double interval_coverage(const DownloadLog& log, const IntervalReport& report);

/// Talent-only log: one weight per song drawn once from `talent`; each user
/// downloads without repetition proportionally to weight. No dependence
/// across users.
DownloadLog synth_fixture(std::int32_t n_songs, const std::vector<std::int32_t>& downloads_per_user,
                          const Distribution& talent, RngStream& rng);

/// Talent-only log with one given talent per song.
DownloadLog synth_fixture(const std::vector<double>& talents, const std::vector<std::int32_t>& downloads_per_user,
                          RngStream& rng);

/// Log generated by the reinforcement urn itself.
DownloadLog urn_fixture(std::int32_t n_songs, const std::vector<std::int32_t>& downloads_per_user, double f,
                        RngStream& rng);

}  // namespace cumadv::musiclab
