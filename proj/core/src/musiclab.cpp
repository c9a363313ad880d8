#include "cumadv/musiclab.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cumadv/replicate.hpp"

namespace cumadv::musiclab {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Log preprocessed for replay: dense user indices and quartile boundaries.
struct ReplayPlan {
  std::int32_t n_songs = 0;
  std::vector<std::uint32_t> user_of_event;
  std::size_t users = 0;
  std::array<std::size_t, kQuartiles> quartile_end{};
};

ReplayPlan make_plan(const std::vector<std::string>& user_sequence, std::int32_t n_songs) {
  ReplayPlan plan;
  plan.n_songs = n_songs;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::int32_t> per_user;
  plan.user_of_event.reserve(user_sequence.size());
  for (const auto& user : user_sequence) {
    const auto [it, inserted] = index.try_emplace(user, static_cast<std::uint32_t>(index.size()));
    if (inserted) per_user.push_back(0);
    if (++per_user[it->second] > n_songs) {
      throw std::invalid_argument("user '" + user + "' downloads more songs than the " + std::to_string(n_songs) +
                                  " available");
    }
    plan.user_of_event.push_back(it->second);
  }
  plan.users = index.size();
  const auto sizes = quartile_sizes(user_sequence.size());
  std::size_t end = 0;
  for (std::size_t q = 0; q < kQuartiles; ++q) plan.quartile_end[q] = end += sizes[q];
  return plan;
}

ReplayPlan make_plan(const DownloadLog& log) {
  std::vector<std::string> users;
  users.reserve(log.events.size());
  for (const auto& e : log.events) users.push_back(e.user_id);
  return make_plan(users, log.n_songs);
}

/// Replays the user sequence against a weight vector. Each draw excludes the
/// current user's earlier songs and then adds `reinforcement` to the drawn
/// song's weight. Calls on_draw(event_index, song).
template <class OnDraw>
void replay(const ReplayPlan& plan, std::vector<double> weights, double reinforcement, RngStream& rng,
            OnDraw&& on_draw) {
  const auto songs = static_cast<std::size_t>(plan.n_songs);
  std::vector<std::vector<std::int32_t>> taken(plan.users);
  std::vector<char> excluded(songs, 0);
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t e = 0; e < plan.user_of_event.size(); ++e) {
    auto& mine = taken[plan.user_of_event[e]];
    double allowed = total;
    for (auto s : mine) {
      excluded[static_cast<std::size_t>(s)] = 1;
      allowed -= weights[static_cast<std::size_t>(s)];
    }
    double target = rng.uniform01() * allowed;
    std::size_t pick = songs;
    std::size_t last_allowed = songs;
    for (std::size_t s = 0; s < songs; ++s) {
      if (excluded[s]) continue;
      last_allowed = s;
      if (target < weights[s]) {
        pick = s;
        break;
      }
      target -= weights[s];
    }
    if (pick == songs) pick = last_allowed;  // rounding at the upper end
    for (auto s : mine) excluded[static_cast<std::size_t>(s)] = 0;
    mine.push_back(static_cast<std::int32_t>(pick));
    weights[pick] += reinforcement;
    total += reinforcement;
    on_draw(e, static_cast<std::int32_t>(pick));
  }
}

UrnRunResult empty_result(std::int32_t n_songs, std::size_t downloads) {
  UrnRunResult r;
  for (auto& q : r.counts_over_time) q.assign(static_cast<std::size_t>(n_songs), 0);
  r.total_downloads = downloads;
  return r;
}

UrnRunResult run_urn(const ReplayPlan& plan, double f, RngStream& rng) {
  auto result = empty_result(plan.n_songs, plan.user_of_event.size());
  std::size_t quartile = 0;
  replay(plan, std::vector<double>(static_cast<std::size_t>(plan.n_songs), 1.0), f, rng,
         [&](std::size_t e, std::int32_t song) {
           while (e >= plan.quartile_end[quartile]) ++quartile;
           ++result.counts_over_time[quartile][static_cast<std::size_t>(song)];
         });
  return result;
}

/// Rank proportions of all non-empty quartiles, concatenated (quartile-major).
std::vector<double> profile(const UrnRunResult& r) {
  std::vector<double> out;
  for (std::size_t q = 1; q <= kQuartiles; ++q) {
    const auto& counts = r.counts_over_time[q - 1];
    if (std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == 0) continue;
    const auto p = rank_proportions(r, q);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void validate_log(const DownloadLog& log) {
  if (log.n_songs < 1) throw std::invalid_argument("DownloadLog: n_songs must be >= 1");
}

DownloadLog log_from_draws(std::int32_t n_songs, const std::vector<std::int32_t>& downloads_per_user,
                           std::vector<double> weights, double reinforcement, RngStream& rng,
                           const std::string& source) {
  if (n_songs < 1) throw std::invalid_argument("fixture: n_songs must be >= 1");
  std::vector<std::string> users;
  for (std::size_t u = 0; u < downloads_per_user.size(); ++u) {
    const auto k = downloads_per_user[u];
    if (k < 0 || k > n_songs) throw std::invalid_argument("fixture: per-user download count must lie in [0, S]");
    for (std::int32_t i = 0; i < k; ++i) users.push_back("u" + std::to_string(u + 1));
  }
  const auto plan = make_plan(users, n_songs);
  DownloadLog log;
  log.n_songs = n_songs;
  log.metadata["n_songs"] = std::to_string(n_songs);
  log.metadata["source"] = source;
  log.events.reserve(users.size());
  replay(plan, std::move(weights), reinforcement, rng,
         [&](std::size_t e, std::int32_t song) { log.events.push_back({users[e], song}); });
  return log;
}

}  // namespace

LogFormatError::LogFormatError(std::size_t row, const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

DownloadLog ingest_log(std::istream& in) {
  DownloadLog log;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  std::int32_t declared = -1;
  std::int32_t max_song = -1;
  std::set<std::pair<std::string, std::int32_t>> seen;
  std::vector<std::size_t> event_rows;
  while (std::getline(in, line)) {
    ++row;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (header_seen) throw LogFormatError(row, "metadata line after the column header");
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw LogFormatError(row, "metadata line must be #key=value");
      const auto key = trim(text.substr(1, eq - 1));
      const auto value = trim(text.substr(eq + 1));
      if (key.empty()) throw LogFormatError(row, "empty metadata key");
      if (key == "n_songs") {
        try {
          std::size_t used = 0;
          declared = std::stoi(value, &used);
          if (used != value.size() || declared < 1) throw std::invalid_argument("bad");
        } catch (const std::exception&) {
          throw LogFormatError(row, "n_songs must be a positive integer");
        }
      }
      log.metadata[key] = value;
      continue;
    }
    if (!header_seen) {
      if (text != "user_id,song_id") throw LogFormatError(row, "expected header 'user_id,song_id'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      throw LogFormatError(row, "expected two fields");
    }
    auto user = trim(text.substr(0, comma));
    const auto song_text = trim(text.substr(comma + 1));
    if (user.empty()) throw LogFormatError(row, "empty user_id");
    std::int32_t song = 0;
    try {
      std::size_t used = 0;
      song = std::stoi(song_text, &used);
      if (used != song_text.size()) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      throw LogFormatError(row, "song_id '" + song_text + "' is not an integer");
    }
    if (song < 0) throw LogFormatError(row, "song_id " + std::to_string(song) + " out of range");
    if (declared > 0 && song >= declared) {
      throw LogFormatError(row, "song_id " + std::to_string(song) + " out of range [0, " + std::to_string(declared) +
                                    ")");
    }
    if (!seen.emplace(user, song).second) {
      throw LogFormatError(row, "duplicate download of song " + std::to_string(song) + " by user '" + user + "'");
    }
    max_song = std::max(max_song, song);
    log.events.push_back({std::move(user), song});
    event_rows.push_back(row);
  }
  if (!header_seen && !log.events.empty()) throw LogFormatError(row, "missing header");
  log.n_songs = declared > 0 ? declared : max_song + 1;
  if (log.n_songs < 1) throw LogFormatError(row, "cannot determine n_songs: no events and no #n_songs line");
  return log;
}

void write_log(std::ostream& out, const DownloadLog& log) {
  auto meta = log.metadata;
  meta["n_songs"] = std::to_string(log.n_songs);
  for (const auto& [k, v] : meta) out << '#' << k << '=' << v << '\n';
  out << "user_id,song_id\n";
  for (const auto& e : log.events) out << e.user_id << ',' << e.song_id << '\n';
}

std::array<std::size_t, kQuartiles> quartile_sizes(std::size_t downloads) {
  std::array<std::size_t, kQuartiles> sizes{};
  for (std::size_t q = 0; q < kQuartiles; ++q) sizes[q] = downloads / kQuartiles + (q < downloads % kQuartiles ? 1 : 0);
  return sizes;
}

UrnRunResult empirical_counts(const DownloadLog& log) {
  validate_log(log);
  auto result = empty_result(log.n_songs, log.events.size());
  const auto sizes = quartile_sizes(log.events.size());
  std::size_t q = 0;
  std::size_t in_q = 0;
  for (const auto& e : log.events) {
    while (in_q == sizes[q]) {
      ++q;
      in_q = 0;
    }
    ++result.counts_over_time[q][static_cast<std::size_t>(e.song_id)];
    ++in_q;
  }
  return result;
}

UrnRunResult simulate_urn_replication(const DownloadLog& log, double f, RngStream& rng) {
  validate_log(log);
  if (!(std::isfinite(f) && f >= 0.0)) throw std::invalid_argument("simulate_urn_replication: f must be >= 0");
  return run_urn(make_plan(log), f, rng);
}

std::vector<double> rank_proportions(const UrnRunResult& result, std::size_t quartile) {
  if (quartile < 1 || quartile > kQuartiles) throw std::invalid_argument("rank_proportions: quartile must be 1..4");
  const auto& counts = result.counts_over_time[quartile - 1];
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw std::invalid_argument("rank_proportions: quartile " + std::to_string(quartile) + " is empty");
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return counts[a] > counts[b]; });
  std::vector<double> pct;
  pct.reserve(counts.size());
  for (auto s : order) pct.push_back(100.0 * static_cast<double>(counts[s]) / static_cast<double>(total));
  return pct;
}

nlohmann::json FitResult::to_json() const {
  nlohmann::json j;
  j["f_star"] = f_star;
  j["grid"] = grid;
  j["reps_per_point"] = reps_per_point;
  nlohmann::json l = nlohmann::json::array();
  for (const auto& [f, loss] : losses) l.push_back({{"f", f}, {"loss", loss}});
  j["losses"] = l;
  return j;
}

FitResult fit_f(const DownloadLog& log, const std::vector<double>& grid, std::size_t reps_per_point,
                const RngStream& rng) {
  validate_log(log);
  if (grid.empty()) throw std::invalid_argument("fit_f: grid must be non-empty");
  if (reps_per_point < 1) throw std::invalid_argument("fit_f: reps_per_point must be >= 1");
  for (double f : grid) {
    if (!(std::isfinite(f) && f >= 0.0)) throw std::invalid_argument("fit_f: grid values must be >= 0");
  }
  const auto plan = make_plan(log);
  const auto target = profile(empirical_counts(log));

  FitResult fit;
  fit.grid = grid;
  fit.reps_per_point = reps_per_point;
  double best = std::numeric_limits<double>::infinity();
  for (double f : grid) {
    const std::size_t chunks = (reps_per_point + kReplicationChunk - 1) / kReplicationChunk;
    std::vector<std::vector<double>> sums(chunks, std::vector<double>(target.size(), 0.0));
    for_each_chunk(reps_per_point, rng, [&](std::size_t c, std::size_t first, std::size_t last, RngStream&) {
      for (std::size_t r = first; r < last; ++r) {
        RngStream rep_rng = rng.split(r);
        const auto p = profile(run_urn(plan, f, rep_rng));
        for (std::size_t i = 0; i < p.size(); ++i) sums[c][i] += p[i];
      }
    });
    double loss = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      double total = 0.0;
      for (const auto& s : sums) total += s[i];
      loss += std::abs(target[i] - total / static_cast<double>(reps_per_point));
    }
    fit.losses[f] = loss;
    if (loss < best) {
      best = loss;
      fit.f_star = f;
    }
  }
  return fit;
}

std::vector<double> arithmetic_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("arithmetic_grid: need step > 0 and lo <= hi");
  std::vector<double> out;
  const auto steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    // Snap to the step lattice so 0.1 + 4 * 0.05 prints as 0.3.
    const double v = lo + static_cast<double>(k) * step;
    out.push_back(std::round(v / step * 1e6) / 1e6 * step);
  }
  return out;
}

FitResult fit_f_two_stage(const DownloadLog& log, const TwoStageGrid& grid, std::size_t reps_per_point,
                          const RngStream& rng) {
  auto coarse = fit_f(log, arithmetic_grid(grid.coarse_lo, grid.coarse_hi, grid.coarse_step), reps_per_point, rng);
  const double lo = std::max(grid.fine_step, coarse.f_star - grid.fine_half_width);
  const double hi = coarse.f_star + grid.fine_half_width;
  const double lo_snapped = std::ceil(lo / grid.fine_step - 1e-9) * grid.fine_step;
  std::vector<double> fine_grid;
  for (double f : arithmetic_grid(lo_snapped, hi, grid.fine_step)) {
    if (!coarse.losses.contains(f)) fine_grid.push_back(f);
  }
  FitResult merged = coarse;
  if (!fine_grid.empty()) {
    const auto fine = fit_f(log, fine_grid, reps_per_point, rng);
    merged.losses.insert(fine.losses.begin(), fine.losses.end());
  }
  merged.grid.clear();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [f, loss] : merged.losses) {
    merged.grid.push_back(f);
    if (loss < best) {
      best = loss;
      merged.f_star = f;
    }
  }
  return merged;
}

std::pair<std::size_t, std::size_t> interval_order_statistics(std::size_t reps, double level) {
  if (reps < 1) throw std::invalid_argument("interval_order_statistics: reps must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("interval level must lie in (0, 1)");
  const double tail = (1.0 - level) / 2.0;
  auto low = static_cast<std::size_t>(std::ceil(tail * static_cast<double>(reps) - 1e-9));
  low = std::clamp<std::size_t>(low, 1, reps);
  const std::size_t high = std::max(low, reps + 1 - low);
  return {std::min(low, high), high};
}

IntervalReport interval_report(const DownloadLog& log, double f, std::size_t reps, double level, const RngStream& rng) {
  validate_log(log);
  const auto [low_rank, high_rank] = interval_order_statistics(reps, level);
  const auto plan = make_plan(log);
  const auto songs = static_cast<std::size_t>(log.n_songs);
  const auto sizes = quartile_sizes(log.events.size());

  // samples[q][rank][rep]
  std::array<std::vector<std::vector<double>>, kQuartiles> samples;
  for (std::size_t q = 0; q < kQuartiles; ++q) {
    if (sizes[q] > 0) samples[q].assign(songs, std::vector<double>(reps, 0.0));
  }
  for_each_chunk(reps, rng, [&](std::size_t, std::size_t first, std::size_t last, RngStream&) {
    for (std::size_t r = first; r < last; ++r) {
      RngStream rep_rng = rng.split(r);
      const auto result = run_urn(plan, f, rep_rng);
      for (std::size_t q = 0; q < kQuartiles; ++q) {
        if (sizes[q] == 0) continue;
        const auto p = rank_proportions(result, q + 1);
        for (std::size_t k = 0; k < songs; ++k) samples[q][k][r] = p[k];
      }
    }
  });

  IntervalReport report;
  report.reps = reps;
  report.level = level;
  report.low_rank = low_rank;
  report.high_rank = high_rank;
  for (std::size_t q = 0; q < kQuartiles; ++q) {
    for (auto& values : samples[q]) {
      const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(reps);
      std::sort(values.begin(), values.end());
      report.quartiles[q].push_back({mean, values[low_rank - 1], values[high_rank - 1]});
    }
  }
  return report;
}

void write_quartile_csv(std::ostream& out, const DownloadLog& log, const IntervalReport& report, std::size_t quartile,
                        const std::map<std::string, std::string>& header) {
  if (quartile < 1 || quartile > kQuartiles) throw std::invalid_argument("write_quartile_csv: quartile must be 1..4");
  const auto& intervals = report.quartiles[quartile - 1];
  std::vector<double> empirical(intervals.size(), 0.0);
  if (!intervals.empty()) empirical = rank_proportions(empirical_counts(log), quartile);
  for (const auto& [k, v] : header) out << '#' << k << '=' << v << '\n';
  out << "#quartile=" << quartile << '\n'
      << "#interval=nearest-rank order statistics " << report.low_rank << " and " << report.high_rank << " of "
      << report.reps << '\n'
      << "rank,empirical_pct,sim_mean_pct,sim_low_pct,sim_high_pct\n";
  const auto old = out.precision(10);
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    out << k + 1 << ',' << empirical[k] << ',' << intervals[k].mean << ',' << intervals[k].low << ','
        << intervals[k].high << '\n';
  }
  out.precision(old);
}

double interval_coverage(const DownloadLog& log, const IntervalReport& report) {
  const auto empirical = empirical_counts(log);
  std::size_t inside = 0;
  std::size_t total = 0;
  for (std::size_t q = 0; q < kQuartiles; ++q) {
    const auto& intervals = report.quartiles[q];
    if (intervals.empty()) continue;
    const auto p = rank_proportions(empirical, q + 1);
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      ++total;
      if (p[k] >= intervals[k].low && p[k] <= intervals[k].high) ++inside;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(total);
}

DownloadLog synth_fixture(std::int32_t n_songs, const std::vector<std::int32_t>& downloads_per_user,
                          const Distribution& talent, RngStream& rng) {
  if (!(talent.support_min() >= 0.0)) throw std::invalid_argument("synth_fixture: talent must be non-negative");
  std::vector<double> weights(static_cast<std::size_t>(std::max(n_songs, 0)));
  for (auto& w : weights) {
    do {
      w = talent.sample(rng);
    } while (!(w > 0.0));
  }
  return log_from_draws(n_songs, downloads_per_user, std::move(weights), 0.0, rng, "synth-talent");
}

DownloadLog synth_fixture(const std::vector<double>& talents, const std::vector<std::int32_t>& downloads_per_user,
                          RngStream& rng) {
  for (double w : talents) {
    if (!(std::isfinite(w) && w > 0.0)) throw std::invalid_argument("synth_fixture: talents must be positive");
  }
  return log_from_draws(static_cast<std::int32_t>(talents.size()), downloads_per_user, talents, 0.0, rng,
                        "synth-talent");
}

DownloadLog urn_fixture(std::int32_t n_songs, const std::vector<std::int32_t>& downloads_per_user, double f,
                        RngStream& rng) {
  if (!(std::isfinite(f) && f >= 0.0)) throw std::invalid_argument("urn_fixture: f must be >= 0");
  return log_from_draws(n_songs, downloads_per_user, std::vector<double>(static_cast<std::size_t>(std::max(n_songs, 0)), 1.0),
                        f, rng, "synth-urn");
}

}  // namespace cumadv::musiclab
