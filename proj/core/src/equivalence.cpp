#include "cumadv/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cumadv/replicate.hpp"

namespace cumadv {
namespace {

double chi_square_tail(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

std::vector<std::size_t> identity_permutation(std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

void validate_permutation(const std::vector<std::size_t>& perm, std::size_t m) {
  if (perm.size() != m) throw std::invalid_argument("permutation length does not match path length");
  std::vector<bool> seen(m, false);
  for (auto p : perm) {
    if (p >= m || seen[p]) throw std::invalid_argument("invalid permutation: entries must be a rearrangement of 0..m-1");
    seen[p] = true;
  }
}

/// Values of the permuted view, flattened, for grid estimation.
std::vector<double> permuted_values(const PathBatch& batch, std::span<const std::size_t> perm) {
  std::vector<double> out;
  out.reserve(batch.values.size());
  for (std::size_t i = 0; i < batch.reps; ++i) {
    const auto row = batch.row(i);
    for (std::size_t j = 0; j < batch.length; ++j) {
      const std::size_t src = perm.empty() ? j : perm[j];
      for (std::size_t w = 0; w < batch.step_width; ++w) out.push_back(row[src * batch.step_width + w]);
    }
  }
  return out;
}

GridSpec resolve_for(const GridSpec& grid, OutcomeKind kind, std::span<const double> pooled, std::size_t coords) {
  if (grid.mode() == GridSpec::Mode::EqualProbability) {
    if (kind != OutcomeKind::Real) return GridSpec::exact();
    return grid.resolve(pooled, coords);
  }
  if (grid.mode() == GridSpec::Mode::Exact && kind == OutcomeKind::Real) {
    throw std::invalid_argument("real-valued paths need a bucket grid");
  }
  return grid;
}

}  // namespace

// ---------------------------------------------------------------- grids

GridSpec GridSpec::exact() { return GridSpec{}; }

GridSpec GridSpec::buckets(std::vector<std::vector<double>> cuts_per_coordinate) {
  for (auto& cuts : cuts_per_coordinate) {
    if (!std::is_sorted(cuts.begin(), cuts.end())) throw std::invalid_argument("GridSpec: cut points must be sorted");
  }
  GridSpec g;
  g.mode_ = Mode::Buckets;
  g.cuts_ = std::move(cuts_per_coordinate);
  return g;
}

GridSpec GridSpec::equal_probability(std::size_t buckets_per_coordinate) {
  if (buckets_per_coordinate < 1) throw std::invalid_argument("GridSpec: need at least one bucket per coordinate");
  GridSpec g;
  g.mode_ = Mode::EqualProbability;
  g.buckets_per_coordinate_ = buckets_per_coordinate;
  return g;
}

GridSpec GridSpec::resolve(std::span<const double> pooled, std::size_t coordinates) const {
  if (mode_ != Mode::EqualProbability) return *this;
  if (coordinates == 0 || pooled.size() % coordinates != 0 || pooled.empty()) {
    throw std::invalid_argument("GridSpec::resolve: pooled values do not form whole rows");
  }
  const std::size_t rows = pooled.size() / coordinates;
  std::vector<std::vector<double>> cuts(coordinates);
  std::vector<double> column(rows);
  for (std::size_t j = 0; j < coordinates; ++j) {
    for (std::size_t i = 0; i < rows; ++i) column[i] = pooled[i * coordinates + j];
    std::sort(column.begin(), column.end());
    for (std::size_t b = 1; b < buckets_per_coordinate_; ++b) {
      const std::size_t idx = std::min(rows - 1, b * rows / buckets_per_coordinate_);
      if (cuts[j].empty() || column[idx] > cuts[j].back()) cuts[j].push_back(column[idx]);
    }
  }
  return buckets(std::move(cuts));
}

PathKey GridSpec::discretize(std::span<const double> row) const {
  PathKey key(row.size());
  switch (mode_) {
    case Mode::Exact:
      for (std::size_t j = 0; j < row.size(); ++j) key[j] = static_cast<std::int64_t>(std::llround(row[j]));
      return key;
    case Mode::Buckets:
      if (cuts_.size() != row.size()) throw std::invalid_argument("GridSpec: path width does not match grid");
      for (std::size_t j = 0; j < row.size(); ++j) {
        key[j] = std::upper_bound(cuts_[j].begin(), cuts_[j].end(), row[j]) - cuts_[j].begin();
      }
      return key;
    case Mode::EqualProbability:
      break;
  }
  throw std::logic_error("GridSpec: equal-probability grid must be resolved before use");
}

// ---------------------------------------------------------------- histograms

void PathHistogram::add(const PathKey& key, std::uint64_t count) {
  bins_[key] += count;
  total_ += count;
}

void PathHistogram::merge(const PathHistogram& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("PathHistogram::merge: grid mismatch");
  for (const auto& [key, count] : other.bins_) add(key, count);
}

std::uint64_t PathHistogram::count(const PathKey& key) const {
  const auto it = bins_.find(key);
  return it == bins_.end() ? 0 : it->second;
}

double PathHistogram::frequency(const PathKey& key) const {
  return total_ == 0 ? 0.0 : static_cast<double>(count(key)) / static_cast<double>(total_);
}

std::vector<double> PathBatch::column(std::size_t step) const {
  if (step_width != 1) throw std::logic_error("PathBatch::column: vector outcomes");
  std::vector<double> out(reps);
  for (std::size_t i = 0; i < reps; ++i) out[i] = values[i * length + step];
  return out;
}

std::vector<std::vector<double>> PathBatch::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    const auto r = row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

PathBatch sample_paths(const GeneratorSpec& spec, std::size_t length, std::size_t reps, const RngStream& rng) {
  if (length == 0) throw std::invalid_argument("sample_paths: length must be >= 1");
  const std::size_t chunks = (reps + kReplicationChunk - 1) / kReplicationChunk;
  std::vector<std::vector<double>> parts(chunks);
  std::vector<std::size_t> widths(chunks, 1);
  for_each_chunk(reps, rng, [&](std::size_t c, std::size_t first, std::size_t last, RngStream& chunk_rng) {
    auto& part = parts[c];
    for (std::size_t i = first; i < last; ++i) {
      const auto s = sample_path(spec, length, chunk_rng);
      widths[c] = s.width();
      s.flatten_into(part);
    }
  });
  PathBatch batch;
  batch.kind = outcome_kind(spec);
  batch.length = length;
  batch.step_width = chunks == 0 ? 1 : widths.front();
  batch.reps = reps;
  batch.values.reserve(reps * length * batch.step_width);
  for (auto& part : parts) batch.values.insert(batch.values.end(), part.begin(), part.end());
  return batch;
}

PathHistogram histogram_of(const PathBatch& batch, const GridSpec& grid, std::span<const std::size_t> permutation) {
  PathHistogram hist(grid);
  std::vector<double> view(batch.row_width());
  for (std::size_t i = 0; i < batch.reps; ++i) {
    const auto row = batch.row(i);
    for (std::size_t j = 0; j < batch.length; ++j) {
      const std::size_t src = permutation.empty() ? j : permutation[j];
      for (std::size_t w = 0; w < batch.step_width; ++w) {
        view[j * batch.step_width + w] = row[src * batch.step_width + w];
      }
    }
    hist.add(grid.discretize(view));
  }
  return hist;
}

PathHistogram empirical_path_distribution(const GeneratorSpec& spec, std::size_t length, std::size_t reps,
                                          const GridSpec& grid, const RngStream& rng) {
  if (reps == 0) throw std::invalid_argument("empirical_path_distribution: reps must be >= 1");
  const auto batch = sample_paths(spec, length, reps, rng);
  const auto resolved = resolve_for(grid, batch.kind, batch.values, batch.row_width());
  return histogram_of(batch, resolved);
}

double tvd(const PathHistogram& a, const PathHistogram& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("tvd: histograms use different grids");
  if (a.total() == 0 || b.total() == 0) throw std::invalid_argument("tvd: empty histogram");
  const double na = static_cast<double>(a.total());
  const double nb = static_cast<double>(b.total());
  double sum = 0.0;
  auto ia = a.bins().begin();
  auto ib = b.bins().begin();
  while (ia != a.bins().end() || ib != b.bins().end()) {
    if (ib == b.bins().end() || (ia != a.bins().end() && ia->first < ib->first)) {
      sum += static_cast<double>(ia->second) / na;
      ++ia;
    } else if (ia == a.bins().end() || ib->first < ia->first) {
      sum += static_cast<double>(ib->second) / nb;
      ++ib;
    } else {
      sum += std::abs(static_cast<double>(ia->second) / na - static_cast<double>(ib->second) / nb);
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, 0.5 * sum);
}

// ---------------------------------------------------------------- reports

const char* to_string(Verdict verdict) { return verdict == Verdict::Consistent ? "consistent" : "rejected"; }

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j;
  j["method"] = method;
  j["statistic"] = statistic;
  j["p_value_or_distance"] = p_value_or_distance;
  j["samples_a"] = samples_a;
  j["samples_b"] = samples_b;
  j["verdict"] = to_string(verdict);
  j["threshold"] = threshold;
  if (!details.empty()) {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [k, v] : details) d[k] = v;
    j["details"] = d;
  }
  return j;
}

ComparisonReport ComparisonReport::from_p_value(std::string method, double statistic, double p, std::uint64_t na,
                                                std::uint64_t nb, double significance) {
  ComparisonReport r;
  r.method = std::move(method);
  r.statistic = statistic;
  r.p_value_or_distance = p;
  r.samples_a = na;
  r.samples_b = nb;
  r.threshold = significance;
  r.verdict = p <= significance ? Verdict::Rejected : Verdict::Consistent;
  return r;
}

ComparisonReport ComparisonReport::from_distance(std::string method, double distance, std::uint64_t na,
                                                 std::uint64_t nb, double tolerance) {
  ComparisonReport r;
  r.method = std::move(method);
  r.statistic = distance;
  r.p_value_or_distance = distance;
  r.samples_a = na;
  r.samples_b = nb;
  r.threshold = tolerance;
  r.verdict = distance > tolerance ? Verdict::Rejected : Verdict::Consistent;
  return r;
}

// ---------------------------------------------------------------- chi-square

ComparisonReport chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected,
                                double significance) {
  if (observed.size() != expected.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
  if (observed.size() < 2) throw std::invalid_argument("chi_square_gof: need at least two cells");
  double mass = 0.0;
  for (double p : expected) {
    if (!(p >= 0.0)) throw std::invalid_argument("chi_square_gof: negative expected probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("chi_square_gof: expected probabilities must sum to 1");
  const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n <= 0.0) throw std::invalid_argument("chi_square_gof: no observations");

  struct Cell {
    double observed;
    double expected;
  };
  std::vector<Cell> cells;
  Cell tail{0.0, 0.0};
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const Cell c{static_cast<double>(observed[i]), expected[i] * n};
    if (c.expected < 5.0) {
      tail.observed += c.observed;
      tail.expected += c.expected;
    } else {
      cells.push_back(c);
    }
  }
  if (tail.expected > 0.0 || tail.observed > 0.0) {
    if (tail.expected < 5.0 && !cells.empty()) {
      auto smallest = std::min_element(cells.begin(), cells.end(),
                                       [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
      smallest->observed += tail.observed;
      smallest->expected += tail.expected;
    } else {
      cells.push_back(tail);
    }
  }
  if (cells.size() < 2) throw std::invalid_argument("chi_square_gof: fewer than two cells after pooling");
  double stat = 0.0;
  for (const auto& c : cells) {
    if (c.expected <= 0.0) {
      if (c.observed > 0.0) stat = std::numeric_limits<double>::infinity();
      continue;
    }
    stat += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  }
  const double dof = static_cast<double>(cells.size() - 1);
  auto report = ComparisonReport::from_p_value("chi-square-gof", stat, std::isinf(stat) ? 0.0 : chi_square_tail(stat, dof),
                                               static_cast<std::uint64_t>(n), 0, significance);
  report.details = {{"dof", dof}};
  return report;
}

ComparisonReport chi_square_homogeneity(const PathHistogram& a, const PathHistogram& b, double significance) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("chi_square_homogeneity: grid mismatch");
  if (a.total() == 0 || b.total() == 0) throw std::invalid_argument("chi_square_homogeneity: empty histogram");
  const double na = static_cast<double>(a.total());
  const double nb = static_cast<double>(b.total());
  const double n = na + nb;

  std::map<PathKey, std::pair<double, double>> table;
  for (const auto& [k, c] : a.bins()) table[k].first = static_cast<double>(c);
  for (const auto& [k, c] : b.bins()) table[k].second = static_cast<double>(c);

  std::vector<std::pair<double, double>> columns;
  std::pair<double, double> pooled{0.0, 0.0};
  const double min_share = std::min(na, nb) / n;
  for (const auto& [k, col] : table) {
    const double total = col.first + col.second;
    if (total * min_share < 5.0) {
      pooled.first += col.first;
      pooled.second += col.second;
    } else {
      columns.push_back(col);
    }
  }
  if (pooled.first + pooled.second > 0.0) {
    if ((pooled.first + pooled.second) * min_share < 5.0 && !columns.empty()) {
      auto smallest = std::min_element(columns.begin(), columns.end(), [](const auto& x, const auto& y) {
        return x.first + x.second < y.first + y.second;
      });
      smallest->first += pooled.first;
      smallest->second += pooled.second;
    } else {
      columns.push_back(pooled);
    }
  }
  const double distance = tvd(a, b);
  if (columns.size() < 2) {
    auto report = ComparisonReport::from_p_value("chi-square-homogeneity", 0.0, 1.0, a.total(), b.total(), significance);
    report.details = {{"dof", 0.0}, {"tvd", distance}};
    return report;
  }
  double stat = 0.0;
  for (const auto& [ca, cb] : columns) {
    const double col = ca + cb;
    const double ea = col * na / n;
    const double eb = col * nb / n;
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  const double dof = static_cast<double>(columns.size() - 1);
  auto report = ComparisonReport::from_p_value("chi-square-homogeneity", stat, chi_square_tail(stat, dof), a.total(),
                                               b.total(), significance);
  report.details = {{"dof", dof}, {"tvd", distance}};
  return report;
}

// ---------------------------------------------------------------- Kolmogorov-Smirnov

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = 3.14159265358979323846;
  if (lambda < 1.18) {
    // Jacobi-transformed series, fast for small lambda.
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    const double y8 = std::pow(y, 8.0);
    const double cdf = std::sqrt(2.0 * pi) / lambda * y * (1.0 + y8 * (1.0 + y8 * y8));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ComparisonReport ks_two_sample(std::span<const double> a, std::span<const double> b, double significance) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: samples must be non-empty");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = nx * ny / (nx + ny);
  const double root = std::sqrt(ne);
  const double p = kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
  return ComparisonReport::from_p_value("ks-two-sample", d, p, a.size(), b.size(), significance);
}

ComparisonReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                               double significance) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: samples must be non-empty");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  const double p = kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
  return ComparisonReport::from_p_value("ks-one-sample", d, p, x.size(), 0, significance);
}

// ---------------------------------------------------------------- moments

Eigen::VectorXd mean_vector(std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_vector: no samples");
  const auto m = samples.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (const auto& s : samples) {
    if (s.size() != m) throw std::invalid_argument("mean_vector: sequences differ in length");
    mean += Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(m));
  }
  return mean / static_cast<double>(samples.size());
}

Eigen::MatrixXd covariance_matrix(std::span<const std::vector<double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("covariance_matrix: need at least two samples");
  const auto mean = mean_vector(samples);
  const auto m = mean.size();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd centered(m);
  for (const auto& s : samples) {
    centered = Eigen::Map<const Eigen::VectorXd>(s.data(), m) - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  return cov / static_cast<double>(samples.size() - 1);
}

// ---------------------------------------------------------------- exchangeability

std::uint64_t hypergeometric_sample(std::uint64_t population, std::uint64_t successes, std::uint64_t draws,
                                    RngStream& rng) {
  if (successes > population || draws > population) {
    throw std::invalid_argument("hypergeometric_sample: successes and draws must not exceed population");
  }
  const std::uint64_t failures = population - successes;
  const std::uint64_t lo = draws > failures ? draws - failures : 0;
  const std::uint64_t hi = std::min(draws, successes);
  if (lo == hi) return lo;

  const double N = static_cast<double>(population);
  const double K = static_cast<double>(successes);
  const double n = static_cast<double>(draws);
  auto log_pmf = [&](double k) {
    return std::lgamma(K + 1) - std::lgamma(k + 1) - std::lgamma(K - k + 1) + std::lgamma(N - K + 1) -
           std::lgamma(n - k + 1) - std::lgamma(N - K - n + k + 1) - std::lgamma(N + 1) + std::lgamma(n + 1) +
           std::lgamma(N - n + 1);
  };
  // Inversion that visits the support outward from the mode.
  const auto mode = std::clamp(
      static_cast<std::uint64_t>(std::floor((n + 1.0) * (K + 1.0) / (N + 2.0))), lo, hi);
  const double p_mode = std::exp(log_pmf(static_cast<double>(mode)));
  double u = rng.uniform01() - p_mode;
  if (u < 0.0) return mode;
  std::uint64_t down = mode;
  std::uint64_t up = mode;
  double p_down = p_mode;
  double p_up = p_mode;
  while (down > lo || up < hi) {
    if (down > lo) {
      const double k = static_cast<double>(down);
      // p(k-1)/p(k) = k (N-K-n+k) / ((K-k+1)(n-k+1))
      p_down *= k * (N - K - n + k) / ((K - k + 1.0) * (n - k + 1.0));
      --down;
      u -= p_down;
      if (u < 0.0) return down;
    }
    if (up < hi) {
      const double k = static_cast<double>(up);
      // p(k+1)/p(k) = (K-k)(n-k) / ((k+1)(N-K-n+k+1))
      p_up *= (K - k) * (n - k) / ((k + 1.0) * (N - K - n + k + 1.0));
      ++up;
      u -= p_up;
      if (u < 0.0) return up;
    }
  }
  return mode;
}

std::vector<std::vector<std::size_t>> all_transpositions(std::size_t length) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t j = i + 1; j < length; ++j) {
      auto p = identity_permutation(length);
      std::swap(p[i], p[j]);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<std::size_t> reversal(std::size_t length) {
  auto p = identity_permutation(length);
  std::reverse(p.begin(), p.end());
  return p;
}

ComparisonReport exchangeability_test(const GeneratorSpec& spec, std::size_t length, std::size_t reps,
                                      const std::vector<std::vector<std::size_t>>& permutations,
                                      const GridSpec& grid, const RngStream& rng,
                                      const ExchangeabilityOptions& options) {
  if (length < 1 || length > options.max_length) {
    throw std::invalid_argument("exchangeability_test: path length must lie in [1, " +
                                std::to_string(options.max_length) + "]");
  }
  if (reps < 1) throw std::invalid_argument("exchangeability_test: reps must be >= 1");
  if (permutations.empty()) throw std::invalid_argument("exchangeability_test: no permutations given");
  for (const auto& p : permutations) validate_permutation(p, length);

  // Pooled per-bin counts for each permutation's two-sample comparison.
  std::vector<std::vector<std::uint64_t>> pooled_counts;
  double observed = 0.0;
  for (std::size_t idx = 0; idx < permutations.size(); ++idx) {
    const auto& perm = permutations[idx];
    const auto straight = sample_paths(spec, length, reps, rng.split(2 * idx));
    const auto shuffled = sample_paths(spec, length, reps, rng.split(2 * idx + 1));

    std::vector<double> pooled = permuted_values(straight, {});
    const auto view = permuted_values(shuffled, perm);
    pooled.insert(pooled.end(), view.begin(), view.end());
    const auto resolved = resolve_for(grid, straight.kind, pooled, straight.row_width());

    const auto h_straight = histogram_of(straight, resolved);
    const auto h_permuted = histogram_of(shuffled, resolved, perm);
    observed = std::max(observed, tvd(h_straight, h_permuted));

    PathHistogram both = h_straight;
    both.merge(h_permuted);
    std::vector<std::uint64_t> counts;
    counts.reserve(both.bins().size());
    for (const auto& [key, c] : both.bins()) counts.push_back(c);
    pooled_counts.push_back(std::move(counts));
  }

  // Under exchangeability the straight/permuted labels are arbitrary; the
  // label split of each pooled histogram is multivariate hypergeometric.
  RngStream boot = rng.split(2 * permutations.size());
  const double n = static_cast<double>(reps);
  std::size_t at_least = 0;
  for (std::size_t b = 0; b < options.bootstrap; ++b) {
    double resampled = 0.0;
    for (const auto& counts : pooled_counts) {
      std::uint64_t remaining_pool = 2 * static_cast<std::uint64_t>(reps);
      std::uint64_t remaining_draws = reps;
      double l1 = 0.0;
      for (auto c : counts) {
        const auto in_a = remaining_draws == 0 ? 0 : hypergeometric_sample(remaining_pool, c, remaining_draws, boot);
        remaining_pool -= c;
        remaining_draws -= in_a;
        l1 += std::abs(static_cast<double>(in_a) - static_cast<double>(c - in_a));
      }
      resampled = std::max(resampled, 0.5 * l1 / n);
    }
    if (resampled >= observed - 1e-12) ++at_least;
  }
  const double p = static_cast<double>(1 + at_least) / static_cast<double>(options.bootstrap + 1);
  auto report = ComparisonReport::from_p_value("exchangeability-max-tvd", observed, p, reps, reps, options.significance);
  report.details = {{"permutations", static_cast<double>(permutations.size())},
                    {"bootstrap", static_cast<double>(options.bootstrap)}};
  return report;
}

// ---------------------------------------------------------------- conditional moments

ComparisonReport conditional_moment_check(std::span<const std::vector<double>> samples, std::size_t position,
                                          const ConditionalPredictor& predictor,
                                          const ConditionalCheckOptions& options) {
  if (samples.size() < options.min_samples) {
    throw std::invalid_argument("conditional_moment_check: need at least " + std::to_string(options.min_samples) +
                                " samples");
  }
  if (options.bins < 1) throw std::invalid_argument("conditional_moment_check: need at least one bin");
  struct Point {
    double predicted_mean;
    double z;
  };
  std::vector<Point> points;
  points.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.size() <= position) throw std::invalid_argument("conditional_moment_check: position beyond sequence length");
    const auto law = predictor(std::span<const double>(s.data(), position));
    if (!(law.variance > 0.0)) throw std::invalid_argument("conditional_moment_check: predicted variance must be > 0");
    points.push_back({law.mean, (s[position] - law.mean) / std::sqrt(law.variance)});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const Point& a, const Point& b) { return a.predicted_mean < b.predicted_mean; });

  const std::size_t total = points.size();
  double stat = 0.0;
  double worst = 0.0;
  for (std::size_t bin = 0; bin < options.bins; ++bin) {
    const std::size_t first = bin * total / options.bins;
    const std::size_t last = (bin + 1) * total / options.bins;
    const std::size_t count = last - first;
    if (count < options.min_bin_occupancy || count < 2) {
      throw std::runtime_error("conditional_moment_check: insufficient bin occupancy (" + std::to_string(count) +
                               " samples in bin " + std::to_string(bin) + ")");
    }
    double sum_z = 0.0;
    for (std::size_t i = first; i < last; ++i) sum_z += points[i].z;
    const double cnt = static_cast<double>(count);
    const double mean_z = sum_z / cnt;
    double spread = 0.0;
    for (std::size_t i = first; i < last; ++i) spread += (points[i].z - mean_z) * (points[i].z - mean_z);
    const double z_mean = mean_z * std::sqrt(cnt);
    const double half_dof = 0.5 * (cnt - 1.0);
    const double lower = boost::math::gamma_p(half_dof, 0.5 * spread);
    const double upper = boost::math::gamma_q(half_dof, 0.5 * spread);
    const double z_spread = lower < 0.5 ? -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * lower)
                                        : std::sqrt(2.0) * boost::math::erfc_inv(2.0 * upper);
    stat += z_mean * z_mean + z_spread * z_spread;
    worst = std::max({worst, std::abs(z_mean), std::abs(z_spread)});
  }
  const double dof = 2.0 * static_cast<double>(options.bins);
  auto report = ComparisonReport::from_p_value("conditional-moment", stat, chi_square_tail(stat, dof), total, 0,
                                               options.significance);
  report.details = {{"dof", dof}, {"position", static_cast<double>(position)}, {"max_abs_z", worst}};
  return report;
}

}  // namespace cumadv
