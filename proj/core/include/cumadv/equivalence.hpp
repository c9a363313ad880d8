#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "cumadv/gaussian_twins.hpp"
#include "cumadv/generator_spec.hpp"
#include "cumadv/rng.hpp"
#include "cumadv/sequence.hpp"

namespace cumadv {

inline constexpr double kDefaultSignificance = 1e-3;
inline constexpr std::size_t kDefaultBucketsPerCoordinate = 12;

using PathKey = std::vector<std::int64_t>;

/// How outcome tuples are discretized into histogram bins.
///
/// Exact keeps integer outcomes as they are. Buckets holds interior cut points
/// per coordinate; the outer buckets are open-ended, so every real value has a
/// bin. EqualProbability is a request that resolve() turns into Buckets using
/// empirical quantiles of pooled samples.
class GridSpec {
 public:
  enum class Mode { Exact, Buckets, EqualProbability };

  static GridSpec exact();
  static GridSpec buckets(std::vector<std::vector<double>> cuts_per_coordinate);
  static GridSpec equal_probability(std::size_t buckets_per_coordinate = kDefaultBucketsPerCoordinate);

  [[nodiscard]] Mode mode() const noexcept { return mode_; }
  [[nodiscard]] const std::vector<std::vector<double>>& cuts() const noexcept { return cuts_; }
  [[nodiscard]] std::size_t buckets_per_coordinate() const noexcept { return buckets_per_coordinate_; }

  /// pooled holds `coordinates` values per row, row-major.
  [[nodiscard]] GridSpec resolve(std::span<const double> pooled, std::size_t coordinates) const;

  /// Requires a resolved grid (Exact or Buckets).
  [[nodiscard]] PathKey discretize(std::span<const double> row) const;

  bool operator==(const GridSpec&) const = default;

 private:
  Mode mode_ = Mode::Exact;
  std::vector<std::vector<double>> cuts_;
  std::size_t buckets_per_coordinate_ = 0;
};

/// Counts of discretized length-m paths.
class PathHistogram {
 public:
  explicit PathHistogram(GridSpec grid) : grid_(std::move(grid)) {}

  void add(const PathKey& key, std::uint64_t count = 1);
  void merge(const PathHistogram& other);

  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::map<PathKey, std::uint64_t>& bins() const noexcept { return bins_; }
  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] std::uint64_t count(const PathKey& key) const;
  [[nodiscard]] double frequency(const PathKey& key) const;

 private:
  GridSpec grid_;
  std::map<PathKey, std::uint64_t> bins_;
  std::uint64_t total_ = 0;
};

/// reps sampled paths stored row-major; each row holds `length` time steps of
/// `step_width` flattened values.
struct PathBatch {
  OutcomeKind kind = OutcomeKind::Integer;
  std::size_t length = 0;
  std::size_t step_width = 1;
  std::size_t reps = 0;
  std::vector<double> values;

  [[nodiscard]] std::size_t row_width() const noexcept { return length * step_width; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values.data() + i * row_width(), row_width()};
  }
  /// Column `step` (scalar outcomes only).
  [[nodiscard]] std::vector<double> column(std::size_t step) const;
  [[nodiscard]] std::vector<std::vector<double>> rows() const;
};

PathBatch sample_paths(const GeneratorSpec& spec, std::size_t length, std::size_t reps, const RngStream& rng);

/// Rows are read through `permutation` (0-based, step j of the view is step
/// permutation[j] of the path); an empty permutation is the identity.
/// `grid` must be resolved.
PathHistogram histogram_of(const PathBatch& batch, const GridSpec& grid, std::span<const std::size_t> permutation = {});

PathHistogram empirical_path_distribution(const GeneratorSpec& spec, std::size_t length, std::size_t reps,
                                          const GridSpec& grid, const RngStream& rng);

/// Half the L1 distance between relative frequencies. Throws
/// std::invalid_argument when the grids differ.
double tvd(const PathHistogram& a, const PathHistogram& b);

enum class Verdict { Consistent, Rejected };
const char* to_string(Verdict verdict);

struct ComparisonReport {
  std::string method;
  double statistic = 0.0;
  double p_value_or_distance = 0.0;
  std::uint64_t samples_a = 0;
  std::uint64_t samples_b = 0;
  Verdict verdict = Verdict::Consistent;
  double threshold = kDefaultSignificance;
  std::vector<std::pair<std::string, double>> details;

  [[nodiscard]] bool consistent() const noexcept { return verdict == Verdict::Consistent; }
  [[nodiscard]] nlohmann::json to_json() const;

  /// Rejected iff p <= significance.
  static ComparisonReport from_p_value(std::string method, double statistic, double p, std::uint64_t na,
                                       std::uint64_t nb, double significance);
  /// Rejected iff distance > tolerance.
  static ComparisonReport from_distance(std::string method, double distance, std::uint64_t na, std::uint64_t nb,
                                        double tolerance);
};

/// Pearson goodness of fit. Cells with expected count below 5 are pooled into
/// one tail cell. Throws std::invalid_argument on mismatched sizes, weights not
/// summing to 1, or fewer than two cells after pooling.
ComparisonReport chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected,
                                double significance = kDefaultSignificance);

/// Two-sample chi-square test of homogeneity over the union of bins.
ComparisonReport chi_square_homogeneity(const PathHistogram& a, const PathHistogram& b,
                                        double significance = kDefaultSignificance);

/// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

ComparisonReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                               double significance = kDefaultSignificance);
ComparisonReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                               double significance = kDefaultSignificance);

/// Unbiased sample covariance across replications. Throws on fewer than two
/// samples or unequal lengths.
Eigen::MatrixXd covariance_matrix(std::span<const std::vector<double>> samples);
Eigen::VectorXd mean_vector(std::span<const std::vector<double>> samples);

/// Draws from the hypergeometric law: `draws` items without replacement from
/// `population` items of which `successes` are marked.
std::uint64_t hypergeometric_sample(std::uint64_t population, std::uint64_t successes, std::uint64_t draws,
                                    RngStream& rng);

struct ExchangeabilityOptions {
  std::size_t bootstrap = 1999;
  double significance = kDefaultSignificance;
  std::size_t max_length = 8;
};

/// All transpositions (i j), i < j, as 0-based permutations.
std::vector<std::vector<std::size_t>> all_transpositions(std::size_t length);
std::vector<std::size_t> reversal(std::size_t length);

/// For each permutation, compares the histogram of (Y_1..Y_m) against the
/// histogram of the permuted view (Y_s(1)..Y_s(m)) built from an independent
/// batch of replications. Statistic: max TVD over permutations. p-value:
/// permutation bootstrap of that maximum, resampling the two-sample label
/// split of every pooled histogram. Rejected means the law is not
/// exchangeable.
ComparisonReport exchangeability_test(const GeneratorSpec& spec, std::size_t length, std::size_t reps,
                                      const std::vector<std::vector<std::size_t>>& permutations,
                                      const GridSpec& grid, const RngStream& rng,
                                      const ExchangeabilityOptions& options = {});

using ConditionalPredictor = std::function<ConditionalLaw(std::span<const double>)>;

struct ConditionalCheckOptions {
  std::size_t bins = 10;
  double significance = kDefaultSignificance;
  std::size_t min_samples = 10'000;
  std::size_t min_bin_occupancy = 100;
};

/// Standardizes Y_{position+1} by the predicted law given the first
/// `position` values, groups samples into equal-count bins by predicted mean,
/// and tests per bin that the standardized values have mean 0 and variance 1.
/// Per bin the mean gives z = sqrt(n) * mean and the sum of squared deviations
/// is mapped through the chi-square(n - 1) cdf to a normal score. The squared
/// scores sum to chi-square with 2 * bins degrees of freedom, exactly when the
/// predicted law is normal.
ComparisonReport conditional_moment_check(std::span<const std::vector<double>> samples, std::size_t position,
                                          const ConditionalPredictor& predictor,
                                          const ConditionalCheckOptions& options = {});

}  // namespace cumadv
