#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cumadv/rng.hpp"

namespace cumadv {

struct Uniform01 {};
struct Normal {
  double mean;
  double variance;
};
struct LogNormal {
  double log_mean;
  double log_variance;
};
/// Shape-scale parameterization: density x^(shape-1) e^(-x/scale).
struct Gamma {
  double shape;
  double scale;
};
struct Exponential {
  double rate;
};
struct Bernoulli {
  double p;
};
/// Index-valued law on {0, ..., weights.size()-1}.
struct Discrete {
  std::vector<double> weights;
};

/// A validated univariate law. Parameters are checked once at construction,
/// so sampling never fails.
class Distribution {
 public:
  using Variant = std::variant<Uniform01, Normal, LogNormal, Gamma, Exponential, Bernoulli, Discrete>;

  static Distribution uniform01();
  static Distribution normal(double mean, double variance);
  static Distribution lognormal(double log_mean, double log_variance);
  static Distribution gamma(double shape, double scale);
  static Distribution exponential(double rate);
  static Distribution bernoulli(double p);
  static Distribution discrete(std::vector<double> weights);

  [[nodiscard]] const Variant& params() const noexcept { return params_; }

  double sample(RngStream& rng) const;
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double mean() const;
  [[nodiscard]] double support_min() const;
  [[nodiscard]] double support_max() const;
  [[nodiscard]] bool is_discrete() const;
  /// Round-trips through parse_distribution.
  [[nodiscard]] std::string to_string() const;

 private:
  explicit Distribution(Variant v) : params_(std::move(v)) {}
  Variant params_;
};

double sample(const Distribution& dist, RngStream& rng);

using QuantileFunction = std::function<double(double)>;

/// Applies a generalized inverse CDF to u. Throws std::domain_error if u is
/// outside [0, 1].
double inverse_transform(const QuantileFunction& quantile, double u);

/// Parses "uniform", "normal:m:v", "lognormal:m:v", "gamma:k:theta",
/// "exponential:rate", "bernoulli:p", "discrete:w0:w1:...".
Distribution parse_distribution(std::string_view text);

}  // namespace cumadv
