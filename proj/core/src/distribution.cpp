#include "cumadv/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>

namespace cumadv {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(double x) { return std::isfinite(x); }

std::vector<std::string> split_colon(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::string_view context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("invalid number '" + s + "' in distribution '" + std::string(context) + "'");
  }
  return v;
}

std::string fmt(double x) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  return {buf, end};
}

}  // namespace

Distribution Distribution::uniform01() { return Distribution(Uniform01{}); }

Distribution Distribution::normal(double mean, double variance) {
  require(finite(mean), "Normal: mean must be finite");
  require(finite(variance) && variance >= 0.0, "Normal: variance must be >= 0");
  return Distribution(Normal{mean, variance});
}

Distribution Distribution::lognormal(double log_mean, double log_variance) {
  require(finite(log_mean), "LogNormal: log-mean must be finite");
  require(finite(log_variance) && log_variance >= 0.0, "LogNormal: log-variance must be >= 0");
  return Distribution(LogNormal{log_mean, log_variance});
}

Distribution Distribution::gamma(double shape, double scale) {
  require(finite(shape) && shape > 0.0, "Gamma: shape must be > 0");
  require(finite(scale) && scale > 0.0, "Gamma: scale must be > 0");
  return Distribution(Gamma{shape, scale});
}

Distribution Distribution::exponential(double rate) {
  require(finite(rate) && rate > 0.0, "Exponential: rate must be > 0");
  return Distribution(Exponential{rate});
}

Distribution Distribution::bernoulli(double p) {
  require(p >= 0.0 && p <= 1.0, "Bernoulli: p must lie in [0, 1]");
  return Distribution(Bernoulli{p});
}

Distribution Distribution::discrete(std::vector<double> weights) {
  require(!weights.empty(), "Discrete: weights must be non-empty");
  for (double w : weights) require(finite(w) && w >= 0.0, "Discrete: weights must be non-negative");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-9, "Discrete: weights must sum to 1");
  return Distribution(Discrete{std::move(weights)});
}

double Distribution::sample(RngStream& rng) const {
  return std::visit(
      overloaded{
          [&](const Uniform01&) { return rng.uniform01(); },
          [&](const Normal& d) {
            if (d.variance == 0.0) return d.mean;
            return std::normal_distribution<double>(d.mean, std::sqrt(d.variance))(rng);
          },
          [&](const LogNormal& d) {
            if (d.log_variance == 0.0) return std::exp(d.log_mean);
            return std::lognormal_distribution<double>(d.log_mean, std::sqrt(d.log_variance))(rng);
          },
          [&](const Gamma& d) { return std::gamma_distribution<double>(d.shape, d.scale)(rng); },
          [&](const Exponential& d) { return std::exponential_distribution<double>(d.rate)(rng); },
          [&](const Bernoulli& d) { return rng.uniform01() < d.p ? 1.0 : 0.0; },
          [&](const Discrete& d) {
            std::discrete_distribution<int> pick(d.weights.begin(), d.weights.end());
            return static_cast<double>(pick(rng));
          },
      },
      params_);
}

double Distribution::cdf(double x) const {
  namespace bm = boost::math;
  return std::visit(
      overloaded{
          [&](const Uniform01&) { return std::clamp(x, 0.0, 1.0); },
          [&](const Normal& d) {
            if (d.variance == 0.0) return x >= d.mean ? 1.0 : 0.0;
            return bm::cdf(bm::normal_distribution<double>(d.mean, std::sqrt(d.variance)), x);
          },
          [&](const LogNormal& d) {
            if (x <= 0.0) return 0.0;
            if (d.log_variance == 0.0) return std::log(x) >= d.log_mean ? 1.0 : 0.0;
            return bm::cdf(bm::lognormal_distribution<double>(d.log_mean, std::sqrt(d.log_variance)), x);
          },
          [&](const Gamma& d) {
            if (x <= 0.0) return 0.0;
            return bm::cdf(bm::gamma_distribution<double>(d.shape, d.scale), x);
          },
          [&](const Exponential& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x); },
          [&](const Bernoulli& d) {
            if (x < 0.0) return 0.0;
            return x < 1.0 ? 1.0 - d.p : 1.0;
          },
          [&](const Discrete& d) {
            if (x < 0.0) return 0.0;
            const auto upto = std::min(d.weights.size(), static_cast<std::size_t>(std::floor(x)) + 1);
            return std::min(1.0, std::accumulate(d.weights.begin(), d.weights.begin() + static_cast<long>(upto), 0.0));
          },
      },
      params_);
}

double Distribution::mean() const {
  return std::visit(
      overloaded{
          [](const Uniform01&) { return 0.5; },
          [](const Normal& d) { return d.mean; },
          [](const LogNormal& d) { return std::exp(d.log_mean + 0.5 * d.log_variance); },
          [](const Gamma& d) { return d.shape * d.scale; },
          [](const Exponential& d) { return 1.0 / d.rate; },
          [](const Bernoulli& d) { return d.p; },
          [](const Discrete& d) {
            double m = 0.0;
            for (std::size_t i = 0; i < d.weights.size(); ++i) m += static_cast<double>(i) * d.weights[i];
            return m;
          },
      },
      params_);
}

double Distribution::support_min() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [](const Uniform01&) { return 0.0; },
          [&](const Normal& d) { return d.variance == 0.0 ? d.mean : -inf; },
          [](const LogNormal& d) { return d.log_variance == 0.0 ? std::exp(d.log_mean) : 0.0; },
          [](const Gamma&) { return 0.0; },
          [](const Exponential&) { return 0.0; },
          [](const Bernoulli& d) { return d.p == 1.0 ? 1.0 : 0.0; },
          [](const Discrete& d) {
            std::size_t i = 0;
            while (i < d.weights.size() && d.weights[i] == 0.0) ++i;
            return static_cast<double>(i);
          },
      },
      params_);
}

double Distribution::support_max() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [](const Uniform01&) { return 1.0; },
          [&](const Normal& d) { return d.variance == 0.0 ? d.mean : inf; },
          [&](const LogNormal& d) { return d.log_variance == 0.0 ? std::exp(d.log_mean) : inf; },
          [&](const Gamma&) { return inf; },
          [&](const Exponential&) { return inf; },
          [](const Bernoulli& d) { return d.p == 0.0 ? 0.0 : 1.0; },
          [](const Discrete& d) {
            std::size_t i = d.weights.size();
            while (i > 0 && d.weights[i - 1] == 0.0) --i;
            return static_cast<double>(i == 0 ? 0 : i - 1);
          },
      },
      params_);
}

bool Distribution::is_discrete() const {
  return std::holds_alternative<Bernoulli>(params_) || std::holds_alternative<Discrete>(params_);
}

std::string Distribution::to_string() const {
  return std::visit(
      overloaded{
          [](const Uniform01&) { return std::string("uniform"); },
          [](const Normal& d) { return "normal:" + fmt(d.mean) + ":" + fmt(d.variance); },
          [](const LogNormal& d) { return "lognormal:" + fmt(d.log_mean) + ":" + fmt(d.log_variance); },
          [](const Gamma& d) { return "gamma:" + fmt(d.shape) + ":" + fmt(d.scale); },
          [](const Exponential& d) { return "exponential:" + fmt(d.rate); },
          [](const Bernoulli& d) { return "bernoulli:" + fmt(d.p); },
          [](const Discrete& d) {
            std::string s = "discrete";
            for (double w : d.weights) s += ":" + fmt(w);
            return s;
          },
      },
      params_);
}

double sample(const Distribution& dist, RngStream& rng) { return dist.sample(rng); }

double inverse_transform(const QuantileFunction& quantile, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("inverse_transform: u must lie in [0, 1]");
  return quantile(u);
}

Distribution parse_distribution(std::string_view text) {
  const auto parts = split_colon(text);
  const auto& name = parts.front();
  auto arg = [&](std::size_t i) { return to_double(parts.at(i), text); };
  auto expect_args = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      throw std::invalid_argument("distribution '" + std::string(text) + "' expects " + std::to_string(n) +
                                  " parameter(s)");
    }
  };
  if (name == "uniform") {
    expect_args(0);
    return Distribution::uniform01();
  }
  if (name == "normal") {
    expect_args(2);
    return Distribution::normal(arg(1), arg(2));
  }
  if (name == "lognormal") {
    expect_args(2);
    return Distribution::lognormal(arg(1), arg(2));
  }
  if (name == "gamma") {
    expect_args(2);
    return Distribution::gamma(arg(1), arg(2));
  }
  if (name == "exponential") {
    expect_args(1);
    return Distribution::exponential(arg(1));
  }
  if (name == "bernoulli") {
    expect_args(1);
    return Distribution::bernoulli(arg(1));
  }
  if (name == "discrete") {
    if (parts.size() < 2) throw std::invalid_argument("discrete distribution needs weights");
    std::vector<double> w;
    for (std::size_t i = 1; i < parts.size(); ++i) w.push_back(arg(i));
    return Distribution::discrete(std::move(w));
  }
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

}  // namespace cumadv
