#include "cumadv/gaussian_twins.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cumadv {

QModelParams::QModelParams(double mu, double sigma_talent, double sigma_luck)
    : mu_t(mu), sigma_t(sigma_talent), sigma_x(sigma_luck) {
  if (!std::isfinite(mu)) throw std::invalid_argument("QModelParams: mu_T must be finite");
  if (!(std::isfinite(sigma_talent) && sigma_talent > 0.0)) {
    throw std::invalid_argument("QModelParams: sigma_T must be > 0");
  }
  if (!(std::isfinite(sigma_luck) && sigma_luck > 0.0)) {
    throw std::invalid_argument("QModelParams: sigma_X must be > 0");
  }
}

TwinParams::TwinParams(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
  if (!std::isfinite(a_)) throw std::invalid_argument("TwinParams: a must be finite");
  if (!(std::isfinite(b_) && b_ > 0.0)) throw std::invalid_argument("TwinParams: b must be > 0");
  if (!(std::isfinite(c_) && c_ > 0.0)) throw std::invalid_argument("TwinParams: c must be > 0");
}

SequenceSample q_model_sequence(const QModelParams& params, std::size_t n, RngStream& rng) {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  const double talent = params.mu_t + params.sigma_t * std_normal(rng);
  SequenceSample::Reals y(n);
  for (auto& v : y) v = talent + params.sigma_x * std_normal(rng);
  return {"q-model", std::move(y)};
}

TwinParams twin_from_q(const QModelParams& params) {
  const double var_x = params.sigma_x * params.sigma_x;
  const double var_t = params.sigma_t * params.sigma_t;
  return {params.mu_t, var_x, var_x / var_t};
}

QModelParams q_from_twin(const TwinParams& params) {
  return {params.a, std::sqrt(params.b / params.c), std::sqrt(params.b)};
}

ConditionalLaw twin_conditional_law(const TwinParams& params, std::span<const double> history) {
  const double n = static_cast<double>(history.size());
  const double sum = std::accumulate(history.begin(), history.end(), 0.0);
  return {(params.c * params.a + sum) / (n + params.c), params.b * (1.0 + 1.0 / (n + params.c))};
}

SequenceSample twin_sequence(const TwinParams& params, std::size_t n, RngStream& rng) {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  SequenceSample::Reals y;
  y.reserve(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // Running-sum form of twin_conditional_law(params, y).
    const double count = static_cast<double>(k);
    const double mean = (params.c * params.a + sum) / (count + params.c);
    const double variance = params.b * (1.0 + 1.0 / (count + params.c));
    y.push_back(mean + std::sqrt(variance) * std_normal(rng));
    sum += y.back();
  }
  return {"gaussian-twin", std::move(y)};
}

SequenceSample to_citation_counts(const SequenceSample& log_sample) {
  SequenceSample::Reals counts = log_sample.reals();
  for (auto& v : counts) v = std::exp(v);
  return {log_sample.model_id(), std::move(counts)};
}

}  // namespace cumadv
