#pragma once

#include <cstddef>
#include <span>

#include "cumadv/rng.hpp"
#include "cumadv/sequence.hpp"

namespace cumadv {

/// Log-space citation model: Y_k = T + X_k with T ~ N(mu_T, sigma_T^2) drawn
/// once and X_k ~ N(0, sigma_X^2) i.i.d.
struct QModelParams {
  double mu_t;
  double sigma_t;
  double sigma_x;
  QModelParams(double mu_t, double sigma_t, double sigma_x);
};

/// Path-dependent twin: Y'_{n+1} | Y'_1..Y'_n ~ N((c a + sum Y')/(n + c), b (1 + 1/(n + c))).
struct TwinParams {
  double a;
  double b;
  double c;
  TwinParams(double a, double b, double c);
};

struct ConditionalLaw {
  double mean;
  double variance;
};

SequenceSample q_model_sequence(const QModelParams& params, std::size_t n, RngStream& rng);

/// a = mu_T, b = sigma_X^2, c = sigma_X^2 / sigma_T^2.
TwinParams twin_from_q(const QModelParams& params);
QModelParams q_from_twin(const TwinParams& params);

ConditionalLaw twin_conditional_law(const TwinParams& params, std::span<const double> history);

SequenceSample twin_sequence(const TwinParams& params, std::size_t n, RngStream& rng);

/// Entrywise exp: log-citations back to citation counts.
SequenceSample to_citation_counts(const SequenceSample& log_sample);

}  // namespace cumadv
