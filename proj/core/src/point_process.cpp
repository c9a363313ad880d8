#include "cumadv/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace cumadv {
namespace {

constexpr double kMinMixingRate = 1e-300;

void append_event(std::vector<double>& times, double t) {
  if (!times.empty() && t <= times.back()) t = std::nextafter(times.back(), INFINITY);
  if (times.size() >= kMaxEventsPerRealization) {
    throw EventCapExceeded("point process exceeded " + std::to_string(kMaxEventsPerRealization) +
                           " events in one realization");
  }
  times.push_back(t);
}

double draw_mixing_rate(double shape, double scale, RngStream& rng) {
  std::gamma_distribution<double> gamma(shape, scale);
  double q = gamma(rng);
  while (!(q >= kMinMixingRate)) q = gamma(rng);
  return q;
}

}  // namespace

PointProcessParams::PointProcessParams(double a, double b, double h) : alpha(a), beta(b), horizon(h) {
  if (!(std::isfinite(a) && a > 0.0)) throw std::invalid_argument("PointProcessParams: alpha must be > 0");
  if (!(std::isfinite(b) && b > 0.0)) throw std::invalid_argument("PointProcessParams: beta must be > 0");
  if (!(std::isfinite(h) && h > 0.0)) throw std::invalid_argument("PointProcessParams: horizon must be > 0");
}

EventTimeline::EventTimeline(std::vector<double> times, double horizon) : times_(std::move(times)), horizon_(horizon) {
  if (!(std::isfinite(horizon_) && horizon_ > 0.0)) throw std::invalid_argument("EventTimeline: horizon must be > 0");
  double prev = 0.0;
  for (double t : times_) {
    if (!(t > prev)) throw std::invalid_argument("EventTimeline: times must be strictly increasing and positive");
    if (t > horizon_) throw std::invalid_argument("EventTimeline: event time beyond horizon");
    prev = t;
  }
}

EventTimeline contagious_poisson(const PointProcessParams& params, RngStream& rng) {
  std::vector<double> times;
  double t = 0.0;
  for (;;) {
    const double rate = params.alpha + params.beta * static_cast<double>(times.size());
    t += std::exponential_distribution<double>(rate)(rng);
    if (t > params.horizon) break;
    append_event(times, t);
  }
  return {std::move(times), params.horizon};
}

EventTimeline exponential_rate_poisson(double q, double beta, double horizon, RngStream& rng) {
  if (!(q > 0.0 && beta > 0.0 && horizon > 0.0)) {
    throw std::invalid_argument("exponential_rate_poisson: q, beta and horizon must be > 0");
  }
  // Cumulative intensity is q g(t); invert it on unit-rate arrivals.
  const double budget = q * expand_time(horizon, beta);
  std::vector<double> times;
  double u = 0.0;
  for (;;) {
    u += std::exponential_distribution<double>(1.0)(rng);
    if (u > budget) break;
    append_event(times, std::min(horizon, std::log1p(beta * u / q) / beta));
  }
  return {std::move(times), horizon};
}

EventTimeline mixed_poisson_twin(const PointProcessParams& params, RngStream& rng) {
  const double q = draw_mixing_rate(params.alpha / params.beta, params.beta, rng);
  return exponential_rate_poisson(q, params.beta, params.horizon, rng);
}

EventTimeline homogeneous_mixed_poisson(double shape, double scale, double horizon, RngStream& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("homogeneous_mixed_poisson: horizon must be > 0");
  const double rate = draw_mixing_rate(shape, scale, rng);
  std::vector<double> times;
  double t = 0.0;
  for (;;) {
    t += std::exponential_distribution<double>(rate)(rng);
    if (t > horizon) break;
    append_event(times, t);
  }
  return {std::move(times), horizon};
}

std::size_t count_at(const EventTimeline& timeline, double t) {
  if (!(t >= 0.0 && t <= timeline.horizon())) throw std::out_of_range("count_at: t outside [0, horizon]");
  const auto& times = timeline.times();
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

double compress_time(double t, double beta) { return std::log1p(beta * t) / beta; }

double expand_time(double t, double beta) { return std::expm1(beta * t) / beta; }

EventTimeline time_rescale(const EventTimeline& timeline, double beta, RescaleDirection direction) {
  if (!(std::isfinite(beta) && beta > 0.0)) throw std::invalid_argument("time_rescale: beta must be > 0");
  auto map = [&](double t) {
    return direction == RescaleDirection::Compress ? compress_time(t, beta) : expand_time(t, beta);
  };
  const double horizon = map(timeline.horizon());
  std::vector<double> times;
  times.reserve(timeline.size());
  for (double t : timeline.times()) {
    double mapped = std::min(map(t), horizon);
    if (!times.empty() && mapped <= times.back()) mapped = std::nextafter(times.back(), INFINITY);
    times.push_back(mapped);
  }
  return {std::move(times), horizon};
}

EventTimeline time_change_by_compression(const EventTimeline& timeline, double beta) {
  return time_rescale(timeline, beta, RescaleDirection::Expand);
}

void write_timeline_csv(std::ostream& out, const EventTimeline& timeline, const PointProcessParams& params,
                        const std::string& model_id) {
  const auto old_precision = out.precision(17);
  out << "#model=" << model_id << '\n'
      << "#alpha=" << params.alpha << '\n'
      << "#beta=" << params.beta << '\n'
      << "#horizon=" << timeline.horizon() << '\n'
      << "time\n";
  for (double t : timeline.times()) out << t << '\n';
  out.precision(old_precision);
}

}  // namespace cumadv
