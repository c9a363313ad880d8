#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumadv/rng.hpp"

namespace cumadv {

struct PointProcessParams {
  double alpha;
  double beta;
  double horizon;
  PointProcessParams(double alpha, double beta, double horizon);
};

/// Sorted event times of a counting process on (0, horizon].
class EventTimeline {
 public:
  /// Throws std::invalid_argument unless times are strictly increasing in (0, horizon].
  EventTimeline(std::vector<double> times, double horizon);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }

 private:
  std::vector<double> times_;
  double horizon_;
};

/// Thrown when a realization exceeds kMaxEventsPerRealization events.
class EventCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxEventsPerRealization = 1'000'000;

/// Pure-birth chain: after k events the next waiting time is
/// Exponential(alpha + beta k). Exact, no discretization.
EventTimeline contagious_poisson(const PointProcessParams& params, RngStream& rng);

/// Draws Q ~ Gamma(alpha/beta, scale beta) and returns the non-homogeneous
/// Poisson process with intensity Q e^{beta t}.
EventTimeline mixed_poisson_twin(const PointProcessParams& params, RngStream& rng);

/// Non-homogeneous Poisson process with intensity q e^{beta t} for a fixed q,
/// via t_i = (1/beta) ln(1 + beta u_i / q) on unit-rate arrivals u_i.
EventTimeline exponential_rate_poisson(double q, double beta, double horizon, RngStream& rng);

/// Homogeneous Poisson process whose rate is drawn once from
/// Gamma(shape, scale).
EventTimeline homogeneous_mixed_poisson(double shape, double scale, double horizon, RngStream& rng);

/// Number of events at or before t. Throws std::out_of_range unless 0 <= t <= horizon.
std::size_t count_at(const EventTimeline& timeline, double t);

enum class RescaleDirection {
  Compress,  // s(t) = ln(beta t + 1) / beta
  Expand,    // g(t) = (e^{beta t} - 1) / beta
};

double compress_time(double t, double beta);
double expand_time(double t, double beta);

/// Maps every event time and the horizon through s (Compress) or g (Expand).
EventTimeline time_rescale(const EventTimeline& timeline, double beta, RescaleDirection direction);

/// The time-changed process Y_t = X_{s(t)}. Composing a counting process with
/// s moves each of its event times through g = s^{-1}; for a contagious
/// process with (alpha, beta) the result is a homogeneous mixed Poisson
/// process with Gamma(alpha/beta, scale beta) rate.
EventTimeline time_change_by_compression(const EventTimeline& timeline, double beta);

/// CSV with '#key=value' header lines for alpha, beta, horizon and model id,
/// then a `time` column, one event per row.
void write_timeline_csv(std::ostream& out, const EventTimeline& timeline, const PointProcessParams& params,
                        const std::string& model_id);

}  // namespace cumadv
