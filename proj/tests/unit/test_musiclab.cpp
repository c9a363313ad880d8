#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include <numeric>
#include <set>
#include <sstream>

#include "cumadv/musiclab.hpp"

using namespace cumadv;
using namespace cumadv::musiclab;

namespace {

DownloadLog parse(const std::string& text) {
  std::istringstream in(text);
  return ingest_log(in);
}

std::size_t error_row(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const LogFormatError& e) {
    return e.row();
  }
  return 0;
}

UrnRunResult single_quartile(std::vector<std::uint32_t> counts) {
  UrnRunResult r;
  for (auto& q : r.counts_over_time) q = counts;
  r.total_downloads = 4 * std::accumulate(counts.begin(), counts.end(), 0U);
  return r;
}

std::vector<std::int32_t> users(std::size_t n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<std::int32_t> out(n);
  for (auto& k : out) k = 1 + static_cast<std::int32_t>(rng() % 3);
  return out;
}

}  // namespace

TEST_SUITE("musiclab") {
  TEST_CASE("ingest well-formed log") {
    const auto log = parse("#n_songs=48\n#version=1\nuser_id,song_id\nu1,5\nu2,5\nu1,7\n");
    CHECK(log.events.size() == 3);
    CHECK(log.n_songs == 48);
    CHECK(log.metadata.at("version") == "1");
    CHECK(log.events[2].user_id == "u1");
    CHECK(log.events[2].song_id == 7);
  }

  TEST_CASE("ingest errors name the row") {
    CHECK(error_row("user_id,song_id\nu1,5\nu2,3\nu1,5\n") == 4);
    CHECK(error_row("#n_songs=4\nuser_id,song_id\nu1,4\n") == 3);
    CHECK(error_row("user_id,song\nu1,1\n") == 1);
    CHECK(error_row("user_id,song_id\nu1,x\n") == 2);
    CHECK(error_row("user_id,song_id\nu1\n") == 2);
    CHECK(error_row("user_id,song_id\nu1,-1\n") == 2);
    try {
      (void)parse("user_id,song_id\nu1,5\nu1,5\n");
      FAIL("expected an error");
    } catch (const LogFormatError& e) {
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }

  TEST_CASE("empty log with declared size") {
    const auto log = parse("#n_songs=48\nuser_id,song_id\n");
    CHECK(log.events.empty());
    CHECK(log.n_songs == 48);
  }

  TEST_CASE("n_songs inferred from the largest id") { CHECK(parse("user_id,song_id\nu1,9\n").n_songs == 10); }

  TEST_CASE("quartile sizes") {
    CHECK(quartile_sizes(10) == std::array<std::size_t, 4>{3, 3, 2, 2});
    CHECK(quartile_sizes(8) == std::array<std::size_t, 4>{2, 2, 2, 2});
    CHECK(quartile_sizes(3) == std::array<std::size_t, 4>{1, 1, 1, 0});
  }

  TEST_CASE("no-repeat forces both songs") {
    const auto log = parse("#n_songs=2\nuser_id,song_id\nu1,0\nu1,1\n");
    const auto root = make_rng(501);
    for (double f : {0.0, 0.3, 5.0}) {
      for (std::uint64_t r = 0; r < 50; ++r) {
        auto rng = root.split(r);
        const auto res = simulate_urn_replication(log, f, rng);
        std::uint32_t a = 0, b = 0;
        for (const auto& q : res.counts_over_time) {
          a += q[0];
          b += q[1];
        }
        CHECK(a == 1);
        CHECK(b == 1);
      }
    }
    auto rng = make_rng(1);
    CHECK_THROWS_AS(simulate_urn_replication(log, -0.1, rng), std::invalid_argument);
  }

  TEST_CASE("conservation per quartile") {
    auto rng = make_rng(502);
    const auto log = urn_fixture(20, users(101, 1), 0.4, rng);
    const auto sizes = quartile_sizes(log.events.size());
    const auto empirical = empirical_counts(log);
    for (std::uint64_t r = 0; r < 20; ++r) {
      auto child = rng.split(r);
      const auto res = simulate_urn_replication(log, 0.4, child);
      CHECK(res.total_downloads == log.events.size());
      for (std::size_t q = 0; q < 4; ++q) {
        CHECK(std::accumulate(res.counts_over_time[q].begin(), res.counts_over_time[q].end(), std::size_t{0}) == sizes[q]);
        CHECK(std::accumulate(empirical.counts_over_time[q].begin(), empirical.counts_over_time[q].end(),
                              std::size_t{0}) == sizes[q]);
      }
    }
  }

  TEST_CASE("rank proportions") {
    const auto r = single_quartile({10, 30, 60});
    const auto p = rank_proportions(r, 1);
    CHECK(p[0] == doctest::Approx(60.0));
    CHECK(p[1] == doctest::Approx(30.0));
    CHECK(p[2] == doctest::Approx(10.0));
    for (double v : rank_proportions(single_quartile({7, 7, 7, 7, 7}), 4)) CHECK(v == doctest::Approx(20.0));
    CHECK_THROWS_AS(rank_proportions(r, 5), std::invalid_argument);
    CHECK_THROWS_AS(rank_proportions(single_quartile({0, 0}), 2), std::invalid_argument);
  }

  TEST_CASE("fit with one grid value") {
    auto rng = make_rng(503);
    const auto log = urn_fixture(10, users(60, 2), 0.3, rng);
    const auto fit = fit_f(log, {0.42}, 5, make_rng(1));
    CHECK(fit.f_star == 0.42);
    CHECK(fit.losses.size() == 1);
    CHECK_THROWS_AS(fit_f(log, {}, 5, make_rng(1)), std::invalid_argument);
  }

  TEST_CASE("self-consistency on a coarse grid") {
    auto rng = make_rng(504);
    const auto log = urn_fixture(48, users(500, 3), 0.3, rng);
    const auto fit = fit_f(log, {0.1, 0.3, 0.5}, 300, make_rng(505));
    CHECK(fit.f_star == 0.3);
    double best = fit.losses.at(fit.f_star);
    for (const auto& [f, loss] : fit.losses) CHECK(loss >= best);
    const auto j = fit.to_json();
    CHECK(j.contains("grid"));
    CHECK(j.contains("losses"));
    CHECK(j.at("f_star") == 0.3);
    CHECK(j.at("reps_per_point") == 300);
  }

  TEST_CASE("two-stage grid") {
    const auto coarse = arithmetic_grid(0.1, 0.6, 0.05);
    CHECK(coarse.size() == 11);
    CHECK(coarse.back() == doctest::Approx(0.6));
    auto rng = make_rng(506);
    const auto log = urn_fixture(12, users(80, 4), 0.3, rng);
    const auto fit = fit_f_two_stage(log, TwoStageGrid{}, 20, make_rng(507));
    CHECK(fit.grid.size() > coarse.size());
    CHECK(fit.losses.at(fit.f_star) <= fit.losses.begin()->second);
    for (const auto& [f, loss] : fit.losses) CHECK(loss >= fit.losses.at(fit.f_star));
  }

  TEST_CASE("interval order statistics") {
    CHECK(interval_order_statistics(2000, 0.95) == std::pair<std::size_t, std::size_t>{50, 1951});
    CHECK(interval_order_statistics(100, 0.9) == std::pair<std::size_t, std::size_t>{5, 96});
    CHECK_THROWS_AS(interval_order_statistics(100, 1.0), std::invalid_argument);
  }

  TEST_CASE("no reinforcement gives near-uniform intervals") {
    auto rng = make_rng(508);
    const std::vector<std::int32_t> per_user(4000, 2);
    const auto log = synth_fixture(20, per_user, Distribution::normal(1.0, 0.0), rng);
    const auto report = interval_report(log, 0.0, 200, 0.95, make_rng(509));
    for (const auto& q : report.quartiles) {
      for (const auto& iv : q) {
        CHECK(std::abs(iv.mean - 5.0) < 1.5);
        CHECK(iv.low <= iv.mean);
        CHECK(iv.mean <= iv.high);
      }
    }
  }

  TEST_CASE("talent fixtures") {
    auto rng = make_rng(510);
    const std::vector<std::int32_t> one(300, 1);
    // dominance: one song with 1e6 times the weight of the rest
    std::vector<double> talents(10, 1.0);
    talents[3] = 1e6;
    const auto dominated = synth_fixture(talents, one, rng);
    REQUIRE(dominated.events.size() == 300);
    for (const auto& e : dominated.events) CHECK(e.song_id == 3);
    CHECK(dominated.n_songs == 10);

    // degenerate talent: all songs equally likely
    std::vector<double> counts(8, 0.0);
    for (std::uint64_t r = 0; r < 200; ++r) {
      auto child = rng.split(r);
      for (const auto& e : synth_fixture(8, std::vector<std::int32_t>(100, 2), Distribution::normal(1.0, 0.0), child).events) {
        counts[e.song_id] += 1.0;
      }
    }
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    for (double c : counts) CHECK(std::abs(c / total - 0.125) < 0.01);

    // round trip
    const auto log = synth_fixture(48, users(50, 5), Distribution::lognormal(0, 0.25), rng);
    std::ostringstream os;
    write_log(os, log);
    const auto back = parse(os.str());
    CHECK(back.n_songs == 48);
    REQUIRE(back.events.size() == log.events.size());
    for (std::size_t i = 0; i < log.events.size(); ++i) {
      CHECK(back.events[i].user_id == log.events[i].user_id);
      CHECK(back.events[i].song_id == log.events[i].song_id);
    }
  }

  TEST_CASE("quartile csv") {
    auto rng = make_rng(511);
    const auto log = urn_fixture(6, users(40, 6), 0.3, rng);
    const auto report = interval_report(log, 0.3, 40, 0.95, make_rng(512));
    std::ostringstream os;
    write_quartile_csv(os, log, report, 2, {{"seed", "512"}});
    const auto text = os.str();
    CHECK(text.find("#seed=512\n") != std::string::npos);
    CHECK(text.find("rank,empirical_pct,sim_mean_pct,sim_low_pct,sim_high_pct\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') >= 7);
    const double coverage = interval_coverage(log, report);
    CHECK(coverage >= 0.0);
    CHECK(coverage <= 1.0);
  }

  TEST_CASE("rank-1 share in the last quartile grows with f") {
    auto rng = make_rng(513);
    const auto log = urn_fixture(48, users(500, 7), 0.3, rng);
    double prev = 0.0;
    for (double f : {0.1, 0.3, 0.6}) {
      const auto report = interval_report(log, f, 300, 0.95, make_rng(514));
      const double top = report.quartiles[3][0].mean;
      CHECK(top >= prev);
      prev = top;
    }
  }
}
