#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include <cmath>

#include "cumadv/gaussian_twins.hpp"
#include "oracles.hpp"

using namespace cumadv;

TEST_SUITE("gaussian-twins") {
  TEST_CASE("twin mapping") {
    const auto t = twin_from_q(QModelParams(0, 1, 1));
    CHECK(t.a == 0.0);
    CHECK(t.b == 1.0);
    CHECK(t.c == 1.0);
    const auto t2 = twin_from_q(QModelParams(2, 0.5, 1));
    CHECK(t2.a == doctest::Approx(2));
    CHECK(t2.b == doctest::Approx(1));
    CHECK(t2.c == doctest::Approx(4));
    const auto q = q_from_twin(TwinParams(0, 1, 1));
    CHECK(q.mu_t == 0.0);
    CHECK(q.sigma_t == doctest::Approx(1));
    CHECK(q.sigma_x == doctest::Approx(1));
    const auto q2 = q_from_twin(TwinParams(2, 1, 4));
    CHECK(q2.mu_t == doctest::Approx(2));
    CHECK(q2.sigma_x == doctest::Approx(1));
    CHECK(q2.sigma_t == doctest::Approx(0.5));
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(QModelParams(0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(QModelParams(0, 1, -1), std::invalid_argument);
    CHECK_THROWS_AS(TwinParams(0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(TwinParams(0, 1, 0), std::invalid_argument);
  }

  TEST_CASE("conditional law") {
    const TwinParams p(0, 1, 1);
    const auto empty = twin_conditional_law(p, {});
    CHECK(empty.mean == 0.0);
    CHECK(empty.variance == doctest::Approx(2.0));
    const std::vector<double> h{1.7};
    const auto one = twin_conditional_law(p, h);
    CHECK(one.mean == doctest::Approx(0.85));
    CHECK(one.variance == doctest::Approx(1.5));
  }

  TEST_CASE("cumulative advantage: raising history raises the next mean") {
    const TwinParams p(0.5, 2.0, 3.0);
    std::vector<double> h{0.1, -0.4, 1.2, 0.7};
    const double base = twin_conditional_law(p, h).mean;
    const double delta = 0.25;
    for (auto& v : h) v += delta;
    const double n = 4.0;
    CHECK(twin_conditional_law(p, h).mean - base == doctest::Approx(n * delta / (n + 3.0)));
  }

  TEST_CASE("twin moments, 1e6 runs") {
    const TwinParams p(0, 1, 1);
    const std::size_t reps = 1'000'000;
    std::vector<double> y1(reps), y2(reps);
    const auto root = make_rng(71);
    for (std::size_t r = 0; r < reps; ++r) {
      auto rng = root.split(r);
      const auto y = twin_sequence(p, 2, rng).reals();
      y1[r] = y[0];
      y2[r] = y[1];
    }
    CHECK(std::abs(oracle::variance(y1) - 2.0) < 0.02);
    const double cov = oracle::correlation(y1, y2) * std::sqrt(oracle::variance(y1) * oracle::variance(y2));
    CHECK(std::abs(cov - 1.0) < 0.02);
  }

  TEST_CASE("q-model with nearly constant talent") {
    const QModelParams p(1.0, 1e-6, 0.7);
    const std::size_t reps = 200'000;
    std::vector<double> y1(reps);
    const auto root = make_rng(72);
    for (std::size_t r = 0; r < reps; ++r) {
      auto rng = root.split(r);
      y1[r] = q_model_sequence(p, 1, rng).reals()[0];
    }
    CHECK(std::abs(oracle::variance(y1) - 0.49) < 0.01);
  }

  TEST_CASE("citation counts") {
    const auto zeros = to_citation_counts(SequenceSample("q-model", SequenceSample::Reals{0.0, 0.0}));
    CHECK(zeros.reals() == std::vector<double>{1.0, 1.0});
    const auto ten = to_citation_counts(SequenceSample("q-model", SequenceSample::Reals{std::log(10.0)}));
    CHECK(ten.reals()[0] == doctest::Approx(10.0));
    CHECK_THROWS(to_citation_counts(SequenceSample("polya", SequenceSample::Integers{1})));
  }
}
