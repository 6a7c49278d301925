#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hbl/error.hpp"
#include "hbl/process.hpp"
#include "hbl/simulation.hpp"

using namespace hbl;

namespace {

RiskPath risk_from(double horizon, int initial, std::vector<double> breaks,
                   std::vector<double> values) {
  return RiskPath(StepFunction(TimeInterval(0.0, horizon), initial, std::move(breaks),
                               std::move(values)));
}

}  // namespace

TEST_CASE("no jumps gives zero estimates") {
  const auto risk = risk_from(1.0, 5, {}, {});
  const auto est = nelson_aalen(CountingPath{}, risk);
  CHECK(est.a_hat(0.7) == 0.0);
  CHECK(est.sigma_sq(1.0) == 0.0);
  CHECK(est.n_at_risk_initial == 5);
}

TEST_CASE("two simple jumps") {
  // Y = 4 on [0, 1], 2 on (1, 2], 0 after.
  const auto risk = risk_from(3.0, 4, {1.0, 2.0}, {2.0, 0.0});
  const auto est = nelson_aalen(CountingPath({{1.0, 1}, {2.0, 1}}), risk);
  CHECK(est.a_hat(1.0) == 0.25);
  CHECK(est.a_hat(2.0) == 0.75);
  CHECK(est.a_hat(0.99) == 0.0);
  CHECK(est.sigma_sq(2.0) == doctest::Approx(0.171875).epsilon(1e-15));
  CHECK(est.sigma_sq(1.0) == 3.0 / 64.0);
}

TEST_CASE("tied events use the count-weighted increments") {
  const auto risk = risk_from(2.0, 4, {1.0}, {2.0});
  const auto est = nelson_aalen(CountingPath({{1.0, 2}}), risk);
  CHECK(est.a_hat(1.0) == 0.5);
  CHECK(est.sigma_sq(1.0) == 0.0625);
}

TEST_CASE("inconsistent events and risk are rejected") {
  const auto empty_after = risk_from(2.0, 1, {0.5}, {0.0});
  CHECK_THROWS_AS(nelson_aalen(CountingPath({{1.0, 1}}), empty_after), InvalidInput);
  const auto two = risk_from(2.0, 2, {}, {});
  CHECK_THROWS_AS(nelson_aalen(CountingPath({{1.0, 3}}), two), InvalidInput);
  CHECK_THROWS_AS(CountingPath({{1.0, 0}}), InvalidInput);
  CHECK_THROWS_AS(CountingPath({{1.0, 1}, {1.0, 1}}), InvalidInput);
}

TEST_CASE("censored sample ingestion") {
  const std::vector<SurvivalRecord> recs{
      {1.0, Status::event}, {2.0, Status::censored}, {3.0, Status::event}};
  const auto obs = build_from_censored_sample(recs);
  CHECK(obs.risk.initial() == 3);
  REQUIRE(obs.events.size() == 2);
  CHECK(obs.risk.risk_at(1.0) == 3);
  CHECK(obs.risk.risk_at(3.0) == 1);
  const auto est = nelson_aalen(obs.events, obs.risk);
  CHECK(est.a_hat(3.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("all censored gives no jumps") {
  const std::vector<SurvivalRecord> recs{{1.0, Status::censored}, {4.0, Status::censored}};
  const auto obs = build_from_censored_sample(recs);
  CHECK(obs.events.empty());
  CHECK(nelson_aalen(obs.events, obs.risk).a_hat(4.0) == 0.0);
}

TEST_CASE("events precede censorings at a tied time") {
  // Enumerate both orderings by hand: censoring first would leave one subject
  // at risk (A = 1); events first keeps both (A = 1/2).
  const double censor_first = 1.0 / 1.0;
  const double events_first = 1.0 / 2.0;
  REQUIRE(censor_first != events_first);
  for (const auto& recs : {std::vector<SurvivalRecord>{{1.0, Status::event}, {1.0, Status::censored}},
                           std::vector<SurvivalRecord>{{1.0, Status::censored}, {1.0, Status::event}}}) {
    const auto obs = build_from_censored_sample(recs);
    REQUIRE(obs.events.size() == 1);
    CHECK(obs.risk.risk_at(1.0) == 2);
    CHECK(nelson_aalen(obs.events, obs.risk).a_hat(1.0) == events_first);
  }
}

TEST_CASE("ingestion errors") {
  CHECK_THROWS_AS(build_from_censored_sample({}), InvalidInput);
  const std::vector<SurvivalRecord> bad{{0.0, Status::event}};
  CHECK_THROWS_AS(build_from_censored_sample(bad), InvalidInput);
  const std::vector<SurvivalRecord> negative{{-2.0, Status::censored}};
  CHECK_THROWS_AS(build_from_censored_sample(negative), InvalidInput);
}

TEST_CASE("estimator invariants on random censored samples") {
  std::mt19937_64 gen(4242);
  std::uniform_int_distribution<int> size(1, 60);
  std::uniform_int_distribution<int> day(1, 40);  // coarse times force ties
  std::bernoulli_distribution is_event(0.6);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<SurvivalRecord> recs(static_cast<std::size_t>(size(gen)));
    int censored = 0;
    for (auto& r : recs) {
      r.time = day(gen);
      r.status = is_event(gen) ? Status::event : Status::censored;
      censored += r.status == Status::censored;
    }
    const auto obs = build_from_censored_sample(recs);
    const auto est = nelson_aalen(obs.events, obs.risk);

    CHECK(obs.events.total() + censored == static_cast<int>(recs.size()));
    CHECK(obs.risk.function().is_nonincreasing());
    CHECK(obs.risk.initial() == static_cast<int>(recs.size()));
    CHECK(obs.risk.function()(obs.risk.domain().end) == 0.0);

    REQUIRE(est.a_hat.is_nondecreasing());
    REQUIRE(est.sigma_sq.is_nondecreasing());
    CHECK(est.a_hat.initial_value() == 0.0);
    CHECK(est.sigma_sq.initial_value() == 0.0);
    double prev_a = 0.0;
    double prev_s = 0.0;
    for (std::size_t j = 0; j < est.jumps.size(); ++j) {
      const double da = est.a_hat.values_after()[j] - prev_a;
      const double ds = est.sigma_sq.values_after()[j] - prev_s;
      CHECK(da > 0.0);
      CHECK(da <= 1.0 + 1e-15);
      CHECK(ds >= 0.0);
      CHECK(ds <= 0.25 + 1e-15);
      prev_a = est.a_hat.values_after()[j];
      prev_s = est.sigma_sq.values_after()[j];
    }
  }
}

TEST_CASE("simple jumps reproduce the textbook increments bit for bit") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unif(0.01, 10.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<SurvivalRecord> recs;
    for (int i = 0; i < 30; ++i) {
      recs.push_back({unif(gen), i % 3 == 0 ? Status::censored : Status::event});
    }
    const auto obs = build_from_censored_sample(recs);
    const auto est = nelson_aalen(obs.events, obs.risk);
    double a = 0.0;
    double s2 = 0.0;
    for (std::size_t j = 0; j < est.jumps.size(); ++j) {
      REQUIRE(est.jumps[j].count == 1);
      const double y = est.jumps[j].at_risk;
      a += 1.0 / y;
      s2 += (y - 1.0) / (y * y * y);
      CHECK(est.a_hat.values_after()[j] == a);
      CHECK(est.sigma_sq.values_after()[j] == s2);
    }
  }
}

TEST_CASE("uniform error shrinks as the initial risk set grows") {
  auto mean_sup_error = [](int y0) {
    double total = 0.0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
      Rng rng = make_rng(1234, {static_cast<std::uint64_t>(y0), static_cast<std::uint64_t>(r)});
      const auto risk = generate_risk_path(y0, 0.25, 1.0, rng);
      const auto events = simulate_counting({Intensity::alpha1}, risk, rng);
      const auto est = nelson_aalen(events, risk);
      // Exact sup over [0, 0.8]: A is increasing, so check both ends of each segment.
      double sup = 0.0;
      double left = 0.0;
      double a = 0.0;
      for (const auto& j : est.jumps) {
        if (j.time > 0.8) break;
        sup = std::max(sup, std::abs(true_integrated_hazard(Intensity::alpha1, j.time) - a));
        a = est.a_hat(j.time);
        left = j.time;
        sup = std::max(sup, std::abs(true_integrated_hazard(Intensity::alpha1, left) - a));
      }
      sup = std::max(sup, std::abs(true_integrated_hazard(Intensity::alpha1, 0.8) - a));
      total += sup;
    }
    return total / reps;
  };
  const double e25 = mean_sup_error(25);
  const double e50 = mean_sup_error(50);
  const double e75 = mean_sup_error(75);
  CHECK(e25 > e50);
  CHECK(e50 > e75);
}
