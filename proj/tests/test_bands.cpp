#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hbl/bands.hpp"
#include "hbl/error.hpp"
#include "hbl/simulation.hpp"

using namespace hbl;

namespace {

EstimatePair simulated_estimate(std::uint64_t seed, int y0, Intensity alpha = Intensity::alpha1) {
  Rng rng = make_rng(seed, {7});
  const auto risk = generate_risk_path(y0, 1.0, 1.0, rng);
  return nelson_aalen(simulate_counting({alpha}, risk, rng), risk);
}

// Exhaustive oracle: scan every tail rank and keep the largest feasible one.
EqualTailedCritical brute_force_equal_tailed(std::vector<SupStatistics> stats, double theta) {
  const int b = static_cast<int>(stats.size());
  std::vector<double> mins;
  std::vector<double> maxs;
  for (const auto& s : stats) {
    mins.push_back(s.min_t);
    maxs.push_back(s.max_t);
  }
  std::sort(mins.begin(), mins.end());
  std::sort(maxs.begin(), maxs.end());
  const int k_max = std::min(b, static_cast<int>(std::ceil((b + 1) * theta - 1e-9)));
  EqualTailedCritical best{mins[0], maxs[b - 1], 1};
  for (int k = 1; k <= std::max(1, k_max); ++k) {
    const double t2 = mins[k - 1];
    const double t3 = maxs[b - k];
    int inside = 0;
    for (const auto& s : stats) inside += (t2 <= s.min_t && s.max_t <= t3) ? 1 : 0;
    if (static_cast<double>(inside) / b >= 1.0 - theta) best = {t2, t3, k};
  }
  return best;
}

SupStatistics walk_extremes(std::mt19937_64& gen, int steps) {
  std::normal_distribution<double> z;
  double x = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < steps; ++i) {
    x += z(gen);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {std::max(-lo, hi), lo, hi};
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_band_method("b2") == BandMethod::B2);
  CHECK(parse_band_method("LEP") == BandMethod::LEP);
  CHECK(to_string(BandMethod::AHW) == "AHW");
  CHECK_THROWS_AS(parse_band_method("B3"), InvalidInput);
}

TEST_CASE("symmetric critical value ranks") {
  std::vector<double> v199(199);
  for (int i = 0; i < 199; ++i) v199[i] = 199 - i;
  CHECK(critical_value_symmetric(v199, 0.05) == 190.0);
  std::vector<double> v200(200);
  for (int i = 0; i < 200; ++i) v200[i] = i + 1;
  CHECK(critical_value_symmetric(v200, 0.05) == 191.0);
  const std::vector<double> flat(57, 2.5);
  for (double theta : {0.01, 0.05, 0.5}) CHECK(critical_value_symmetric(flat, theta) == 2.5);
  CHECK_THROWS_AS(critical_value_symmetric(std::vector<double>{}, 0.05), InvalidInput);
}

TEST_CASE("equal-tailed critical values") {
  SUBCASE("degenerate replicates") {
    const std::vector<SupStatistics> zeros(200, SupStatistics{0.0, 0.0, 0.0});
    const auto c = critical_values_equal_tailed(zeros, 0.05);
    CHECK(c.t2 == 0.0);
    CHECK(c.t3 == 0.0);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(critical_values_equal_tailed(std::vector<SupStatistics>{}, 0.05),
                    InvalidInput);
  }
  SUBCASE("symmetric pairs") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<SupStatistics> stats;
    for (int i = 0; i < 20; ++i) {
      const double m = u(gen);
      stats.push_back({m, -m, m});
    }
    for (double theta : {0.05, 0.1, 0.3}) {
      const auto c = critical_values_equal_tailed(stats, theta);
      const auto ref = brute_force_equal_tailed(stats, theta);
      CHECK(c.t2 == ref.t2);
      CHECK(c.t3 == ref.t3);
      CHECK(c.t2 == -c.t3);
    }
  }
  SUBCASE("random-walk extremes against exhaustive search") {
    std::mt19937_64 gen(32);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<SupStatistics> stats;
      for (int i = 0; i < 1000; ++i) stats.push_back(walk_extremes(gen, 1 + rep));
      for (double theta : {0.05, 0.1}) {
        const auto c = critical_values_equal_tailed(stats, theta);
        const auto ref = brute_force_equal_tailed(stats, theta);
        CHECK(c.tail_rank == ref.tail_rank);
        CHECK(c.t2 == ref.t2);
        CHECK(c.t3 == ref.t3);
        CHECK(joint_coverage(stats, c.t2, c.t3) >= 1.0 - theta);
        // Distinct extremes: each tail leaves exactly k - 1 replicates outside.
        int below = 0;
        int above = 0;
        for (const auto& s : stats) {
          below += s.min_t < c.t2 ? 1 : 0;
          above += s.max_t > c.t3 ? 1 : 0;
        }
        CHECK(std::abs(below - above) <= 1);
      }
    }
  }
}

TEST_CASE("bootstrap bands") {
  const auto est = simulated_estimate(3, 60);
  BandSpec spec;
  spec.s = TimeInterval(0.2, 0.8);
  spec.theta = 0.05;

  spec.method = BandMethod::B1;
  const auto b1 = band_bootstrap(est, spec, 5);
  spec.method = BandMethod::B2;
  const auto b2 = band_bootstrap(est, spec, 5);
  REQUIRE(b1.critical.t1.has_value());
  REQUIRE(b2.critical.t2.has_value());
  REQUIRE(b2.critical.t3.has_value());
  CHECK(*b1.critical.t1 >= 0.0);

  bool asymmetric = false;
  for (double x = 0.2; x <= 0.8; x += 0.01) {
    const double a = est.a_hat(x);
    CHECK(b1.lower(x) <= a);
    CHECK(b1.upper(x) >= a);
    CHECK(b1.lower(x) >= 0.0);
    CHECK(b2.lower(x) <= b2.upper(x));
    CHECK(b2.lower(x) >= 0.0);
    if (b1.lower(x) > 0.0) CHECK(std::abs((b1.upper(x) - a) - (a - b1.lower(x))) < 1e-12);
    if (b2.lower(x) > 0.0 &&
        std::abs((b2.upper(x) - a) - (a - b2.lower(x))) > 1e-6) {
      asymmetric = true;
    }
  }
  CHECK(asymmetric);

  // Same seed, same band; explicit statistics give the same band too.
  const auto again = band_bootstrap(est, spec, 5);
  CHECK(again.upper(0.5) == b2.upper(0.5));
  const auto stats =
      bootstrap_sup_statistics(est, spec.s, spec.b_resamples, 5, spec.studentization);
  const auto from_stats = band_bootstrap_from_statistics(est, spec, stats);
  CHECK(from_stats.lower(0.7) == b2.lower(0.7));
}

TEST_CASE("degenerate replicates collapse the bootstrap band onto the estimate") {
  const auto est = simulated_estimate(4, 40);
  BandSpec spec;
  spec.method = BandMethod::B1;
  spec.s = TimeInterval(0.2, 0.8);
  const std::vector<SupStatistics> zeros(200, SupStatistics{0.0, 0.0, 0.0});
  const auto band = band_bootstrap_from_statistics(est, spec, zeros);
  CHECK(*band.critical.t1 == 0.0);
  for (double x : {0.2, 0.45, 0.8}) {
    CHECK(band.lower(x) == est.a_hat(x));
    CHECK(band.upper(x) == est.a_hat(x));
  }
}

TEST_CASE("bootstrap band without events before S.end is degenerate") {
  const RiskPath risk(StepFunction::constant(TimeInterval(0.0, 1.0), 10));
  const auto est = nelson_aalen(CountingPath({{0.9, 1}}), risk);
  BandSpec spec;
  spec.method = BandMethod::B2;
  spec.s = TimeInterval(0.2, 0.8);
  CHECK_THROWS_AS(band_bootstrap(est, spec, 1), DegenerateBand);
}

TEST_CASE("EP half-width is K times the standard error") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> k(0.5, 4.0);
  std::uniform_real_distribution<double> s2(1e-6, 5.0);
  std::uniform_int_distribution<int> n(1, 500);
  for (int i = 0; i < 10000; ++i) {
    const double kk = k(gen);
    const double v = s2(gen);
    const double w = asymptotic_half_width(Weight::ep, kk, v, n(gen));
    CHECK(std::abs(w - kk * std::sqrt(v)) <= 1e-12 * std::max(1.0, w));
  }

  const auto est = simulated_estimate(9, 50);
  BandSpec spec;
  spec.method = BandMethod::EP;
  spec.s = TimeInterval(0.2, 0.8);
  const auto band = band_asymptotic_with_quantile(est, spec, 2.7);
  for (double x = 0.2; x <= 0.8; x += 0.05) {
    const double w = 2.7 * std::sqrt(est.sigma_sq(x));
    CHECK(band.upper(x) - est.a_hat(x) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("HW half-width") {
  CHECK(asymptotic_half_width(Weight::hw, 1.3, 0.0, 25) == doctest::Approx(1.3 / 5.0));
  CHECK(asymptotic_half_width(Weight::hw, 1.3, 0.04, 25) == doctest::Approx(1.3 * 2.0 / 5.0));
  // Linear in K, so the band closes onto A-hat as K shrinks.
  CHECK(asymptotic_half_width(Weight::hw, 0.0, 0.3, 25) == 0.0);
  CHECK(asymptotic_half_width(Weight::hw, 0.5, 0.3, 25) <
        asymptotic_half_width(Weight::hw, 1.0, 0.3, 25));
}

TEST_CASE("asymptotic band preconditions") {
  const RiskPath risk(StepFunction::constant(TimeInterval(0.0, 1.0), 10));
  const auto est = nelson_aalen(CountingPath({{0.5, 1}}), risk);
  BandSpec spec;
  spec.method = BandMethod::EP;
  spec.s = TimeInterval(0.2, 0.8);
  CHECK_THROWS_AS(band_asymptotic_with_quantile(est, spec, 2.0), InvalidInput);
  spec.method = BandMethod::LHW;
  CHECK_THROWS_AS(band_transformed_with_quantile(est, spec, 1.0), InvalidInput);
  spec.method = BandMethod::AHW;
  CHECK_NOTHROW(band_transformed_with_quantile(est, spec, 1.0));
  spec.method = BandMethod::HW;
  const auto hw = band_asymptotic_with_quantile(est, spec, 1.0);
  CHECK(hw.lower(0.3) == 0.0);
  CHECK(hw.upper(0.3) == doctest::Approx(1.0 / std::sqrt(10.0)));
}

TEST_CASE("transformed edges") {
  for (double a : {0.1, 0.7, 2.0}) {
    const auto [ll, lu] = log_transformed_edges(a, 0.0);
    CHECK(ll == a);
    CHECK(lu == a);
    const auto [al, au] = arcsine_transformed_edges(a, 0.0);
    CHECK(al == doctest::Approx(a).epsilon(1e-12));
    CHECK(au == doctest::Approx(a).epsilon(1e-12));
    for (double w : {0.05, 0.5, 5.0}) {
      const auto [lo, hi] = log_transformed_edges(a, w);
      CHECK(lo > 0.0);
      CHECK(lo < a);
      CHECK(hi > a);
      CHECK(lo * hi == doctest::Approx(a * a));
      const auto [slo, shi] = arcsine_transformed_edges(a, w);
      CHECK(slo >= 0.0);
      CHECK(slo <= a);
      CHECK(shi >= a);
    }
  }
  const auto [zl, zu] = arcsine_transformed_edges(0.0, 0.3);
  CHECK(zl == 0.0);
  CHECK(zu >= 0.0);
}

TEST_CASE("all methods produce ordered nonnegative edges") {
  const auto est = simulated_estimate(10, 50, Intensity::alpha2);
  for (BandMethod m : {BandMethod::B1, BandMethod::B2, BandMethod::HW, BandMethod::EP,
                       BandMethod::AHW, BandMethod::AEP, BandMethod::LHW, BandMethod::LEP}) {
    BandSpec spec;
    spec.method = m;
    spec.s = TimeInterval(0.2, 0.8);
    spec.bridge_paths = 2000;
    spec.bridge_grid = 200;
    const auto band = build_band(est, spec, 17);
    for (double x = 0.2; x <= 0.8; x += 0.02) {
      CHECK(band.lower(x) >= 0.0);
      CHECK(band.lower(x) <= band.upper(x));
    }
    const auto again = build_band(est, spec, 17);
    CHECK(again.upper(0.6) == band.upper(0.6));
  }
}
