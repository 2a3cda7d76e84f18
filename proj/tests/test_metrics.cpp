#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace skrank;
using testutil::clinic_log;
using testutil::thrown_code;

TEST_CASE("cumulative probability on the clinic ranking") {
  auto result = top_k(clinic_log(), 4);
  CHECK(cumulative_probability(result, 1) == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(cumulative_probability(result, 2) == doctest::Approx(0.70).epsilon(1e-12));
  CHECK(cumulative_probability(result, 4) == doctest::Approx(1.0).epsilon(1e-12));

  auto too_low = [&] { (void)cumulative_probability(result, 0); };
  CHECK(thrown_code(too_low) == ErrorCode::RankOutOfRange);
  auto too_high = [&] { (void)cumulative_probability(result, 5); };
  CHECK(thrown_code(too_high) == ErrorCode::RankOutOfRange);
}

TEST_CASE("average difference on the clinic ranking") {
  auto result = top_k(clinic_log(), 4);
  // distances to rank 1 are (1, 1, 2); the divisor is K itself
  CHECK(avg_difference(result) == doctest::Approx(1.0).epsilon(1e-15));
  // strict mean over the K-1 nonzero terms
  CHECK(avg_difference(result, true) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  auto single = top_k(clinic_log(), 1);
  CHECK(avg_difference(single) == 0.0);
}

TEST_CASE("average difference closed form for one uncertain event") {
  // one m-way event: every rank beyond the first differs in exactly one
  // choice, so d_avg = (m - 1) / m
  for (std::uint32_t m : {2u, 3u, 5u}) {
    std::vector<RawAlternative> alts;
    for (std::uint32_t i = 0; i < m; ++i)
      alts.push_back({std::string(1, static_cast<char>('A' + i)),
                      (i == 0) ? 1.0 - 0.1 * (m - 1) : 0.1});
    auto log = validate_log({RawEvent{"e", "c", std::int64_t{1}, std::move(alts)}});
    auto result = top_k(log, m);
    CHECK(avg_difference(result) ==
          doctest::Approx((m - 1.0) / m).epsilon(1e-15));
  }
}

TEST_CASE("summary of the clinic ranking") {
  auto m = summarize(top_k(clinic_log(), 4));
  CHECK(m.p_l1 == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(m.f_k == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.d_avg == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.k_actual == 4);
  CHECK(!m.exhausted);
  CHECK(m.runtime_s >= 0.0);
  CHECK(m.p_l1_log10 == doctest::Approx(std::log10(0.42)).epsilon(1e-12));
}

TEST_CASE("summary of a single-realization log") {
  auto log = validate_log({RawEvent{"e", "c", std::int64_t{1}, {{"A", 1.0}}}});
  auto m = summarize(top_k(log, 5));
  CHECK(m.p_l1 == 1.0);
  CHECK(m.f_k == 1.0);
  CHECK(m.d_avg == 0.0);
  CHECK(m.k_actual == 1);
  CHECK(m.exhausted);
}

TEST_CASE("cumulative probability is monotone and bounded") {
  std::mt19937_64 gen(97);
  for (int round = 0; round < 40; ++round) {
    auto log = testutil::random_battery_log(gen, 20'000);
    auto count = realization_count_u64(log).value();
    std::uint64_t k = 1 + testutil::below(gen, count);
    auto result = top_k(log, k);

    double prev = 0.0;
    for (std::size_t i = 1; i <= result.entries.size(); ++i) {
      double f = cumulative_probability(result, i);
      CHECK(f >= prev);
      CHECK(f <= 1.0 + 1e-9);
      prev = f;
    }
    auto m = summarize(result);
    CHECK(m.f_k >= m.p_l1);
    if (result.entries.size() == count)
      CHECK(std::abs(m.f_k - 1.0) <= 1e-9);

    // d_avg never exceeds the number of uncertain events
    std::size_t uncertain = 0;
    for (const auto& ev : log.events())
      if (!ev.certain()) ++uncertain;
    CHECK(m.d_avg <= static_cast<double>(uncertain) + 1e-12);
  }
}

TEST_CASE("f_k equals p_l1 exactly when only one rank exists") {
  auto one = summarize(top_k(clinic_log(), 1));
  CHECK(one.f_k == one.p_l1);
  auto four = summarize(top_k(clinic_log(), 4));
  CHECK(four.f_k > four.p_l1);
}

TEST_CASE("measures agree between engine and oracle rankings") {
  std::mt19937_64 gen(101);
  for (int round = 0; round < 25; ++round) {
    auto log = testutil::random_battery_log(gen, 10'000);
    auto count = realization_count_u64(log).value();
    std::uint64_t k = 1 + testutil::below(gen, count);
    auto engine = summarize(top_k(log, k));
    auto oracle = summarize(oracle_top_k(log, k));
    CHECK(engine.p_l1 == oracle.p_l1);
    CHECK(std::abs(engine.f_k - oracle.f_k) <= 1e-12);
    CHECK(engine.d_avg == oracle.d_avg);
    CHECK(engine.k_actual == oracle.k_actual);
  }
}

TEST_CASE("streaming accumulator matches the batch summary") {
  auto log = clinic_log();
  auto result = top_k(log, 4);
  MeasureAccumulator acc;
  for (const auto& entry : result.entries) acc.add(entry);
  auto streamed = acc.finish(result.stats.wall_seconds, result.exhausted);
  auto batch = summarize(result);
  CHECK(streamed.p_l1 == batch.p_l1);
  CHECK(streamed.f_k == batch.f_k);
  CHECK(streamed.d_avg == batch.d_avg);
  CHECK(streamed.k_actual == batch.k_actual);

  auto empty = [] { MeasureAccumulator a; (void)a.finish(0.0, false); };
  CHECK(thrown_code(empty) == ErrorCode::InvalidParams);
}
