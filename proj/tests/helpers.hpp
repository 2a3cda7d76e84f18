#pragma once

// Shared fixtures and independent reference implementations for the
// test suites. Everything here deliberately avoids the code paths it is
// used to check: restricted enumeration filters the full cross-product,
// and the second-best reference sorts that enumeration.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <skrank/skrank.hpp>

namespace testutil {

/// Three-event clinic log: a certain history event, an uncertain
/// diagnosis (L 0.7 / S 0.3) and an uncertain prescription
/// (I 0.6 / O 0.4). Its four realizations have probabilities
/// 0.42, 0.28, 0.18 and 0.12.
inline std::vector<skrank::RawEvent> clinic_raw() {
  using skrank::RawEvent;
  std::vector<RawEvent> raw;
  raw.push_back(RawEvent{"e1", "c1", std::int64_t{1}, {{"H", 1.0}}});
  raw.push_back(RawEvent{"e2", "c1", std::int64_t{2}, {{"L", 0.7}, {"S", 0.3}}});
  raw.push_back(RawEvent{"e3", "c1", std::int64_t{3}, {{"I", 0.6}, {"O", 0.4}}});
  return raw;
}

inline skrank::StochasticLog clinic_log() { return skrank::validate_log(clinic_raw()); }

/// Labels of a realization of the clinic log, e.g. "HLI".
inline std::string clinic_labels(const skrank::StochasticLog& log,
                                 const skrank::Assignment& a) {
  std::string s;
  for (std::size_t i = 0; i < a.choices.size(); ++i)
    s += log.event(i).alternatives[a.choices[i]].label;
  return s;
}

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
  return skrank::rng::uniform_below(gen, n);
}

/// Random log matching the verification battery's parameter ranges:
/// n_events in [1,12], per-log n_act in [1,4], r in {0, 0.5, 1}.
/// Probabilities are continuous, so ties never occur by accident.
/// Redraws until the realization count is at most `max_count`.
inline skrank::StochasticLog random_battery_log(std::mt19937_64& gen,
                                                std::uint64_t max_count = 300'000) {
  for (;;) {
    std::uint64_t n = 1 + below(gen, 12);
    double r = std::vector<double>{0.0, 0.5, 1.0}[below(gen, 3)];
    std::uint32_t n_act = static_cast<std::uint32_t>(1 + below(gen, 4));
    auto n_uncertain = static_cast<std::uint64_t>(r * static_cast<double>(n));

    std::vector<std::uint64_t> positions(n);
    for (std::uint64_t i = 0; i < n; ++i) positions[i] = i;
    for (std::uint64_t i = 0; i < n_uncertain; ++i) {
      std::uint64_t j = i + below(gen, n - i);
      std::swap(positions[i], positions[j]);
    }
    std::vector<bool> uncertain(n, false);
    for (std::uint64_t i = 0; i < n_uncertain; ++i) uncertain[positions[i]] = true;

    std::vector<skrank::RawEvent> raw;
    for (std::uint64_t i = 0; i < n; ++i) {
      skrank::RawEvent ev;
      ev.event_id = "e" + std::to_string(i);
      ev.case_id = "c0";
      ev.timestamp = static_cast<std::int64_t>(i);
      std::uint32_t alts = (uncertain[i] && n_act >= 2) ? n_act : 1;
      std::vector<double> ps(alts);
      double sum = 0.0;
      for (auto& p : ps) {
        p = 0.05 + 0.95 * uniform01(gen);
        sum += p;
      }
      for (std::uint32_t a = 0; a < alts; ++a)
        ev.alternatives.push_back(
            {std::string(1, static_cast<char>('A' + a)), ps[a] / sum});
      raw.push_back(std::move(ev));
    }
    auto log = skrank::validate_log(std::move(raw));
    if (skrank::realization_count(log) <= max_count) return log;
  }
}

/// Random log with a per-event alternative count in [1, max_alts];
/// broader event shapes than the battery generator.
inline skrank::StochasticLog random_varied_log(std::mt19937_64& gen,
                                               std::uint64_t max_events = 8,
                                               std::uint32_t max_alts = 4) {
  std::uint64_t n = 1 + below(gen, max_events);
  std::vector<skrank::RawEvent> raw;
  for (std::uint64_t i = 0; i < n; ++i) {
    skrank::RawEvent ev;
    ev.event_id = "e" + std::to_string(i);
    ev.case_id = "c0";
    ev.timestamp = static_cast<std::int64_t>(i);
    std::uint32_t alts = static_cast<std::uint32_t>(1 + below(gen, max_alts));
    std::vector<double> ps(alts);
    double sum = 0.0;
    for (auto& p : ps) {
      p = 0.05 + 0.95 * uniform01(gen);
      sum += p;
    }
    for (std::uint32_t a = 0; a < alts; ++a)
      ev.alternatives.push_back(
          {std::string(1, static_cast<char>('A' + a)), ps[a] / sum});
    raw.push_back(std::move(ev));
  }
  return skrank::validate_log(std::move(raw));
}

/// All assignments of the log that satisfy the restriction. Filters the
/// full enumeration; only usable for small logs, which is the point.
inline std::vector<skrank::Assignment> enumerate_restricted(
    const skrank::StochasticLog& log, const skrank::Restriction& restriction) {
  std::vector<skrank::Assignment> out;
  for (auto& a : skrank::enumerate_all(log)) {
    bool ok = true;
    for (std::size_t i = 0; i < a.choices.size() && ok; ++i)
      ok = restriction.allows(i, a.choices[i]);
    if (ok) out.push_back(std::move(a));
  }
  return out;
}

/// First-ranking element of a set under the global tie order.
inline const skrank::Assignment& best_of(const std::vector<skrank::Assignment>& set) {
  return *std::min_element(set.begin(), set.end(), skrank::ranks_before);
}

/// Reference second-best: sort the restricted set under the global tie
/// order and take the element after the best.
inline std::optional<skrank::Assignment> reference_second_best(
    const skrank::StochasticLog& log, const skrank::Restriction& restriction) {
  auto feasible = enumerate_restricted(log, restriction);
  std::sort(feasible.begin(), feasible.end(), skrank::ranks_before);
  if (feasible.size() < 2) return std::nullopt;
  return feasible[1];
}

/// Runs fn and returns the ErrorCode it throws, or nullopt if it does
/// not throw a skrank::Error.
template <typename Fn>
std::optional<skrank::ErrorCode> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const skrank::Error& e) {
    return e.code();
  } catch (...) {
  }
  return std::nullopt;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace testutil
