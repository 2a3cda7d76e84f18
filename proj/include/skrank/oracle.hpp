#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

#include "skrank/errors.hpp"
#include "skrank/model.hpp"
#include "skrank/ranking.hpp"

namespace skrank {

inline constexpr std::uint64_t kDefaultEnumerationCap = 20'000'000;

namespace detail {

inline void check_cap(const StochasticLog& log, std::uint64_t cap) {
  BigUint count = realization_count(log);
  if (count > cap)
    raise(ErrorCode::CapExceeded,
          "log has " + count.to_string() + " realizations, cap is " +
              std::to_string(cap));
}

/// Odometer over the choice cross-product, least-significant position
/// last, so assignments come out in lexicographic choices order.
template <typename Visit>
void for_each_choice_array(const StochasticLog& log, Visit&& visit) {
  std::vector<std::uint32_t> choices(log.size(), 0);
  for (;;) {
    visit(choices);
    std::size_t pos = log.size();
    while (pos > 0) {
      --pos;
      if (++choices[pos] < log.event(pos).alternatives.size()) break;
      choices[pos] = 0;
      if (pos == 0) return;
    }
    if (log.size() == 0) return;
  }
}

inline TopKResult entries_from_sorted(std::vector<Assignment> sorted,
                                      bool exhausted, double wall_seconds) {
  TopKResult result;
  result.exhausted = exhausted;
  result.stats.wall_seconds = wall_seconds;
  result.entries.reserve(sorted.size());
  Assignment top1 = sorted.empty() ? Assignment{} : sorted.front();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    RankingEntry entry;
    entry.rank = i + 1;
    entry.probability = sorted[i].probability();
    cumulative = (i == 0) ? sorted[i].log_prob
                          : log_add_exp(cumulative, sorted[i].log_prob);
    entry.cumulative_log_prob = cumulative;
    entry.cumulative_prob = std::exp(cumulative);
    entry.dist_to_top1 = (i == 0) ? 0 : assignment_distance(sorted[i], top1);
    entry.assignment = std::move(sorted[i]);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace detail

/// Every realization of the log, in lexicographic choices order, each
/// with its log-probability. Exponential in the log size by definition;
/// the cap guards against accidental blowups.
inline std::vector<Assignment> enumerate_all(
    const StochasticLog& log, std::uint64_t cap = kDefaultEnumerationCap) {
  detail::check_cap(log, cap);
  std::vector<Assignment> out;
  auto count = realization_count_u64(log);
  if (count) out.reserve(static_cast<std::size_t>(*count));
  detail::for_each_choice_array(log, [&](const std::vector<std::uint32_t>& choices) {
    out.push_back(Assignment{choices, log_prob_of(log, choices)});
  });
  return out;
}

/// Reference top-K: enumerate everything, sort under the global tie
/// order, truncate. Slow on purpose; its only job is to be obviously
/// correct so the partition engine can be checked against it.
inline TopKResult oracle_top_k(const StochasticLog& log, std::uint64_t k,
                               std::uint64_t cap = kDefaultEnumerationCap) {
  if (k < 1) raise(ErrorCode::InvalidK, "K must be >= 1");
  auto started = std::chrono::steady_clock::now();
  std::vector<Assignment> all = enumerate_all(log, cap);
  std::sort(all.begin(), all.end(), ranks_before);
  bool exhausted = all.size() < k;
  if (all.size() > k) all.resize(static_cast<std::size_t>(k));
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return detail::entries_from_sorted(std::move(all), exhausted, wall);
}

/// Same contract as oracle_top_k but with O(K) memory: keeps a size-K
/// worst-at-top heap while enumerating. The two variants must agree; the
/// tests hold them to that.
inline TopKResult oracle_top_k_bounded(const StochasticLog& log, std::uint64_t k,
                                       std::uint64_t cap = kDefaultEnumerationCap) {
  if (k < 1) raise(ErrorCode::InvalidK, "K must be >= 1");
  detail::check_cap(log, cap);
  auto started = std::chrono::steady_clock::now();

  // Max-heap under "ranks after": the top is the worst kept assignment.
  auto worse = [](const Assignment& a, const Assignment& b) {
    return ranks_before(a, b);
  };
  std::vector<Assignment> heap;
  heap.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(k, 1 << 20)) + 1);
  std::uint64_t total = 0;
  detail::for_each_choice_array(log, [&](const std::vector<std::uint32_t>& choices) {
    ++total;
    Assignment cand{choices, log_prob_of(log, choices)};
    if (heap.size() < k) {
      heap.push_back(std::move(cand));
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (ranks_before(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = std::move(cand);
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  });
  std::sort(heap.begin(), heap.end(), ranks_before);
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return detail::entries_from_sorted(std::move(heap), total < k, wall);
}

}  // namespace skrank
