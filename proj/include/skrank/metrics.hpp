#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "skrank/errors.hpp"
#include "skrank/model.hpp"
#include "skrank/ranking.hpp"

namespace skrank {

/// Summary measures of one ranking run.
struct RankingMeasures {
  double p_l1 = 0.0;        // probability of the rank-1 realization
  double p_l1_log10 = 0.0;
  double f_k = 0.0;         // cumulative probability of all produced ranks
  double f_k_log10 = 0.0;
  double d_avg = 0.0;       // average distance to rank 1 (see avg_difference)
  double runtime_s = 0.0;   // ranking wall time, no I/O
  std::uint64_t k_actual = 0;
  bool exhausted = false;
};

/// Streaming accumulator: feed entries in rank order, then finish().
/// Lets the CLI compute measures while writing a ranking without
/// buffering it.
class MeasureAccumulator {
 public:
  void add(const RankingEntry& entry) {
    ++k_actual_;
    if (k_actual_ == 1) {
      top1_log_prob_ = entry.log_prob();
    } else {
      distance_sum_ += entry.dist_to_top1;
    }
    cumulative_log_ = entry.cumulative_log_prob;
  }

  RankingMeasures finish(double runtime_s, bool exhausted,
                         bool divide_by_k_minus_1 = false) const {
    if (k_actual_ == 0)
      raise(ErrorCode::InvalidParams, "cannot summarize an empty ranking");
    RankingMeasures m;
    m.p_l1 = std::exp(top1_log_prob_);
    m.p_l1_log10 = top1_log_prob_ / std::numbers::ln10;
    m.f_k = std::exp(cumulative_log_);
    m.f_k_log10 = cumulative_log_ / std::numbers::ln10;
    double divisor = divide_by_k_minus_1
                         ? static_cast<double>(k_actual_ > 1 ? k_actual_ - 1 : 1)
                         : static_cast<double>(k_actual_);
    m.d_avg = static_cast<double>(distance_sum_) / divisor;
    m.runtime_s = runtime_s;
    m.k_actual = k_actual_;
    m.exhausted = exhausted;
    return m;
  }

 private:
  std::uint64_t k_actual_ = 0;
  std::uint64_t distance_sum_ = 0;
  double top1_log_prob_ = 0.0;
  double cumulative_log_ = 0.0;
};

/// Cumulative probability of the first k ranks, in the linear domain.
/// Backed by the streaming log-sum-exp the ranking carries, so it stays
/// meaningful when individual probabilities underflow.
inline double cumulative_probability(const TopKResult& result, std::size_t k) {
  if (k < 1 || k > result.entries.size())
    raise(ErrorCode::RankOutOfRange,
          "rank " + std::to_string(k) + " outside 1.." +
              std::to_string(result.entries.size()));
  return result.entries[k - 1].cumulative_prob;
}

/// Average number of choices by which ranks 2..k differ from rank 1,
/// divided by k (not k-1; the distance of rank 1 to itself counts as a
/// zero term). Set divide_by_k_minus_1 for the strict mean over the
/// k-1 nonzero terms instead.
inline double avg_difference(const TopKResult& result,
                             bool divide_by_k_minus_1 = false) {
  std::uint64_t sum = 0;
  for (std::size_t i = 1; i < result.entries.size(); ++i)
    sum += result.entries[i].dist_to_top1;
  std::size_t k = result.entries.size();
  if (k == 0) return 0.0;
  double divisor = divide_by_k_minus_1 ? static_cast<double>(k > 1 ? k - 1 : 1)
                                       : static_cast<double>(k);
  return static_cast<double>(sum) / divisor;
}

/// Bundles the per-run measures of a collected ranking.
inline RankingMeasures summarize(const TopKResult& result,
                                 bool divide_by_k_minus_1 = false) {
  MeasureAccumulator acc;
  for (const auto& entry : result.entries) acc.add(entry);
  return acc.finish(result.stats.wall_seconds, result.exhausted, divide_by_k_minus_1);
}

}  // namespace skrank
