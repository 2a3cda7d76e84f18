#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "skrank/errors.hpp"
#include "skrank/model.hpp"

namespace skrank {

/// Constraints defining a restricted solution set: some event positions
/// pinned to a fixed choice, some realization indices excluded per
/// position. Both stored as flat sorted vectors; the sets stay tiny (one
/// entry per split along a partition's ancestry), so binary search beats
/// hash maps here.
class Restriction {
 public:
  bool is_pinned(std::size_t pos) const { return pinned_index(pos).has_value(); }

  std::optional<std::uint32_t> pinned_index(std::size_t pos) const {
    auto it = std::lower_bound(pins_.begin(), pins_.end(),
                               std::pair<std::uint32_t, std::uint32_t>{
                                   static_cast<std::uint32_t>(pos), 0});
    if (it != pins_.end() && it->first == pos) return it->second;
    return std::nullopt;
  }

  bool is_excluded(std::size_t pos, std::uint32_t index) const {
    auto key = std::pair<std::uint32_t, std::uint32_t>{
        static_cast<std::uint32_t>(pos), index};
    return std::binary_search(exclusions_.begin(), exclusions_.end(), key);
  }

  /// True when the restriction does not rule the choice out.
  bool allows(std::size_t pos, std::uint32_t index) const {
    if (auto pin = pinned_index(pos)) return *pin == index;
    return !is_excluded(pos, index);
  }

  void pin(std::size_t pos, std::uint32_t index) {
    if (is_excluded(pos, index))
      raise(ErrorCode::RestrictionConflict,
            "cannot pin an excluded choice at position " + std::to_string(pos));
    auto key = std::pair<std::uint32_t, std::uint32_t>{
        static_cast<std::uint32_t>(pos), index};
    auto it = std::lower_bound(pins_.begin(), pins_.end(),
                               std::pair<std::uint32_t, std::uint32_t>{key.first, 0});
    if (it != pins_.end() && it->first == key.first) {
      if (it->second != index)
        raise(ErrorCode::RestrictionConflict,
              "position " + std::to_string(pos) + " already pinned differently");
      return;
    }
    pins_.insert(it, key);
  }

  void exclude(std::size_t pos, std::uint32_t index) {
    if (auto pin = pinned_index(pos); pin && *pin == index)
      raise(ErrorCode::RestrictionConflict,
            "cannot exclude the pinned choice at position " + std::to_string(pos));
    auto key = std::pair<std::uint32_t, std::uint32_t>{
        static_cast<std::uint32_t>(pos), index};
    auto it = std::lower_bound(exclusions_.begin(), exclusions_.end(), key);
    if (it != exclusions_.end() && *it == key) return;
    exclusions_.insert(it, key);
  }

  std::size_t pin_count() const { return pins_.size(); }
  std::size_t exclusion_count() const { return exclusions_.size(); }

  /// Sorted (position, index) pairs, mostly for diagnostics and tests.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pins() const { return pins_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& exclusions() const {
    return exclusions_;
  }

 private:
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pins_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> exclusions_;
};

/// Globally best realization: every event realized as its most probable
/// alternative, which after canonicalization is index 0 everywhere. Also
/// the smallest choice array under the global tie order, so the result
/// is the unique rank-1 entry.
inline Assignment best_realization(const StochasticLog& log) {
  std::vector<std::uint32_t> choices(log.size(), 0);
  return make_assignment(log, std::move(choices));
}

/// Next-best realization index allowed at `position`, strictly after
/// `current_index` in the event's canonical order, skipping exclusions.
/// nullopt when the event has nothing left to offer.
inline std::optional<std::uint32_t> next_allowed(const StochasticLog& log,
                                                 std::size_t position,
                                                 std::uint32_t current_index,
                                                 const Restriction& restriction) {
  if (position >= log.size())
    raise(ErrorCode::IndexOutOfRange, "position " + std::to_string(position));
  const auto& alts = log.event(position).alternatives;
  if (current_index >= alts.size())
    raise(ErrorCode::IndexOutOfRange,
          "index " + std::to_string(current_index) + " at position " +
              std::to_string(position));
  if (restriction.is_pinned(position))
    raise(ErrorCode::PositionPinned,
          "position " + std::to_string(position) + " is pinned");
  for (std::uint32_t idx = current_index + 1; idx < alts.size(); ++idx)
    if (!restriction.is_excluded(position, idx)) return idx;
  return std::nullopt;
}

namespace detail {

/// One substitution opportunity: replace the incumbent choice at
/// `position` with `next_index`. `delta` is the log-probability gain
/// (log_p of the substitute minus log_p of the incumbent, always <= 0).
/// Gains live in the log domain, so there is no division and no
/// underflow.
struct DeltaCandidate {
  std::uint32_t position = 0;
  std::uint32_t next_index = 0;
  double delta = 0.0;
};

/// Substitution opportunity at one position, honoring exclusions.
inline std::optional<DeltaCandidate> delta_at(const StochasticLog& log,
                                              const Restriction& restriction,
                                              std::size_t position,
                                              std::uint32_t current) {
  const auto& alts = log.event(position).alternatives;
  std::uint32_t next = current + 1;
  while (next < alts.size() && restriction.is_excluded(position, next)) ++next;
  if (next >= alts.size()) return std::nullopt;
  return DeltaCandidate{static_cast<std::uint32_t>(position), next,
                        alts[next].log_p - alts[current].log_p};
}

/// Sorted cache of a partition's best substitution candidates, at most
/// one per position. Ordered by gain descending; ties go to the higher
/// position, because substituting later in the array yields the
/// lexicographically smaller choice array, which is what the global tie
/// order promotes first.
///
/// Invariant: the list holds exactly the top `count` candidates of the
/// partition; `exhaustive` means every existing candidate is listed. A
/// candidate ranking at or below the tail of a full list may be dropped
/// without violating the invariant, so splits can patch the list in
/// O(1) and a full rescan is only needed when an inherited list runs
/// dry, roughly once every kCapacity splits along a lineage.
struct CandidateList {
  static constexpr std::size_t kCapacity = 6;

  std::array<DeltaCandidate, kCapacity> items;
  std::uint8_t count = 0;
  bool exhaustive = false;

  bool empty() const { return count == 0; }
  const DeltaCandidate& head() const { return items[0]; }

  static bool ranks_before(const DeltaCandidate& a, const DeltaCandidate& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return a.position > b.position;
  }

  /// Insert keeping sorted order; drops the tail on overflow. When the
  /// list is not exhaustive, candidates at or below the tail are
  /// discarded rather than appended: unlisted candidates are only known
  /// to rank below the tail, so appending would claim an order we never
  /// established. The discarded candidate resurfaces through the rescan
  /// that an empty non-exhaustive list triggers.
  void insert(const DeltaCandidate& cand) {
    if (!exhaustive) {
      if (count == 0) return;
      if (!ranks_before(cand, items[count - 1])) return;
    }
    if (count == kCapacity) {
      if (!ranks_before(cand, items[count - 1])) {
        exhaustive = false;  // a real candidate stays unlisted
        return;
      }
      --count;
      exhaustive = false;
    }
    std::size_t at = count;
    while (at > 0 && ranks_before(cand, items[at - 1])) {
      items[at] = items[at - 1];
      --at;
    }
    items[at] = cand;
    ++count;
  }

  /// Copy without the head entry.
  CandidateList without_head() const {
    CandidateList out;
    out.exhaustive = exhaustive;
    out.count = count > 0 ? static_cast<std::uint8_t>(count - 1) : 0;
    for (std::size_t i = 0; i < out.count; ++i) out.items[i] = items[i + 1];
    return out;
  }
};

/// Full scan over all non-pinned positions, collecting the top
/// candidates. Touches each event once.
inline CandidateList scan_candidates(const StochasticLog& log,
                                     const Restriction& restriction,
                                     const std::vector<std::uint32_t>& choices) {
  const auto& pins = restriction.pins();
  auto pin_it = pins.begin();
  CandidateList out;
  out.exhaustive = true;
  for (std::size_t i = 0; i < log.size(); ++i) {
    while (pin_it != pins.end() && pin_it->first < i) ++pin_it;
    if (pin_it != pins.end() && pin_it->first == i) continue;

    const auto& alts = log.event(i).alternatives;
    std::uint32_t cur = choices[i];
    std::uint32_t next = cur + 1;
    while (next < alts.size() && restriction.is_excluded(i, next)) ++next;
    if (next >= alts.size()) continue;

    out.insert(DeltaCandidate{static_cast<std::uint32_t>(i), next,
                              alts[next].log_p - alts[cur].log_p});
  }
  return out;
}

/// A delta candidate scored against the incumbent best: log_prob is the
/// exact log-probability of the substituted realization.
struct SecondCandidate {
  std::uint32_t position = 0;
  std::uint32_t next_index = 0;
  double log_prob = 0.0;
};

inline SecondCandidate score_candidate(const StochasticLog& log,
                                       const Assignment& best,
                                       const LogTermSum& terms,
                                       const DeltaCandidate& cand) {
  const auto& alts = log.event(cand.position).alternatives;
  LogTermSum substituted = terms;
  substituted.remove_term(alts[best.choices[cand.position]].log_p);
  substituted.add_term(alts[cand.next_index].log_p);
  return SecondCandidate{cand.position, cand.next_index, substituted.log_prob()};
}

/// Full second-best search: one scan, then score the winner.
inline std::optional<SecondCandidate> scan_second(const StochasticLog& log,
                                                  const Restriction& restriction,
                                                  const Assignment& best,
                                                  const LogTermSum& terms) {
  CandidateList list = scan_candidates(log, restriction, best.choices);
  if (list.empty()) return std::nullopt;
  return score_candidate(log, best, terms, list.head());
}

}  // namespace detail

struct SecondBest {
  Assignment assignment;
  std::size_t position = 0;  // the single event position that changed
};

/// Second-best realization within the restricted set, given its best.
/// The result differs from `best` in exactly one position (the one with
/// the maximal substitution probability ratio); nullopt when the
/// restricted set is a singleton.
inline std::optional<SecondBest> second_best(const StochasticLog& log,
                                             const Restriction& restriction,
                                             const Assignment& best) {
  detail::LogTermSum terms = detail::gather_log_terms(log, best.choices);
  auto cand = detail::scan_second(log, restriction, best, terms);
  if (!cand) return std::nullopt;
  std::vector<std::uint32_t> choices = best.choices;
  choices[cand->position] = cand->next_index;
  return SecondBest{Assignment{std::move(choices), cand->log_prob}, cand->position};
}

/// One node of the solution-space partition tree: a restricted set, its
/// best realization (already emitted by the time the partition is on the
/// frontier), and the cached second-best candidate that the frontier is
/// keyed on. `best` is shared with the parent where the split leaves it
/// unchanged; `term_sum` is the exact-sum state of the best's
/// log-probability, from which single substitutions are rescored in
/// O(1); `candidates` caches the leading substitution opportunities.
struct Partition {
  Restriction restriction;
  std::shared_ptr<const Assignment> best;
  detail::LogTermSum term_sum;
  detail::CandidateList candidates;
  std::optional<detail::SecondCandidate> second;

  /// Materializes the cached second-best. Throws NoSecondBest when the
  /// partition is a singleton.
  Assignment second_assignment() const {
    if (!second) raise(ErrorCode::NoSecondBest, "partition has no second-best");
    std::vector<std::uint32_t> choices = best->choices;
    choices[second->position] = second->next_index;
    return Assignment{std::move(choices), second->log_prob};
  }
};

namespace detail {

inline Partition make_partition(const StochasticLog& log, Restriction restriction,
                                std::shared_ptr<const Assignment> best,
                                const LogTermSum& terms) {
  Partition p{std::move(restriction), std::move(best), terms, {}, std::nullopt};
  p.candidates = scan_candidates(log, p.restriction, p.best->choices);
  if (!p.candidates.empty())
    p.second = score_candidate(log, *p.best, p.term_sum, p.candidates.head());
  return p;
}

/// The split rule shared by split_partition() and the enumerator. Both
/// children inherit the parent's candidate list with the consumed head
/// removed (pinning the split position removes exactly that position's
/// candidate); the cut child additionally picks up the follow-up
/// candidate at the split position. A rescan happens only when an
/// inherited list runs dry. `finish` lets the enumerator count calls
/// and run integrity checks on each child; `materialized_second`, when
/// provided, avoids re-materializing the parent's second-best.
template <typename FinishFn>
std::pair<Partition, Partition> split_with(
    const StochasticLog& log, const Partition& parent, FinishFn&& finish,
    std::shared_ptr<const Assignment> materialized_second = nullptr) {
  if (!parent.second)
    raise(ErrorCode::NoSecondBest, "cannot split a singleton partition");

  std::size_t pos = parent.second->position;
  std::uint32_t kept = parent.best->choices[pos];
  const auto& alts = log.event(pos).alternatives;

  Restriction pin_side = parent.restriction;
  pin_side.pin(pos, kept);
  Partition child_pin{std::move(pin_side), parent.best, parent.term_sum,
                      parent.candidates.without_head(), std::nullopt};
  if (child_pin.candidates.empty() && !child_pin.candidates.exhaustive)
    child_pin.candidates =
        scan_candidates(log, child_pin.restriction, child_pin.best->choices);
  if (!child_pin.candidates.empty())
    child_pin.second = score_candidate(log, *child_pin.best, child_pin.term_sum,
                                       child_pin.candidates.head());

  Restriction cut_side = parent.restriction;
  cut_side.exclude(pos, kept);
  if (!materialized_second)
    materialized_second =
        std::make_shared<const Assignment>(parent.second_assignment());
  LogTermSum cut_terms = parent.term_sum;
  cut_terms.remove_term(alts[kept].log_p);
  cut_terms.add_term(alts[parent.second->next_index].log_p);
  Partition child_cut{std::move(cut_side), std::move(materialized_second),
                      cut_terms, parent.candidates.without_head(), std::nullopt};
  if (auto fresh = detail::delta_at(log, child_cut.restriction, pos,
                                    parent.second->next_index))
    child_cut.candidates.insert(*fresh);
  if (child_cut.candidates.empty() && !child_cut.candidates.exhaustive)
    child_cut.candidates =
        scan_candidates(log, child_cut.restriction, child_cut.best->choices);
  if (!child_cut.candidates.empty())
    child_cut.second = score_candidate(log, *child_cut.best, child_cut.term_sum,
                                       child_cut.candidates.head());

  return {finish(std::move(child_pin)), finish(std::move(child_cut))};
}

}  // namespace detail

/// Root partition: the unrestricted solution set with the global best.
inline Partition make_root_partition(const StochasticLog& log) {
  auto best = std::make_shared<const Assignment>(best_realization(log));
  detail::LogTermSum terms = detail::gather_log_terms(log, best->choices);
  return detail::make_partition(log, Restriction{}, std::move(best), terms);
}

/// Splits a partition around its (best, second) pair. The first child
/// pins the differing position to the parent best's choice; the second
/// child excludes that choice there. The children partition the parent's
/// solution set: they are disjoint and their union is the parent set.
/// Child bests are inherited (best -> first child, second -> second
/// child), so each child arrives with its best already emitted; their
/// own second candidates are recomputed.
inline std::pair<Partition, Partition> split_partition(const StochasticLog& log,
                                                       const Partition& parent) {
  return detail::split_with(log, parent, [](Partition p) { return p; });
}

struct EngineStats {
  std::uint64_t partitions_created = 0;
  std::uint64_t second_best_calls = 0;
  std::uint64_t one_substitution_checks = 0;
  std::uint64_t one_substitution_violations = 0;
  std::size_t peak_frontier = 0;
  double wall_seconds = 0.0;
};

struct TopKOptions {
  /// Verify on every second-best call that the candidate differs from
  /// the partition's best in exactly one feasible position. Costs one
  /// O(n) pass per call; intended for test builds and the verification
  /// battery.
  bool check_one_substitution = false;

  /// Upper bound on the number of ranks that will ever be requested
  /// (0 = unbounded). With a bound, the frontier periodically discards
  /// partitions that provably cannot be popped within the budget: each
  /// better-ranked frontier partition yields at least one earlier
  /// emission, so anything ranked beyond the remaining budget is
  /// unreachable. top_k() sets this to its K.
  std::uint64_t max_ranks = 0;
};

struct TopKResult {
  std::vector<RankingEntry> entries;
  bool exhausted = false;  // fewer than K realizations exist
  EngineStats stats;
};

/// Lazy rank-by-rank enumeration of realizations in non-increasing
/// probability order. next() yields entries one at a time, so callers
/// can stream millions of ranks without holding them all; top_k() below
/// collects into a TopKResult.
///
/// The frontier is a binary max-heap of partitions keyed by their cached
/// second-best (log-probability first, then the global tie order on
/// choice arrays). Each pop emits exactly one new realization; the
/// popped partition is split lazily on the following call, so a run that
/// stops at K ranks performs at most 2K-1 second-best computations.
///
/// The referenced log must outlive the enumerator. A single enumerator
/// is not thread-safe, but may be handed between threads between calls.
class TopKEnumerator {
 public:
  explicit TopKEnumerator(const StochasticLog& log, TopKOptions options = {})
      : log_(&log), options_(options) {}

  std::optional<RankingEntry> next() {
    auto started = std::chrono::steady_clock::now();
    auto entry = advance();
    stats_.wall_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return entry;
  }

  /// True once the solution set is fully enumerated.
  bool exhausted() const { return done_; }
  std::uint64_t emitted() const { return emitted_; }
  const EngineStats& stats() const { return stats_; }

 private:
  // The frontier heap sifts small (key, slot) items; partitions live in
  // a slot-stable pool and move exactly once in and once out. Keeps the
  // hot heap data cache-resident even with 10^5+ live partitions.
  struct HeapItem {
    double log_prob;
    std::uint32_t slot;
  };

  /// True when a's second ranks after b's under the global tie order.
  static bool ranks_after(const Partition& a, const Partition& b) {
    if (a.second->log_prob != b.second->log_prob)
      return a.second->log_prob < b.second->log_prob;
    // Equal log-probability: lexicographically smaller second ranks
    // first. Compare without materializing either choice array.
    std::size_t n = a.best->choices.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t av = (i == a.second->position) ? a.second->next_index
                                                   : a.best->choices[i];
      std::uint32_t bv = (i == b.second->position) ? b.second->next_index
                                                   : b.best->choices[i];
      if (av != bv) return av > bv;
    }
    return false;
  }

  struct FrontierLess {
    const std::vector<Partition>* pool;
    bool operator()(const HeapItem& a, const HeapItem& b) const {
      if (a.log_prob != b.log_prob) return a.log_prob < b.log_prob;
      return ranks_after((*pool)[a.slot], (*pool)[b.slot]);
    }
  };

  /// Books one second-best computation and, when enabled, verifies the
  /// one-substitution property of its result the hard way.
  Partition finish_partition(Partition p) {
    ++stats_.second_best_calls;
    ++stats_.partitions_created;
    if (p.second && options_.check_one_substitution) {
      ++stats_.one_substitution_checks;
      const auto& cand = *p.second;
      bool ok = cand.position < log_->size() &&
                !p.restriction.is_pinned(cand.position) &&
                cand.next_index < log_->event(cand.position).alternatives.size() &&
                !p.restriction.is_excluded(cand.position, cand.next_index) &&
                cand.next_index != p.best->choices[cand.position];
      if (ok) {
        // Count differing positions the hard way.
        std::vector<std::uint32_t> c = p.best->choices;
        c[cand.position] = cand.next_index;
        std::uint32_t diff = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
          if (c[i] != p.best->choices[i]) ++diff;
        ok = (diff == 1);
      }
      if (!ok) ++stats_.one_substitution_violations;
    }
    return p;
  }

  void push(Partition p) {
    if (!p.second) return;  // singleton: nothing new to contribute
    if (pool_.empty() && options_.max_ranks > 0) {
      // the pruned frontier peaks near half the rank budget; reserving
      // avoids re-moving tens of thousands of partitions as it grows
      std::size_t hint = static_cast<std::size_t>(
          std::min<std::uint64_t>(options_.max_ranks / 2 + 16, 1 << 20));
      pool_.reserve(hint);
      heap_.reserve(hint);
      free_slots_.reserve(hint / 4);
    }
    std::uint32_t slot;
    if (!free_slots_.empty()) {
      slot = free_slots_.back();
      free_slots_.pop_back();
      pool_[slot] = std::move(p);
    } else {
      slot = static_cast<std::uint32_t>(pool_.size());
      pool_.push_back(std::move(p));
    }
    heap_.push_back(HeapItem{pool_[slot].second->log_prob, slot});
    std::push_heap(heap_.begin(), heap_.end(), FrontierLess{&pool_});
    stats_.peak_frontier = std::max(stats_.peak_frontier, heap_.size());
    prune();
  }

  void prune() {
    if (options_.max_ranks == 0) return;
    std::uint64_t remaining =
        options_.max_ranks > emitted_ ? options_.max_ranks - emitted_ : 0;
    if (heap_.size() <= 2 * remaining + 8) return;
    auto keep = static_cast<std::ptrdiff_t>(remaining);
    auto better = [this](const HeapItem& a, const HeapItem& b) {
      return FrontierLess{&pool_}(b, a);
    };
    std::nth_element(heap_.begin(), heap_.begin() + keep, heap_.end(), better);
    for (std::size_t i = remaining; i < heap_.size(); ++i)
      free_slots_.push_back(heap_[i].slot);
    heap_.resize(remaining);
    std::make_heap(heap_.begin(), heap_.end(), FrontierLess{&pool_});
  }

  Partition pop() {
    std::pop_heap(heap_.begin(), heap_.end(), FrontierLess{&pool_});
    std::uint32_t slot = heap_.back().slot;
    heap_.pop_back();
    Partition p = std::move(pool_[slot]);
    free_slots_.push_back(slot);
    return p;
  }

  RankingEntry emit(Assignment assignment) {
    ++emitted_;
    RankingEntry entry;
    entry.rank = emitted_;
    entry.probability = assignment.probability();
    cumulative_log_ = (emitted_ == 1)
                          ? assignment.log_prob
                          : log_add_exp(cumulative_log_, assignment.log_prob);
    entry.cumulative_log_prob = cumulative_log_;
    entry.cumulative_prob = std::exp(cumulative_log_);
    std::uint32_t dist = 0;
    for (std::size_t i = 0; i < assignment.choices.size(); ++i)
      if (assignment.choices[i] != top1_->choices[i]) ++dist;
    entry.dist_to_top1 = dist;
    entry.assignment = std::move(assignment);
    return entry;
  }

  std::optional<RankingEntry> advance() {
    if (done_) return std::nullopt;

    if (emitted_ == 0) {
      top1_ = std::make_shared<const Assignment>(best_realization(*log_));
      return emit(*top1_);
    }

    if (!root_built_) {
      root_built_ = true;
      push(finish_partition(detail::make_partition(
          *log_, Restriction{}, top1_,
          detail::gather_log_terms(*log_, top1_->choices))));
    }

    if (pending_) {
      auto [child_pin, child_cut] = detail::split_with(
          *log_, *pending_,
          [this](Partition p) { return finish_partition(std::move(p)); },
          std::move(pending_second_));
      push(std::move(child_pin));
      push(std::move(child_cut));
      pending_.reset();
      pending_second_.reset();
    }

    if (heap_.empty()) {
      done_ = true;
      return std::nullopt;
    }

    Partition popped = pop();
    auto second = std::make_shared<const Assignment>(popped.second_assignment());
    pending_ = std::move(popped);
    pending_second_ = second;
    return emit(Assignment(*second));
  }

  const StochasticLog* log_;
  TopKOptions options_;
  std::vector<HeapItem> heap_;   // binary max-heap via std::*_heap
  std::vector<Partition> pool_;  // slot-stable partition storage
  std::vector<std::uint32_t> free_slots_;
  std::optional<Partition> pending_;  // popped, emitted, not yet split
  std::shared_ptr<const Assignment> pending_second_;
  std::shared_ptr<const Assignment> top1_;
  double cumulative_log_ = 0.0;
  std::uint64_t emitted_ = 0;
  bool root_built_ = false;
  bool done_ = false;
  EngineStats stats_;
};

/// Top-K ranking of the log's realizations: min(K, realization count)
/// entries in non-increasing probability order under the global tie
/// order. `exhausted` is set when the log has fewer than K realizations.
inline TopKResult top_k(const StochasticLog& log, std::uint64_t k,
                        TopKOptions options = {}) {
  if (k < 1) raise(ErrorCode::InvalidK, "K must be >= 1");
  if (options.max_ranks == 0) options.max_ranks = k;
  TopKResult result;
  TopKEnumerator enumerator(log, options);
  result.entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(k, 1 << 20)));
  while (result.entries.size() < k) {
    auto entry = enumerator.next();
    if (!entry) break;
    result.entries.push_back(std::move(*entry));
  }
  result.exhausted = result.entries.size() < k;
  result.stats = enumerator.stats();
  return result;
}

}  // namespace skrank
