#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "skrank/bigint.hpp"
#include "skrank/errors.hpp"

namespace skrank {

/// Timestamps are opaque ordered values: either an integer or an RFC3339
/// string. Ordering only decides the canonical event layout; the ranking
/// math never looks at it. std::variant's relational operators give the
/// order we want (all integers before all strings, natural order within
/// each kind; RFC3339 strings in one timezone compare chronologically).
using Timestamp = std::variant<std::int64_t, std::string>;

inline std::string timestamp_to_string(const Timestamp& ts) {
  if (std::holds_alternative<std::int64_t>(ts))
    return std::to_string(std::get<std::int64_t>(ts));
  return std::get<std::string>(ts);
}

/// One (label, probability) pair of an event's activity distribution.
/// log_p caches ln(p); events with a single alternative carry log_p == 0.
struct ActivityAlternative {
  std::string label;
  double p = 0.0;
  double log_p = 0.0;

  friend bool operator==(const ActivityAlternative&, const ActivityAlternative&) = default;
};

/// Unvalidated input record, as read from a file or built by a generator.
struct RawAlternative {
  std::string label;
  double p = 0.0;
};

struct RawEvent {
  std::string event_id;
  std::string case_id;
  Timestamp timestamp;
  std::vector<RawAlternative> alternatives;
};

/// A validated event. Alternatives are in canonical order: probability
/// descending, ties broken by label ascending (byte order). Index 0 is
/// therefore the most probable realization of the event.
struct StochasticEvent {
  std::string event_id;
  std::string case_id;
  Timestamp timestamp;
  std::vector<ActivityAlternative> alternatives;

  bool certain() const { return alternatives.size() == 1; }

  friend bool operator==(const StochasticEvent&, const StochasticEvent&) = default;
};

struct ValidateOptions {
  /// Rescale each event's probabilities to sum exactly 1 before
  /// canonicalization. Off by default: out-of-tolerance sums are errors.
  bool renormalize = false;
  double sum_tolerance = 1e-6;
};

/// A validated, canonically ordered log. Events are sorted by
/// (case_id, timestamp, event_id) and the order is fixed after
/// construction: choice arrays (Assignment) index into this layout.
/// Immutable after construction; safe to share across threads.
class StochasticLog {
 public:
  const std::vector<StochasticEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  const StochasticEvent& event(std::size_t pos) const { return events_[pos]; }

  std::optional<std::size_t> position_of(std::string_view event_id) const {
    auto it = index_.find(std::string(event_id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const StochasticLog& other) const { return events_ == other.events_; }

  friend StochasticLog validate_log(std::vector<RawEvent>, const ValidateOptions&);

 private:
  StochasticLog() = default;

  std::vector<StochasticEvent> events_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Validates and canonicalizes raw events into a StochasticLog.
///
/// Checks per event: alternatives nonempty, labels pairwise distinct,
/// every p strictly positive and finite, p <= 1, and the probabilities
/// sum to 1 within `sum_tolerance` (unless `renormalize` rescales them
/// first). Event ids must be unique across the log.
inline StochasticLog validate_log(std::vector<RawEvent> raw,
                                  const ValidateOptions& options = {}) {
  StochasticLog log;
  log.events_.reserve(raw.size());

  for (auto& rec : raw) {
    if (rec.alternatives.empty())
      raise(ErrorCode::EmptyAlternatives,
            "event '" + rec.event_id + "' has no alternatives");

    double sum = 0.0;
    std::unordered_set<std::string_view> seen_labels;
    for (const auto& alt : rec.alternatives) {
      if (!(alt.p > 0.0) || !std::isfinite(alt.p))
        raise(ErrorCode::NonPositiveProbability,
              "event '" + rec.event_id + "', label '" + alt.label +
                  "': probability must be finite and > 0");
      if (!seen_labels.insert(alt.label).second)
        raise(ErrorCode::DuplicateLabelInEvent,
              "event '" + rec.event_id + "' repeats label '" + alt.label + "'");
      sum += alt.p;
    }

    StochasticEvent ev;
    ev.event_id = std::move(rec.event_id);
    ev.case_id = std::move(rec.case_id);
    ev.timestamp = std::move(rec.timestamp);
    ev.alternatives.reserve(rec.alternatives.size());

    if (options.renormalize) {
      for (auto& alt : rec.alternatives)
        ev.alternatives.push_back({std::move(alt.label), alt.p / sum, 0.0});
    } else {
      if (std::abs(sum - 1.0) > options.sum_tolerance)
        raise(ErrorCode::ProbabilitySumViolation,
              "event '" + ev.event_id + "': probabilities sum to " +
                  std::to_string(sum));
      for (auto& alt : rec.alternatives) {
        if (alt.p > 1.0)
          raise(ErrorCode::ProbabilitySumViolation,
                "event '" + ev.event_id + "', label '" + alt.label +
                    "': probability exceeds 1");
        ev.alternatives.push_back({std::move(alt.label), alt.p, 0.0});
      }
    }

    for (auto& alt : ev.alternatives) alt.log_p = std::log(alt.p);

    // Canonical per-event order: p descending, label ascending.
    std::sort(ev.alternatives.begin(), ev.alternatives.end(),
              [](const ActivityAlternative& a, const ActivityAlternative& b) {
                if (a.p != b.p) return a.p > b.p;
                return a.label < b.label;
              });

    log.events_.push_back(std::move(ev));
  }

  // Canonical event order: (case_id, timestamp, event_id) ascending.
  std::sort(log.events_.begin(), log.events_.end(),
            [](const StochasticEvent& a, const StochasticEvent& b) {
              if (a.case_id != b.case_id) return a.case_id < b.case_id;
              if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
              return a.event_id < b.event_id;
            });

  log.index_.reserve(log.events_.size());
  for (std::size_t i = 0; i < log.events_.size(); ++i) {
    if (!log.index_.emplace(log.events_[i].event_id, i).second)
      raise(ErrorCode::DuplicateEventId,
            "event id '" + log.events_[i].event_id + "' occurs more than once");
  }
  return log;
}

/// Back to raw records (canonical order preserved). Round-trips through
/// validate_log unchanged.
inline std::vector<RawEvent> raw_events(const StochasticLog& log) {
  std::vector<RawEvent> out;
  out.reserve(log.size());
  for (const auto& ev : log.events()) {
    RawEvent rec{ev.event_id, ev.case_id, ev.timestamp, {}};
    rec.alternatives.reserve(ev.alternatives.size());
    for (const auto& alt : ev.alternatives) rec.alternatives.push_back({alt.label, alt.p});
    out.push_back(std::move(rec));
  }
  return out;
}

/// Number of realizations: the product of per-event alternative counts.
/// Grows exponentially, hence the big integer.
inline BigUint realization_count(const StochasticLog& log) {
  BigUint count(1);
  for (const auto& ev : log.events()) count *= ev.alternatives.size();
  return count;
}

/// realization_count if it fits in 64 bits, otherwise nullopt.
inline std::optional<std::uint64_t> realization_count_u64(const StochasticLog& log) {
  BigUint count = realization_count(log);
  if (!count.fits_uint64()) return std::nullopt;
  return count.to_uint64();
}

namespace detail {

/// Exact accumulator for sums of log-probabilities.
///
/// Engine and oracle must assign every realization the *identical*
/// double log-probability no matter which order the factors arrive in;
/// otherwise equal-probability realizations would tie-break on rounding
/// noise instead of the documented lexicographic order. Floating-point
/// addition is not associative, so the sum is kept exactly instead:
/// magnitudes of log-probabilities lie in [2^-53.1, 745] (the log of the
/// closest double below 1, and |log| of the smallest denormal), so a
/// 192-bit fixed-point integer with its LSB at 2^-108 represents every
/// addend exactly, with room for 2^40 terms. add/remove are exact
/// integer updates (removal is exact because each term was added
/// exactly), and log_prob() rounds the exact total to the nearest
/// double, ties to even. The result is a pure function of the term
/// multiset, bit for bit.
class LogTermSum {
 public:
  /// Adds one log-probability term (log_p <= 0).
  void add_term(double log_p) { apply<false>(log_p); }

  /// Removes one previously added term.
  void remove_term(double log_p) { apply<true>(log_p); }

  /// The summed log-probability, correctly rounded.
  double log_prob() const {
    if (words_[0] == 0 && words_[1] == 0 && words_[2] == 0) return 0.0;
    int top = top_bit();
    int low = top - 52;  // lowest significand bit index
    if (low <= 0) {
      // fewer than 53 significant bits: the value is exact
      return -std::ldexp(static_cast<double>(words_[0]), -kPoint);
    }
    std::uint64_t sig = extract_53(low);
    bool guard = bit_set(low - 1);
    bool sticky = any_below(low - 1);
    if (guard && (sticky || (sig & 1))) {
      ++sig;
      if (sig == (std::uint64_t{1} << 53)) {
        sig >>= 1;
        ++low;
      }
    }
    return -std::ldexp(static_cast<double>(sig), low - kPoint);
  }

  friend bool operator==(const LogTermSum&, const LogTermSum&) = default;

 private:
  static constexpr int kPoint = 108;  // bit index of 2^0

  template <bool Remove>
  void apply(double log_p) {
    double magnitude = -log_p;
    std::uint64_t bits = std::bit_cast<std::uint64_t>(magnitude);
    int raw_exp = static_cast<int>((bits >> 52) & 0x7ff);
    std::uint64_t sig = bits & ((std::uint64_t{1} << 52) - 1);
    if (raw_exp == 0) {
      if (sig == 0) return;  // log 1 contributes nothing
      raw_exp = 1;           // denormal; unreachable for log magnitudes
    } else {
      sig |= std::uint64_t{1} << 52;
    }
    int pos = raw_exp - 1023 - 52 + kPoint;
    if (pos < 0) {  // below resolution; cannot happen for valid terms
      sig = (-pos < 64) ? (sig >> -pos) : 0;
      pos = 0;
      if (sig == 0) return;
    }
    // magnitudes in [2^-54, 2^10) land at pos in [2, 65]
    unsigned word = static_cast<unsigned>(pos) / 64;
    unsigned bit = static_cast<unsigned>(pos) % 64;
    unsigned __int128 shifted = static_cast<unsigned __int128>(sig) << bit;
    std::uint64_t lo = static_cast<std::uint64_t>(shifted);
    std::uint64_t hi = static_cast<std::uint64_t>(shifted >> 64);
    if constexpr (Remove) {
      std::uint64_t borrow = (words_[word] < lo) ? 1 : 0;
      words_[word] -= lo;
      std::uint64_t mid_sub = hi + borrow;  // hi < 2^54, no overflow
      if (word + 1 < 3) {
        std::uint64_t borrow2 = (words_[word + 1] < mid_sub) ? 1 : 0;
        words_[word + 1] -= mid_sub;
        if (borrow2 && word + 2 < 3) --words_[word + 2];
      }
    } else {
      words_[word] += lo;
      std::uint64_t carry = (words_[word] < lo) ? 1 : 0;
      std::uint64_t mid_add = hi + carry;
      if (word + 1 < 3) {
        words_[word + 1] += mid_add;
        std::uint64_t carry2 = (words_[word + 1] < mid_add) ? 1 : 0;
        if (carry2 && word + 2 < 3) ++words_[word + 2];
      }
    }
  }

  int top_bit() const {
    for (int w = 2; w >= 0; --w)
      if (words_[w] != 0)
        return w * 64 + 63 - std::countl_zero(words_[w]);
    return -1;
  }

  bool bit_set(int index) const {
    if (index < 0) return false;
    return (words_[index / 64] >> (index % 64)) & 1;
  }

  bool any_below(int index) const {
    if (index <= 0) return false;
    int w = index / 64, b = index % 64;
    if (words_[w] & ((std::uint64_t{1} << b) - 1)) return true;
    for (int i = 0; i < w; ++i)
      if (words_[i] != 0) return true;
    return false;
  }

  /// 53 bits starting at `low` (the top bit is set by construction).
  std::uint64_t extract_53(int low) const {
    unsigned w = static_cast<unsigned>(low) / 64;
    unsigned b = static_cast<unsigned>(low) % 64;
    unsigned __int128 window = words_[w];
    if (w + 1 < 3) window |= static_cast<unsigned __int128>(words_[w + 1]) << 64;
    return static_cast<std::uint64_t>((window >> b) &
                                      ((std::uint64_t{1} << 53) - 1));
  }

  std::uint64_t words_[3] = {0, 0, 0};  // little-endian, LSB = 2^-108
};

inline LogTermSum gather_log_terms(const StochasticLog& log,
                                   std::span<const std::uint32_t> choices) {
  LogTermSum sum;
  for (std::size_t i = 0; i < choices.size(); ++i)
    sum.add_term(log.event(i).alternatives[choices[i]].log_p);
  return sum;
}

}  // namespace detail

/// Log-probability of the realization selected by `choices` (one index
/// per event, into that event's canonical alternatives). The linear
/// value is recoverable with exp; it underflows to 0 for long logs,
/// which is why everything downstream stays in the log domain.
inline double log_prob_of(const StochasticLog& log,
                          std::span<const std::uint32_t> choices) {
  if (choices.size() != log.size())
    raise(ErrorCode::IndexOutOfRange,
          "choice array has " + std::to_string(choices.size()) +
              " entries for a log of " + std::to_string(log.size()) + " events");
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (choices[i] >= log.event(i).alternatives.size())
      raise(ErrorCode::IndexOutOfRange,
            "event '" + log.event(i).event_id + "': choice " +
                std::to_string(choices[i]) + " out of range");
  }
  return detail::gather_log_terms(log, choices).log_prob();
}

/// One full log realization: a choice of alternative per event, in the
/// log's canonical event order, plus the cached log-probability.
struct Assignment {
  std::vector<std::uint32_t> choices;
  double log_prob = 0.0;

  double probability() const { return std::exp(log_prob); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

inline Assignment make_assignment(const StochasticLog& log,
                                  std::vector<std::uint32_t> choices) {
  double lp = log_prob_of(log, choices);
  return Assignment{std::move(choices), lp};
}

/// Hamming distance over events: how many choices differ.
inline std::uint32_t assignment_distance(const Assignment& a, const Assignment& b) {
  if (a.choices.size() != b.choices.size())
    raise(ErrorCode::LengthMismatch,
          "assignments of length " + std::to_string(a.choices.size()) + " and " +
              std::to_string(b.choices.size()));
  std::uint32_t d = 0;
  for (std::size_t i = 0; i < a.choices.size(); ++i)
    if (a.choices[i] != b.choices[i]) ++d;
  return d;
}

/// Global total order on assignments: log-probability descending, then
/// the choices array lexicographically ascending. Every ranking in the
/// library (engine, oracle, tests) uses exactly this order, which is
/// what makes their outputs comparable byte for byte.
inline bool ranks_before(const Assignment& a, const Assignment& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return a.choices < b.choices;
}

/// One row of a top-K ranking.
struct RankingEntry {
  std::size_t rank = 0;  // 1-based
  Assignment assignment;
  double probability = 0.0;        // exp(log_prob); may underflow to 0
  double cumulative_log_prob = 0.0;
  double cumulative_prob = 0.0;
  std::uint32_t dist_to_top1 = 0;

  double log_prob() const { return assignment.log_prob; }
};

/// Numerically stable log(exp(a) + exp(b)).
inline double log_add_exp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace skrank
