#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "skrank/errors.hpp"
#include "skrank/model.hpp"

namespace skrank {

/// Parameters of the synthetic-log generator. Defaults mirror the fixed
/// values used throughout the sweep tooling (see SweepSpec).
struct SimulationParams {
  std::uint64_t n_events = 100;    // total events in the log
  double r = 0.3;                  // fraction of events made uncertain
  std::uint32_t n_act = 3;         // alternatives per uncertain event
  double beta = 0.3;               // probability-skew parameter
  std::uint32_t alphabet_size = 26;
  std::uint64_t seed = 1;
  std::uint32_t n_cases = 1;
};

namespace rng {

/// mt19937_64 is fully specified by the standard, so raw draws are
/// bit-identical across platforms. The standard *distributions* are not;
/// these helpers replace them so that seeded logs are portable.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t x = gen();
    if (x >= threshold) return x % n;
  }
}

/// First `take` elements of a partial Fisher-Yates shuffle of `items`.
template <typename T>
std::vector<T> sample_without_replacement(std::mt19937_64& gen,
                                          std::vector<T> items, std::size_t take) {
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(
                            uniform_below(gen, items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(take);
  return items;
}

}  // namespace rng

/// Raw probability ladder before normalization: p1 = 1, then
/// p_{i+1} = p_i * beta * rand_i with each rand_i drawn uniformly from
/// [0.9, 1.1). Exposed separately so tests can force the rand values.
inline std::vector<double> probability_ladder(std::uint32_t n_act, double beta,
                                              const std::vector<double>& rands) {
  std::vector<double> p(n_act);
  p[0] = 1.0;
  for (std::uint32_t i = 1; i < n_act; ++i) p[i] = p[i - 1] * beta * rands[i - 1];
  return p;
}

/// Probability vector of one uncertain event: the recursive ladder,
/// normalized to sum 1. Consumes exactly n_act - 1 draws from the
/// generator.
inline std::vector<double> gen_event_probabilities(std::uint32_t n_act, double beta,
                                                   std::mt19937_64& gen) {
  if (n_act < 2)
    raise(ErrorCode::InvalidParams, "n_act must be >= 2, got " + std::to_string(n_act));
  if (!(beta > 0.0))
    raise(ErrorCode::InvalidParams, "beta must be > 0");
  std::vector<double> rands(n_act - 1);
  for (auto& v : rands) v = 0.9 + 0.2 * rng::uniform01(gen);
  std::vector<double> p = probability_ladder(n_act, beta, rands);
  double sum = 0.0;
  for (double v : p) sum += v;
  for (auto& v : p) v /= sum;
  return p;
}

namespace detail {

/// Spreadsheet-style label for an alphabet index: A..Z, AA, AB, ...
inline std::string activity_label(std::uint32_t index) {
  std::string label;
  std::uint64_t v = index;
  for (;;) {
    label.insert(label.begin(), static_cast<char>('A' + v % 26));
    if (v < 26) break;
    v = v / 26 - 1;
  }
  return label;
}

inline std::string padded_id(char prefix, std::uint64_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

inline void check_params(const SimulationParams& p) {
  if (p.n_events < 1) raise(ErrorCode::InvalidParams, "n_events must be >= 1");
  if (p.r < 0.0 || p.r > 1.0) raise(ErrorCode::InvalidParams, "r must be in [0, 1]");
  if (p.n_act < 2) raise(ErrorCode::InvalidParams, "n_act must be >= 2");
  if (!(p.beta > 0.0) || p.beta > 1.1)
    raise(ErrorCode::InvalidParams, "beta must be in (0, 1.1]");
  if (p.alphabet_size < 1) raise(ErrorCode::InvalidParams, "alphabet_size must be >= 1");
  if (p.n_act > p.alphabet_size)
    raise(ErrorCode::InvalidParams, "n_act exceeds alphabet_size");
  if (p.n_cases < 1) raise(ErrorCode::InvalidParams, "n_cases must be >= 1");
}

}  // namespace detail

/// Generates a stochastically known log with seeded determinism: the
/// same params always produce the byte-identical log.
///
/// One mt19937_64 stream per log, consumed in this fixed order:
///   1. one label draw per event (positions 0..n-1);
///   2. the uncertain-event selection (partial Fisher-Yates over
///      positions, taking floor(r * n_events), then sorted ascending);
///   3. per uncertain event in ascending position order: first its
///      n_act - 1 alternative labels (partial Fisher-Yates over the
///      alphabet minus the original label), then the n_act - 1 ladder
///      draws for gen_event_probabilities.
///
/// The original label is kept as one of the uncertain event's
/// alternatives and receives the head of the probability ladder; the
/// sampled labels follow in draw order. Canonical ordering is applied by
/// validate_log afterwards, so alternatives end up sorted by probability
/// regardless (with beta close to 1 the ladder need not be monotone).
///
/// Events get increasing integer timestamps and are assigned to cases
/// round-robin; cases exist for format fidelity only, the ranking math
/// treats the log as a flat event set.
inline StochasticLog simulate_log(const SimulationParams& params) {
  detail::check_params(params);
  std::mt19937_64 gen(params.seed);
  const std::uint64_t n = params.n_events;

  // 1. labels
  std::vector<std::uint32_t> labels(n);
  for (auto& label : labels)
    label = static_cast<std::uint32_t>(rng::uniform_below(gen, params.alphabet_size));

  // 2. uncertain-event selection
  std::uint64_t n_uncertain = static_cast<std::uint64_t>(
      params.r * static_cast<double>(n));
  if (n_uncertain > n) n_uncertain = n;
  std::vector<std::uint64_t> positions(n);
  for (std::uint64_t i = 0; i < n; ++i) positions[i] = i;
  std::vector<std::uint64_t> uncertain = rng::sample_without_replacement(
      gen, std::move(positions), static_cast<std::size_t>(n_uncertain));
  std::sort(uncertain.begin(), uncertain.end());

  std::size_t id_width = std::to_string(n).size();
  std::size_t case_width = std::to_string(params.n_cases).size();

  std::vector<RawEvent> raw;
  raw.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    RawEvent ev;
    ev.event_id = detail::padded_id('e', i, id_width);
    ev.case_id = detail::padded_id('c', i % params.n_cases, case_width);
    ev.timestamp = static_cast<std::int64_t>(i + 1);
    ev.alternatives.push_back({detail::activity_label(labels[i]), 1.0});
    raw.push_back(std::move(ev));
  }

  // 3. uncertain events: alternative labels, then probabilities
  for (std::uint64_t pos : uncertain) {
    std::vector<std::uint32_t> others;
    others.reserve(params.alphabet_size - 1);
    for (std::uint32_t a = 0; a < params.alphabet_size; ++a)
      if (a != labels[pos]) others.push_back(a);
    std::vector<std::uint32_t> picked =
        rng::sample_without_replacement(gen, std::move(others), params.n_act - 1);

    std::vector<double> probs = gen_event_probabilities(params.n_act, params.beta, gen);

    auto& alts = raw[static_cast<std::size_t>(pos)].alternatives;
    alts.clear();
    alts.push_back({detail::activity_label(labels[pos]), probs[0]});
    for (std::uint32_t j = 0; j + 1 < params.n_act; ++j)
      alts.push_back({detail::activity_label(picked[j]), probs[j + 1]});
  }

  return validate_log(std::move(raw));
}

/// floor(r * n_events): how many events simulate_log makes uncertain.
inline std::uint64_t uncertain_event_count(const SimulationParams& params) {
  std::uint64_t m = static_cast<std::uint64_t>(params.r * static_cast<double>(params.n_events));
  return m > params.n_events ? params.n_events : m;
}

}  // namespace skrank
