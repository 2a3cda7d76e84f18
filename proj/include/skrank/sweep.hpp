#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "skrank/errors.hpp"
#include "skrank/io.hpp"
#include "skrank/metrics.hpp"
#include "skrank/ranking.hpp"
#include "skrank/simulate.hpp"

namespace skrank {

enum class SweepParam { K, n_events, r, n_act, beta };

inline const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::K: return "K";
    case SweepParam::n_events: return "n_events";
    case SweepParam::r: return "r";
    case SweepParam::n_act: return "n_act";
    case SweepParam::beta: return "beta";
  }
  return "?";
}

inline SweepParam sweep_param_from_string(std::string_view name) {
  if (name == "K" || name == "k") return SweepParam::K;
  if (name == "n_events") return SweepParam::n_events;
  if (name == "r") return SweepParam::r;
  if (name == "n_act") return SweepParam::n_act;
  if (name == "beta") return SweepParam::beta;
  raise(ErrorCode::InvalidParams,
        "unknown sweep parameter '" + std::string(name) +
            "' (expected K, n_events, r, n_act or beta)");
}

inline bool sweep_param_is_integral(SweepParam p) {
  return p == SweepParam::K || p == SweepParam::n_events || p == SweepParam::n_act;
}

/// One parameter varied over a value grid, everything else fixed.
/// Replicate seeds are derived as base_seed + rep_index, so a SweepSpec
/// pins its entire input data set.
struct SweepSpec {
  SweepParam param = SweepParam::K;
  std::vector<double> values;
  SimulationParams base;      // fixed simulation parameters (seed ignored)
  std::uint64_t k = 10'000;   // fixed K for non-K sweeps
  std::uint32_t reps = 10;
  std::uint64_t base_seed = 1;
  std::uint32_t jobs = 1;     // worker threads; >1 perturbs runtime_s
};

/// One (value, replicate) cell of a sweep, before averaging.
struct SweepCell {
  double value = 0.0;
  std::uint32_t rep = 0;
  RankingMeasures measures;
};

namespace detail {

inline SimulationParams params_for(const SweepSpec& spec, double value,
                                   std::uint32_t rep) {
  SimulationParams p = spec.base;
  p.seed = spec.base_seed + rep;
  switch (spec.param) {
    case SweepParam::K: break;  // not a simulation parameter
    case SweepParam::n_events: p.n_events = static_cast<std::uint64_t>(value); break;
    case SweepParam::r: p.r = value; break;
    case SweepParam::n_act: p.n_act = static_cast<std::uint32_t>(value); break;
    case SweepParam::beta: p.beta = value; break;
  }
  return p;
}

inline RankingMeasures rank_and_measure(const StochasticLog& log, std::uint64_t k) {
  TopKEnumerator enumerator(log, TopKOptions{false, k});
  MeasureAccumulator acc;
  std::uint64_t produced = 0;
  while (produced < k) {
    auto entry = enumerator.next();
    if (!entry) break;
    acc.add(*entry);
    ++produced;
  }
  return acc.finish(enumerator.stats().wall_seconds, produced < k);
}

template <typename Fn>
void run_jobs(std::size_t count, std::uint32_t jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  std::uint32_t n_threads = std::min<std::uint32_t>(jobs, static_cast<std::uint32_t>(count));
  pool.reserve(n_threads);
  for (std::uint32_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Runs the sweep and returns one averaged row per value (replicates in
/// `cells` when requested). Value-replicate pairs are independent given
/// their derived seeds, so they may fan out over `jobs` workers; rows
/// and cells come back in deterministic order either way.
///
/// A fresh log is simulated per (value, rep) pair, except for K-sweeps:
/// K is not a simulation parameter, so one log per replicate is reused
/// across all K values.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                       std::vector<SweepCell>* cells = nullptr) {
  if (spec.values.empty()) raise(ErrorCode::InvalidParams, "no sweep values");
  if (spec.reps < 1) raise(ErrorCode::InvalidParams, "reps must be >= 1");

  const std::size_t n_values = spec.values.size();
  std::vector<SweepCell> grid(n_values * spec.reps);

  if (spec.param == SweepParam::K) {
    // one job per replicate: simulate once, rank at every K
    detail::run_jobs(spec.reps, spec.jobs, [&](std::size_t rep) {
      StochasticLog log = simulate_log(detail::params_for(spec, 0.0, static_cast<std::uint32_t>(rep)));
      for (std::size_t vi = 0; vi < n_values; ++vi) {
        auto k = static_cast<std::uint64_t>(spec.values[vi]);
        grid[vi * spec.reps + rep] = SweepCell{
            spec.values[vi], static_cast<std::uint32_t>(rep),
            detail::rank_and_measure(log, k)};
      }
    });
  } else {
    detail::run_jobs(n_values * spec.reps, spec.jobs, [&](std::size_t job) {
      std::size_t vi = job / spec.reps;
      auto rep = static_cast<std::uint32_t>(job % spec.reps);
      StochasticLog log = simulate_log(detail::params_for(spec, spec.values[vi], rep));
      grid[job] = SweepCell{spec.values[vi], rep, detail::rank_and_measure(log, spec.k)};
    });
  }

  std::vector<SweepRow> rows;
  rows.reserve(n_values);
  for (std::size_t vi = 0; vi < n_values; ++vi) {
    RankingMeasures mean;
    std::uint64_t k_actual_max = 0;
    bool any_exhausted = false;
    for (std::uint32_t rep = 0; rep < spec.reps; ++rep) {
      const auto& m = grid[vi * spec.reps + rep].measures;
      mean.p_l1 += m.p_l1;
      mean.p_l1_log10 += m.p_l1_log10;  // mean of logs: geometric-mean view
      mean.f_k += m.f_k;
      mean.f_k_log10 += m.f_k_log10;
      mean.d_avg += m.d_avg;
      mean.runtime_s += m.runtime_s;
      k_actual_max = std::max(k_actual_max, m.k_actual);
      any_exhausted = any_exhausted || m.exhausted;
    }
    double n = static_cast<double>(spec.reps);
    mean.p_l1 /= n;
    mean.p_l1_log10 /= n;
    mean.f_k /= n;
    mean.f_k_log10 /= n;
    mean.d_avg /= n;
    mean.runtime_s /= n;
    mean.k_actual = k_actual_max;
    mean.exhausted = any_exhausted;
    rows.push_back(SweepRow{to_string(spec.param), spec.values[vi],
                            sweep_param_is_integral(spec.param), mean, spec.reps});
  }

  if (cells) *cells = std::move(grid);
  return rows;
}

}  // namespace skrank
