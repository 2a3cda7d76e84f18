// skrank: simulate, rank, measure, sweep and cross-check stochastically
// known event logs. Diagnostics go to stderr, data to files or stdout,
// so output is machine-pipeable.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <skrank/skrank.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitCap = 4;

int exit_code_for(const skrank::Error& e) {
  return e.code() == skrank::ErrorCode::CapExceeded ? kExitCap : kExitData;
}

/// Output sink: a file when a path is given, stdout otherwise.
struct Sink {
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.emplace(path, std::ios::binary);
      if (!*file)
        skrank::raise(skrank::ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file ? *file : std::cout; }
  std::optional<std::ofstream> file;
};

skrank::StochasticLog load_input(const std::string& path, bool renormalize) {
  if (path == "-") {
    return skrank::parse_sk_log(std::cin, skrank::ParseOptions{renormalize});
  }
  return skrank::load_sk_log(path, skrank::ParseOptions{renormalize});
}

void add_sim_flags(CLI::App* cmd, skrank::SimulationParams& params) {
  cmd->add_option("--n-events", params.n_events, "Number of events");
  cmd->add_option("--r", params.r, "Fraction of events made uncertain, in [0,1]");
  cmd->add_option("--n-act", params.n_act, "Alternatives per uncertain event (>= 2)");
  cmd->add_option("--beta", params.beta, "Probability skew, in (0, 1.1]");
  cmd->add_option("--alphabet", params.alphabet_size, "Distinct activity labels");
  cmd->add_option("--cases", params.n_cases, "Cases to spread events over");
  cmd->add_option("--seed", params.seed, "RNG seed");
}

int run_simulate(const skrank::SimulationParams& params, const std::string& out_path) {
  skrank::StochasticLog log = skrank::simulate_log(params);
  Sink sink(out_path);
  skrank::write_sk_log(log, sink.stream());

  std::size_t uncertain = 0;
  for (const auto& ev : log.events())
    if (!ev.certain()) ++uncertain;
  std::cerr << "n_events=" << log.size() << " uncertain=" << uncertain
            << " realizations=" << skrank::realization_count(log).to_string()
            << "\n";
  return kExitOk;
}

nlohmann::ordered_json measures_json(const skrank::RankingMeasures& m) {
  nlohmann::ordered_json j;
  j["p_l1"] = m.p_l1;
  j["p_l1_log10"] = m.p_l1_log10;
  j["f_k"] = m.f_k;
  j["f_k_log10"] = m.f_k_log10;
  j["d_avg"] = m.d_avg;
  j["runtime_s"] = m.runtime_s;
  j["k_actual"] = m.k_actual;
  j["exhausted"] = m.exhausted;
  return j;
}

/// Streams the ranking: entries go to the writer as they are produced,
/// measures are accumulated on the fly.
skrank::RankingMeasures rank_streaming(const skrank::StochasticLog& log,
                                       std::uint64_t k,
                                       skrank::RankingWriter* writer) {
  skrank::TopKEnumerator enumerator(log, skrank::TopKOptions{false, k});
  skrank::MeasureAccumulator acc;
  std::uint64_t produced = 0;
  while (produced < k) {
    auto entry = enumerator.next();
    if (!entry) break;
    if (writer) writer->add(*entry);
    acc.add(*entry);
    ++produced;
  }
  return acc.finish(enumerator.stats().wall_seconds, produced < k);
}

int run_rank(const std::string& in_path, std::uint64_t k, const std::string& out_path,
             const std::string& format, bool renormalize) {
  skrank::StochasticLog log = load_input(in_path, renormalize);
  Sink sink(out_path);
  skrank::RankingWriter writer(log, skrank::ranking_format_from_string(format),
                               sink.stream());
  skrank::RankingMeasures m = rank_streaming(log, k, &writer);
  std::cerr << "k_actual=" << m.k_actual << " p_l1=" << m.p_l1 << " f_k=" << m.f_k
            << " d_avg=" << m.d_avg << " runtime_s=" << m.runtime_s
            << " exhausted=" << (m.exhausted ? "true" : "false") << "\n";
  return kExitOk;
}

int run_measure(const std::string& in_path, std::uint64_t k, bool renormalize) {
  skrank::StochasticLog log = load_input(in_path, renormalize);
  skrank::RankingMeasures m = rank_streaming(log, k, nullptr);
  std::cout << measures_json(m).dump() << "\n";
  return kExitOk;
}

int run_sweep(const skrank::SweepSpec& spec, const std::string& out_path) {
  auto rows = skrank::run_sweep(spec);
  Sink sink(out_path);
  skrank::write_sweep_csv(rows, sink.stream());
  std::cerr << "sweep=" << skrank::to_string(spec.param) << " values=" << spec.values.size()
            << " reps=" << spec.reps << "\n";
  return kExitOk;
}

int run_check(const std::string& in_path, const skrank::SimulationParams& params,
              std::uint64_t k, std::uint64_t cap, bool renormalize) {
  skrank::StochasticLog log = in_path.empty() ? skrank::simulate_log(params)
                                              : load_input(in_path, renormalize);

  skrank::TopKResult engine = skrank::top_k(log, k, skrank::TopKOptions{true});
  skrank::TopKResult oracle = skrank::oracle_top_k(log, k, cap);
  std::cerr << "engine_runtime_s=" << engine.stats.wall_seconds
            << " oracle_runtime_s=" << oracle.stats.wall_seconds << " ranks="
            << engine.entries.size() << "\n";

  if (engine.entries.size() != oracle.entries.size()) {
    std::cerr << "mismatch: engine produced " << engine.entries.size()
              << " ranks, oracle " << oracle.entries.size() << "\n";
    return kExitMismatch;
  }
  for (std::size_t i = 0; i < engine.entries.size(); ++i) {
    const auto& a = engine.entries[i].assignment;
    const auto& b = oracle.entries[i].assignment;
    if (a.choices != b.choices || std::abs(a.log_prob - b.log_prob) > 1e-12) {
      std::cerr << "mismatch at rank " << (i + 1) << "\n";
      return kExitMismatch;
    }
  }
  std::cerr << "match\n";
  return kExitOk;
}

std::vector<double> parse_range(const std::string& range) {
  // lo:hi:step, inclusive of hi up to rounding
  auto first = range.find(':');
  auto second = range.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    skrank::raise(skrank::ErrorCode::InvalidParams,
                  "range must be lo:hi:step, got '" + range + "'");
  double lo = std::stod(range.substr(0, first));
  double hi = std::stod(range.substr(first + 1, second - first - 1));
  double step = std::stod(range.substr(second + 1));
  if (!(step > 0.0))
    skrank::raise(skrank::ErrorCode::InvalidParams, "range step must be > 0");
  std::vector<double> values;
  for (double v = lo; v <= hi + step * 1e-9; v += step) values.push_back(v);
  if (values.empty())
    skrank::raise(skrank::ErrorCode::InvalidParams, "empty range");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-K realization ranking for stochastically known event logs"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a stochastically known log");
  skrank::SimulationParams sim_params;
  std::string sim_out;
  add_sim_flags(simulate, sim_params);
  simulate->add_option("-o,--out", sim_out, "Output path (default stdout)");

  // rank
  auto* rank = app.add_subcommand("rank", "Write the top-K ranking of a log");
  std::string rank_in, rank_out, rank_format = "csv";
  std::uint64_t rank_k = 10'000;
  bool rank_renorm = false;
  rank->add_option("input", rank_in, "Input log (JSONL; '-' for stdin)")->required();
  rank->add_option("--k", rank_k, "Number of ranks")->check(CLI::PositiveNumber);
  rank->add_option("-o,--out", rank_out, "Output path (default stdout)");
  rank->add_option("--format", rank_format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  rank->add_flag("--renormalize", rank_renorm, "Rescale per-event probability sums to 1");

  // measure
  auto* measure = app.add_subcommand("measure", "Print ranking measures as JSON");
  std::string measure_in;
  std::uint64_t measure_k = 10'000;
  bool measure_renorm = false;
  measure->add_option("input", measure_in, "Input log (JSONL; '-' for stdin)")->required();
  measure->add_option("--k", measure_k, "Number of ranks")->check(CLI::PositiveNumber);
  measure->add_flag("--renormalize", measure_renorm,
                    "Rescale per-event probability sums to 1");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep with averaged measures");
  skrank::SweepSpec spec;
  std::string sweep_param = "K", sweep_range, sweep_out;
  std::vector<double> sweep_values;
  add_sim_flags(sweep, spec.base);
  sweep->add_option("--sweep", sweep_param, "Swept parameter: K, n_events, r, n_act, beta");
  sweep->add_option("--values", sweep_values, "Comma-separated value list")->delimiter(',');
  sweep->add_option("--range", sweep_range, "lo:hi:step value range");
  sweep->add_option("--k", spec.k, "Ranks per run (fixed unless sweeping K)");
  sweep->add_option("--reps", spec.reps, "Replicates per value")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", spec.jobs, "Worker threads (perturbs runtime_s)");
  sweep->add_option("-o,--out", sweep_out, "Output CSV path (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "Cross-check the engine against the brute-force baseline");
  skrank::SimulationParams check_params;
  std::string check_in;
  std::uint64_t check_k = 100, check_cap = skrank::kDefaultEnumerationCap;
  bool check_renorm = false;
  check->add_option("input", check_in, "Input log (optional; simulates when absent)");
  add_sim_flags(check, check_params);
  check->add_option("--k", check_k, "Number of ranks")->check(CLI::PositiveNumber);
  check->add_option("--cap", check_cap, "Enumeration cap for the baseline");
  check->add_flag("--renormalize", check_renorm, "Rescale per-event probability sums to 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_params, sim_out);
    if (rank->parsed()) return run_rank(rank_in, rank_k, rank_out, rank_format, rank_renorm);
    if (measure->parsed()) return run_measure(measure_in, measure_k, measure_renorm);
    if (sweep->parsed()) {
      spec.param = skrank::sweep_param_from_string(sweep_param);
      spec.base_seed = spec.base.seed;
      if (!sweep_range.empty()) spec.values = parse_range(sweep_range);
      else spec.values = sweep_values;
      if (spec.values.empty())
        skrank::raise(skrank::ErrorCode::InvalidParams,
                      "sweep needs --values or --range");
      return run_sweep(spec, sweep_out);
    }
    if (check->parsed()) return run_check(check_in, check_params, check_k, check_cap, check_renorm);
  } catch (const skrank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
