#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skrank/errors.hpp"
#include "skrank/metrics.hpp"
#include "skrank/model.hpp"
#include "skrank/ranking.hpp"

namespace skrank {

namespace detail {

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Fixed-width general formatting for the sweep tables: deterministic,
/// locale-independent, 12 significant digits.
inline std::string format_double_12(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

[[noreturn]] inline void syntax_error(std::size_t line, const std::string& what) {
  raise(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Stochastically known log interchange format: JSON Lines, UTF-8, one
// event object per line:
//
//   {"event_id": "e2", "case_id": "c1", "timestamp": 2,
//    "activities": [{"label": "L", "p": 0.7}, {"label": "S", "p": 0.3}]}
//
// timestamp is an integer or an RFC3339 string. Probabilities are
// written in shortest round-trip form, so parse(write(log)) reproduces
// the log exactly. Unknown keys are ignored on input.
// ---------------------------------------------------------------------------

struct ParseOptions {
  bool renormalize = false;
};

inline StochasticLog parse_sk_log(std::istream& in, const ParseOptions& options = {}) {
  std::vector<RawEvent> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      detail::syntax_error(line_no, e.what());
    }
    if (!j.is_object()) detail::syntax_error(line_no, "expected a JSON object");

    RawEvent ev;
    if (!j.contains("event_id") || !j["event_id"].is_string())
      detail::syntax_error(line_no, "missing or non-string 'event_id'");
    ev.event_id = j["event_id"].get<std::string>();
    if (!j.contains("case_id") || !j["case_id"].is_string())
      detail::syntax_error(line_no, "missing or non-string 'case_id'");
    ev.case_id = j["case_id"].get<std::string>();

    if (!j.contains("timestamp"))
      detail::syntax_error(line_no, "missing 'timestamp'");
    const auto& ts = j["timestamp"];
    if (ts.is_number_integer())
      ev.timestamp = ts.get<std::int64_t>();
    else if (ts.is_string())
      ev.timestamp = ts.get<std::string>();
    else
      detail::syntax_error(line_no, "'timestamp' must be an integer or a string");

    if (!j.contains("activities") || !j["activities"].is_array())
      detail::syntax_error(line_no, "missing or non-array 'activities'");
    for (const auto& a : j["activities"]) {
      if (!a.is_object() || !a.contains("label") || !a["label"].is_string() ||
          !a.contains("p") || !a["p"].is_number())
        detail::syntax_error(line_no, "each activity needs a string 'label' and a numeric 'p'");
      ev.alternatives.push_back({a["label"].get<std::string>(), a["p"].get<double>()});
    }
    raw.push_back(std::move(ev));
  }
  if (raw.empty()) raise(ErrorCode::EmptyLog, "no events in input");
  return validate_log(std::move(raw), ValidateOptions{options.renormalize, 1e-6});
}

inline StochasticLog load_sk_log(const std::string& path, const ParseOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return parse_sk_log(in, options);
}

inline std::uint64_t write_sk_log(const StochasticLog& log, std::ostream& out) {
  std::uint64_t bytes = 0;
  for (const auto& ev : log.events()) {
    nlohmann::ordered_json j;
    j["event_id"] = ev.event_id;
    j["case_id"] = ev.case_id;
    if (std::holds_alternative<std::int64_t>(ev.timestamp))
      j["timestamp"] = std::get<std::int64_t>(ev.timestamp);
    else
      j["timestamp"] = std::get<std::string>(ev.timestamp);
    auto acts = nlohmann::ordered_json::array();
    for (const auto& alt : ev.alternatives)
      acts.push_back({{"label", alt.label}, {"p", alt.p}});
    j["activities"] = std::move(acts);
    std::string line = j.dump();
    out << line << '\n';
    bytes += line.size() + 1;
  }
  if (!out) raise(ErrorCode::IoError, "write failed");
  return bytes;
}

inline std::uint64_t save_sk_log(const StochasticLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return write_sk_log(log, out);
}

// ---------------------------------------------------------------------------
// Ranking output. The rank-1 row carries the full realization as
// event_id=label pairs; every later row carries only the pairs that
// differ from rank 1 (neighbouring ranks differ in a handful of choices,
// so deltas keep large-K files tractable).
//
// CSV columns: rank,log10_probability,probability,cumulative_probability,
//              dist_to_top1,assignment,delta
// JSONL mirrors the same fields, with assignment/delta as objects.
// ---------------------------------------------------------------------------

enum class RankingFormat { csv, jsonl };

inline RankingFormat ranking_format_from_string(std::string_view s) {
  if (s == "csv") return RankingFormat::csv;
  if (s == "jsonl") return RankingFormat::jsonl;
  raise(ErrorCode::InvalidParams, "unknown format '" + std::string(s) + "'");
}

/// Streaming writer: feed entries in rank order. Used directly by the
/// CLI so rankings never have to be buffered.
class RankingWriter {
 public:
  RankingWriter(const StochasticLog& log, RankingFormat format, std::ostream& out)
      : log_(&log), format_(format), out_(&out) {
    if (format_ == RankingFormat::csv) {
      write_line(
          "rank,log10_probability,probability,cumulative_probability,"
          "dist_to_top1,assignment,delta");
    }
  }

  void add(const RankingEntry& entry) {
    if (entry.rank == 1) top1_ = entry.assignment.choices;
    double log10_p = entry.log_prob() / std::numbers::ln10;
    if (format_ == RankingFormat::csv) {
      std::string row = std::to_string(entry.rank);
      row += ',';
      row += detail::format_double(log10_p);
      row += ',';
      row += detail::format_double(entry.probability);
      row += ',';
      row += detail::format_double(entry.cumulative_prob);
      row += ',';
      row += std::to_string(entry.dist_to_top1);
      row += ',';
      row += detail::csv_escape(entry.rank == 1 ? pairs_string(entry, false) : "");
      row += ',';
      row += detail::csv_escape(entry.rank == 1 ? "" : pairs_string(entry, true));
      write_line(row);
    } else {
      nlohmann::ordered_json j;
      j["rank"] = entry.rank;
      j["log10_probability"] = log10_p;
      j["probability"] = entry.probability;
      j["cumulative_probability"] = entry.cumulative_prob;
      j["dist_to_top1"] = entry.dist_to_top1;
      if (entry.rank == 1)
        j["assignment"] = pairs_json(entry, false);
      else
        j["delta"] = pairs_json(entry, true);
      write_line(j.dump());
    }
  }

  std::uint64_t bytes_written() const { return bytes_; }

 private:
  std::string pairs_string(const RankingEntry& entry, bool delta_only) const {
    std::string out;
    for (std::size_t i = 0; i < entry.assignment.choices.size(); ++i) {
      if (delta_only && entry.assignment.choices[i] == top1_[i]) continue;
      const auto& ev = log_->event(i);
      if (!out.empty()) out += ';';
      out += ev.event_id;
      out += '=';
      out += ev.alternatives[entry.assignment.choices[i]].label;
    }
    return out;
  }

  nlohmann::ordered_json pairs_json(const RankingEntry& entry, bool delta_only) const {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < entry.assignment.choices.size(); ++i) {
      if (delta_only && entry.assignment.choices[i] == top1_[i]) continue;
      const auto& ev = log_->event(i);
      obj[ev.event_id] = ev.alternatives[entry.assignment.choices[i]].label;
    }
    return obj;
  }

  void write_line(const std::string& line) {
    *out_ << line << '\n';
    if (!*out_) raise(ErrorCode::IoError, "write failed");
    bytes_ += line.size() + 1;
  }

  const StochasticLog* log_;
  RankingFormat format_;
  std::ostream* out_;
  std::vector<std::uint32_t> top1_;
  std::uint64_t bytes_ = 0;
};

inline std::uint64_t write_ranking(const StochasticLog& log, const TopKResult& result,
                                   RankingFormat format, std::ostream& out) {
  if (result.entries.empty())
    raise(ErrorCode::InvalidParams, "cannot write an empty ranking");
  RankingWriter writer(log, format, out);
  for (const auto& entry : result.entries) writer.add(entry);
  return writer.bytes_written();
}

// ---------------------------------------------------------------------------
// Sweep tables: one CSV row of averaged measures per swept value.
// ---------------------------------------------------------------------------

struct SweepRow {
  std::string param;      // swept parameter name
  double value = 0.0;     // its value for this row
  bool value_is_integral = false;
  RankingMeasures mean;   // measures averaged over the replicates
  std::uint32_t reps = 0;
};

inline std::uint64_t write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  std::uint64_t bytes = 0;
  auto emit = [&](const std::string& line) {
    out << line << '\n';
    if (!out) raise(ErrorCode::IoError, "write failed");
    bytes += line.size() + 1;
  };
  emit("param,value,p_l1_log10,f_k,f_k_log10,runtime_s,d_avg,reps");
  for (const auto& row : rows) {
    std::string line = row.param;
    line += ',';
    line += row.value_is_integral
                ? std::to_string(static_cast<std::int64_t>(row.value))
                : detail::format_double_12(row.value);
    line += ',';
    line += detail::format_double_12(row.mean.p_l1_log10);
    line += ',';
    line += detail::format_double_12(row.mean.f_k);
    line += ',';
    line += detail::format_double_12(row.mean.f_k_log10);
    line += ',';
    line += detail::format_double_12(row.mean.runtime_s);
    line += ',';
    line += detail::format_double_12(row.mean.d_avg);
    line += ',';
    line += std::to_string(row.reps);
    emit(line);
  }
  return bytes;
}

}  // namespace skrank
