#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskstream/errors.hpp"
#include "riskstream/event.hpp"
#include "riskstream/harness.hpp"
#include "riskstream/ioutil.hpp"

namespace riskstream {

inline constexpr std::string_view kEventsCsvHeader = "seq,user_id,value,risk,anomaly";
inline constexpr std::string_view kMetricsCsvHeader =
    "method,rate,seed,class,recall,precision_overall,detected,anomalies_total,sampled,events_total";
inline constexpr std::string_view kSummaryCsvHeader =
    "method,rate,class,recall_mean,recall_stderr,precision_mean,precision_stderr,seeds";

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Splits on '\n'; a trailing newline does not produce an empty last line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace detail

inline std::string events_to_csv(std::span<const Event> events) {
  std::string out;
  out.reserve(events.size() * 40 + 64);
  out += kEventsCsvHeader;
  out += '\n';
  for (const Event& e : events) {
    out += std::to_string(e.seq);
    out += ',';
    out += std::to_string(e.user_id);
    out += ',';
    out += format_value17(e.value);
    out += ',';
    out += e.risk == RiskClass::kHigh ? '1' : '0';
    out += ',';
    if (e.label != Label::kUnlabeled) {
      out += e.label == Label::kAnomaly ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

struct LoadedEvents {
  std::vector<Event> events;
  std::uint64_t unlabeled = 0;
};

inline LoadedEvents events_from_csv(std::string_view text, const std::string& name) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != kEventsCsvHeader) {
    throw IoError(name + ":1: expected header '" + std::string(kEventsCsvHeader) + "'");
  }
  LoadedEvents loaded;
  loaded.events.reserve(lines.size() > 0 ? lines.size() - 1 : 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string context = name + ":" + std::to_string(i + 1);
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 5) {
      throw IoError(context + ": expected 5 fields, got " + std::to_string(fields.size()));
    }
    Event e;
    e.seq = parse_u64(fields[0], context);
    e.user_id = parse_u64(fields[1], context);
    e.value = parse_double(fields[2], context);
    if (fields[3] == "1") {
      e.risk = RiskClass::kHigh;
    } else if (fields[3] == "0") {
      e.risk = RiskClass::kLow;
    } else {
      throw IoError(context + ": risk must be 0 or 1, got '" + std::string(fields[3]) + "'");
    }
    if (fields[4] == "1") {
      e.label = Label::kAnomaly;
    } else if (fields[4] == "0") {
      e.label = Label::kNormal;
    } else if (fields[4].empty()) {
      e.label = Label::kUnlabeled;
      loaded.unlabeled += 1;
    } else {
      throw IoError(context + ": anomaly must be 0, 1 or empty, got '" + std::string(fields[4]) +
                    "'");
    }
    loaded.events.push_back(e);
  }
  return loaded;
}

inline void write_events_csv(const std::filesystem::path& path, std::span<const Event> events) {
  atomic_write_file(path, events_to_csv(events));
}

inline LoadedEvents read_events_csv(const std::filesystem::path& path) {
  return events_from_csv(read_file(path), path.filename().string());
}

inline std::string metrics_to_csv(std::span<const MetricsRow> rows) {
  std::string out;
  out += kMetricsCsvHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += to_string(r.method);
    out += ',';
    out += format_double(r.rate);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += to_string(r.risk_class);
    out += ',';
    out += format_double(r.recall);
    out += ',';
    out += format_double(r.precision_overall);
    out += ',';
    out += std::to_string(r.detected);
    out += ',';
    out += std::to_string(r.anomalies_total);
    out += ',';
    out += std::to_string(r.sampled);
    out += ',';
    out += std::to_string(r.events_total);
    out += '\n';
  }
  return out;
}

inline void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows) {
  atomic_write_file(path, metrics_to_csv(rows));
}

inline std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::string out;
  out += kSummaryCsvHeader;
  out += '\n';
  for (const SummaryRow& r : rows) {
    out += to_string(r.method);
    out += ',';
    out += format_double(r.rate);
    out += ',';
    out += to_string(r.risk_class);
    out += ',';
    out += format_double(r.recall_mean);
    out += ',';
    out += format_double(r.recall_stderr);
    out += ',';
    out += format_double(r.precision_mean);
    out += ',';
    out += format_double(r.precision_stderr);
    out += ',';
    out += std::to_string(r.seeds);
    out += '\n';
  }
  return out;
}

inline MetricClass parse_metric_class(std::string_view text, const std::string& context) {
  if (text == "high") return MetricClass::kHigh;
  if (text == "low") return MetricClass::kLow;
  if (text == "all") return MetricClass::kAll;
  throw IoError(context + ": unknown class '" + std::string(text) + "'");
}

inline std::vector<SummaryRow> summary_from_csv(std::string_view text, const std::string& name) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != kSummaryCsvHeader) {
    throw IoError(name + ":1: expected header '" + std::string(kSummaryCsvHeader) + "'");
  }
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string context = name + ":" + std::to_string(i + 1);
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 8) {
      throw IoError(context + ": expected 8 fields, got " + std::to_string(fields.size()));
    }
    SummaryRow r;
    try {
      r.method = parse_policy_kind(fields[0]);
    } catch (const ConfigError& e) {
      throw IoError(context + ": " + e.what());
    }
    r.rate = parse_double(fields[1], context);
    r.risk_class = parse_metric_class(fields[2], context);
    r.recall_mean = parse_double(fields[3], context);
    r.recall_stderr = parse_double(fields[4], context);
    r.precision_mean = parse_double(fields[5], context);
    r.precision_stderr = parse_double(fields[6], context);
    r.seeds = static_cast<std::uint32_t>(parse_u64(fields[7], context));
    rows.push_back(r);
  }
  return rows;
}

inline void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  atomic_write_file(path, summary_to_csv(rows));
}

inline std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  return summary_from_csv(read_file(path), path.filename().string());
}

inline std::string decisions_to_csv(std::span<const DetectionRecord> records) {
  std::string out;
  out += "seq,admitted,flagged\n";
  for (const DetectionRecord& r : records) {
    out += std::to_string(r.seq);
    out += ',';
    out += r.admitted ? '1' : '0';
    out += ',';
    out += r.flagged ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace riskstream
