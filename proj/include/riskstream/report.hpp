#pragma once

#include <algorithm>
#include <cstdio>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "riskstream/errors.hpp"
#include "riskstream/harness.hpp"
#include "riskstream/ioutil.hpp"

namespace riskstream {

struct ReportFiles {
  std::string markdown;  // one recall table per risk class, methods x rates
  std::string plot_csv;  // class,method,rate,recall_mean,recall_stderr
};

// Renders the sweep summary as two per-class recall tables (methods as rows,
// rates as columns, baseline last) plus a plot-ready CSV of the same data.
// Pure function of the summary rows, so regeneration is byte-identical.
inline ReportFiles build_report(std::span<const SummaryRow> summary) {
  std::set<double> rate_set;
  std::set<int> methods_present;
  for (const SummaryRow& row : summary) {
    if (row.method == PolicyKind::kNone) continue;
    rate_set.insert(row.rate);
    methods_present.insert(static_cast<int>(row.method));
  }
  if (rate_set.empty()) {
    throw InputError("report: summary has no per-rate rows");
  }
  const std::vector<double> rates(rate_set.begin(), rate_set.end());

  auto find_row = [&summary](PolicyKind method, double rate, MetricClass cls) -> const SummaryRow* {
    for (const SummaryRow& row : summary) {
      if (row.method == method && row.risk_class == cls &&
          (method == PolicyKind::kNone || row.rate == rate)) {
        return &row;
      }
    }
    return nullptr;
  };

  const bool has_baseline = std::any_of(summary.begin(), summary.end(), [](const SummaryRow& r) {
    return r.method == PolicyKind::kNone;
  });

  std::vector<PolicyKind> methods;
  for (PolicyKind m : {PolicyKind::kVanilla, PolicyKind::kRiskyOnly, PolicyKind::kCombination}) {
    if (methods_present.contains(static_cast<int>(m))) methods.push_back(m);
  }

  char buf[64];
  auto fmt4 = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };

  ReportFiles files;
  files.markdown += "# Sampling sweep summary\n";
  const struct {
    MetricClass cls;
    const char* title;
  } panels[] = {{MetricClass::kLow, "Low-risk anomaly recall"},
                {MetricClass::kHigh, "High-risk anomaly recall"}};
  for (const auto& panel : panels) {
    files.markdown += "\n## ";
    files.markdown += panel.title;
    files.markdown += "\n\n| method |";
    for (double r : rates) {
      files.markdown += " rate ";
      files.markdown += format_double(r);
      files.markdown += " |";
    }
    files.markdown += "\n|---|";
    for (std::size_t i = 0; i < rates.size(); ++i) files.markdown += "---|";
    files.markdown += '\n';
    for (PolicyKind m : methods) {
      files.markdown += "| ";
      files.markdown += to_string(m);
      files.markdown += " |";
      for (double r : rates) {
        const SummaryRow* row = find_row(m, r, panel.cls);
        files.markdown += ' ';
        files.markdown += row ? fmt4(row->recall_mean) : "n/a";
        files.markdown += " |";
      }
      files.markdown += '\n';
    }
    if (has_baseline) {
      files.markdown += "| none (baseline) |";
      const SummaryRow* row = find_row(PolicyKind::kNone, 1.0, panel.cls);
      for (std::size_t i = 0; i < rates.size(); ++i) {
        files.markdown += ' ';
        files.markdown += row ? fmt4(row->recall_mean) : "n/a";
        files.markdown += " |";
      }
      files.markdown += '\n';
    }
  }

  files.plot_csv += "class,method,rate,recall_mean,recall_stderr\n";
  for (const auto& panel : panels) {
    auto emit = [&](PolicyKind m, double rate) {
      const SummaryRow* row = find_row(m, rate, panel.cls);
      if (row == nullptr) return;
      files.plot_csv += to_string(panel.cls);
      files.plot_csv += ',';
      files.plot_csv += to_string(m);
      files.plot_csv += ',';
      files.plot_csv += format_double(row->rate);
      files.plot_csv += ',';
      files.plot_csv += format_double(row->recall_mean);
      files.plot_csv += ',';
      files.plot_csv += format_double(row->recall_stderr);
      files.plot_csv += '\n';
    };
    for (PolicyKind m : methods) {
      for (double r : rates) emit(m, r);
    }
    if (has_baseline) emit(PolicyKind::kNone, 1.0);
  }
  return files;
}

}  // namespace riskstream
