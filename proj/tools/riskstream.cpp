// Command-line front end: generate, run, sweep, bench, report.
//
// Exit codes: 0 success (and all ordering assertions hold), 1 ordering
// assertion failure, 2 usage or configuration error, 3 I/O or parse error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskstream/bench.hpp"
#include "riskstream/config.hpp"
#include "riskstream/csv.hpp"
#include "riskstream/detector.hpp"
#include "riskstream/errors.hpp"
#include "riskstream/event.hpp"
#include "riskstream/generator.hpp"
#include "riskstream/harness.hpp"
#include "riskstream/ioutil.hpp"
#include "riskstream/manifest.hpp"
#include "riskstream/report.hpp"
#include "riskstream/version.hpp"

namespace fs = std::filesystem;
using namespace riskstream;

namespace {

fs::path output_directory(const fs::path& output_file) {
  const fs::path dir = output_file.parent_path();
  return dir.empty() ? fs::path(".") : dir;
}

void require_parent_writable(const fs::path& output_file) {
  const fs::path dir = output_directory(output_file);
  if (!fs::exists(dir)) {
    throw IoError("output directory does not exist: " + dir.string());
  }
}

struct GenerateArgs {
  GeneratorConfig config;
  std::optional<double> target_recall;
  std::string output = "events.csv";
};

int cmd_generate(const GenerateArgs& args) {
  GeneratorConfig config = args.config;
  if (args.target_recall) {
    config.delta = calibrate_delta(*args.target_recall);
  }
  config.validate();
  const fs::path out(args.output);
  require_parent_writable(out);

  const std::vector<UserProfile> profiles = build_population(config);
  const std::vector<Event> events = generate_stream(profiles, config);

  std::uint64_t anomalies = 0;
  std::uint64_t high = 0;
  for (const Event& e : events) {
    anomalies += e.is_anomaly() ? 1 : 0;
    high += e.risk == RiskClass::kHigh ? 1 : 0;
  }

  write_events_csv(out, events);

  nlohmann::json manifest = manifest_base("generate");
  manifest["config"] = to_json(config);
  manifest["seeds"] = {config.seed};
  manifest["totals"] = {{"events", events.size()},
                        {"anomalies", anomalies},
                        {"high_risk", high},
                        {"stream_fnv1a64", stream_checksum(events)}};
  manifest["outputs"] = {{out.filename().string(), file_stamp(out)}};
  write_manifest(output_directory(out), manifest);

  std::printf("wrote %s (%zu events, %llu anomalies, %llu high-risk)\n", out.string().c_str(),
              events.size(), static_cast<unsigned long long>(anomalies),
              static_cast<unsigned long long>(high));
  return 0;
}

struct RunArgs {
  std::string input;
  std::string method = "vanilla";
  double rate = 0.2;
  double posterior_high = 0.8;
  double prior_high = 0.3;
  bool adaptive_prior = false;
  std::uint64_t seed = 0;
  DetectorConfig detector;
  std::string output = "metrics.csv";
  std::string decisions;  // optional per-event decision dump
};

int cmd_run(const RunArgs& args) {
  const PolicyKind kind = parse_policy_kind(args.method);
  SamplingPolicy policy{kind, kind == PolicyKind::kNone ? 1.0 : args.rate, args.posterior_high,
                        args.prior_high};
  policy.validate();
  args.detector.validate();
  const fs::path out(args.output);
  require_parent_writable(out);

  const LoadedEvents loaded = read_events_csv(args.input);
  const StreamValidation validation = validate_stream(loaded.events);
  if (!validation.ok) {
    std::string message = args.input + ": malformed stream:";
    for (const StreamViolation& v : validation.violations) {
      message += "\n  position " + std::to_string(v.position) + ": " + v.message;
    }
    throw InputError(message);
  }

  DetectionPipeline pipeline(policy, args.detector, args.seed, args.adaptive_prior);
  std::vector<DetectionRecord> records;
  records.reserve(loaded.events.size());
  std::uint64_t admitted_high = 0;
  std::uint64_t admitted = 0;
  for (const Event& e : loaded.events) {
    const DetectionRecord r = pipeline.step(e);
    if (r.admitted) {
      admitted += 1;
      admitted_high += e.risk == RiskClass::kHigh ? 1 : 0;
    }
    records.push_back(r);
  }

  const std::vector<MetricsRow> rows =
      evaluate_trial(loaded.events, records, kind, policy.rate, args.seed);
  write_metrics_csv(out, rows);
  if (!args.decisions.empty()) {
    atomic_write_file(args.decisions, decisions_to_csv(records));
  }

  nlohmann::json manifest = manifest_base("run");
  manifest["config"] = {{"detector", to_json(args.detector)},
                        {"policy", to_json(policy, pipeline.probabilities())},
                        {"adaptive_prior", args.adaptive_prior},
                        {"seed", args.seed}};
  manifest["seeds"] = {args.seed};
  manifest["inputs"] = {{fs::path(args.input).filename().string(), file_stamp(args.input)}};
  manifest["realized"] = {
      {"events", loaded.events.size()},
      {"admitted", admitted},
      {"rate", loaded.events.empty()
                   ? 0.0
                   : static_cast<double>(admitted) / static_cast<double>(loaded.events.size())},
      {"posterior_high",
       admitted > 0 ? static_cast<double>(admitted_high) / static_cast<double>(admitted) : 0.0}};
  manifest["labels"] =
      loaded.unlabeled == 0
          ? nlohmann::json{{"status", "complete"}}
          : nlohmann::json{{"status", "unlabeled-partial"}, {"unlabeled", loaded.unlabeled}};
  manifest["outputs"] = {{out.filename().string(), file_stamp(out)}};
  if (!args.decisions.empty()) {
    manifest["outputs"][fs::path(args.decisions).filename().string()] = file_stamp(args.decisions);
  }
  write_manifest(output_directory(out), manifest);

  if (loaded.unlabeled > 0) {
    std::printf("note: %llu rows lack ground truth; metrics are unlabeled-partial\n",
                static_cast<unsigned long long>(loaded.unlabeled));
  }
  std::printf("%s", metrics_to_csv(rows).c_str());
  return 0;
}

struct SweepArgs {
  std::string config_path;
  std::string output = "sweep_results";
};

int cmd_sweep(const SweepArgs& args) {
  std::string config_path = args.config_path;
  if (config_path.empty()) {
    if (const char* env = std::getenv("RISKSTREAM_CONFIG")) config_path = env;
  }
  SweepConfig config;
  if (!config_path.empty()) {
    config = parse_sweep_config(read_file(config_path));
  }
  config.validate();

  const fs::path dir(args.output);
  fs::create_directories(dir);

  const SweepResult result = run_sweep(config);
  const OrderingReport orderings = check_orderings(result.summary);

  write_metrics_csv(dir / "trials.csv", result.trials);
  write_summary_csv(dir / "summary.csv", result.summary);
  atomic_write_file(dir / "orderings.txt", orderings.render());

  nlohmann::json manifest = manifest_base("sweep");
  nlohmann::json methods = nlohmann::json::array();
  for (PolicyKind m : config.methods) methods.push_back(to_string(m));
  manifest["config"] = {{"generator", to_json(config.generator)},
                        {"detector", to_json(config.detector)},
                        {"methods", methods},
                        {"rates", config.rates},
                        {"posterior_high", config.posterior_high},
                        {"seeds", config.seeds},
                        {"include_baseline", config.include_baseline}};
  manifest["seeds"] = config.seeds;
  nlohmann::json checksums = nlohmann::json::object();
  for (const auto& [seed, digest] : result.stream_checksums) {
    checksums[std::to_string(seed)] = digest;
  }
  manifest["stream_fnv1a64"] = checksums;

  // Realized admission per trial, so posterior drift under clipping is visible.
  nlohmann::json realized = nlohmann::json::array();
  for (std::size_t i = 0; i + 2 < result.trials.size(); i += 3) {
    const MetricsRow& high = result.trials[i];
    const MetricsRow& low = result.trials[i + 1];
    const std::uint64_t admitted = high.sampled + low.sampled;
    const std::uint64_t events = high.events_total + low.events_total;
    realized.push_back(
        {{"method", to_string(high.method)},
         {"rate", high.rate},
         {"seed", high.seed},
         {"admitted", admitted},
         {"realized_rate",
          events > 0 ? static_cast<double>(admitted) / static_cast<double>(events) : 0.0},
         {"realized_posterior_high",
          admitted > 0 ? static_cast<double>(high.sampled) / static_cast<double>(admitted) : 0.0}});
  }
  manifest["realized"] = realized;
  manifest["outputs"] = {{"trials.csv", file_stamp(dir / "trials.csv")},
                         {"summary.csv", file_stamp(dir / "summary.csv")},
                         {"orderings.txt", file_stamp(dir / "orderings.txt")}};
  write_manifest(dir, manifest);

  std::printf("%s", orderings.render().c_str());
  std::printf("results in %s\n", dir.string().c_str());
  return orderings.all_pass ? 0 : 1;
}

struct BenchArgs {
  BenchConfig config;
  std::string method = "combination";
};

int cmd_bench(const BenchArgs& args) {
  BenchConfig config = args.config;
  config.policy.kind = parse_policy_kind(args.method);
  config.policy.validate();
  const BenchResult result = run_bench(config);
  std::printf("%s", result.render().c_str());
  return 0;
}

struct ReportArgs {
  std::string results;
  std::string output;
  std::string plot;
};

int cmd_report(const ReportArgs& args) {
  const fs::path dir(args.results);
  const std::vector<SummaryRow> summary = read_summary_csv(dir / "summary.csv");
  const ReportFiles files = build_report(summary);
  const fs::path md = args.output.empty() ? dir / "report.md" : fs::path(args.output);
  const fs::path plot = args.plot.empty() ? dir / "report_plot.csv" : fs::path(args.plot);
  atomic_write_file(md, files.markdown);
  atomic_write_file(plot, files.plot_csv);
  std::printf("%s", files.markdown.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk-aware stream sampling and per-user anomaly detection"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  int exit_code = 0;

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "synthesize a labeled event stream CSV");
  generate->add_option("--users", gen.config.n_users, "number of simulated users");
  generate->add_option("--obs-per-user", gen.config.obs_per_user, "observations per user");
  generate->add_option("--anomaly-rate", gen.config.anomaly_rate, "per-event anomaly probability");
  generate->add_option("--risk-prior", gen.config.risk_prior_high, "P(risk = high) per event");
  generate->add_option("--delta", gen.config.delta, "anomaly mean shift in user sigmas");
  generate->add_option("--target-recall", gen.target_recall,
                       "derive delta from an idealized full-data recall target");
  generate->add_option("--mu-min", gen.config.mu_range.first, "user mean range, low end");
  generate->add_option("--mu-max", gen.config.mu_range.second, "user mean range, high end");
  generate->add_option("--sigma-min", gen.config.sigma_range.first, "user sigma range, low end");
  generate->add_option("--sigma-max", gen.config.sigma_range.second, "user sigma range, high end");
  generate->add_option("--seed", gen.config.seed, "generator seed");
  generate
      ->add_option_function<std::string>(
          "--activity",
          [&gen](const std::string& v) {
            if (v == "uniform") {
              gen.config.activity = ActivityMode::kUniform;
            } else if (v == "heavy_tail") {
              gen.config.activity = ActivityMode::kHeavyTail;
            } else {
              throw CLI::ValidationError("--activity", "expected uniform or heavy_tail");
            }
          },
          "per-user activity distribution: uniform or heavy_tail")
      ->type_name("MODE");
  generate->add_option("-o,--output", gen.output, "output CSV path")->capture_default_str();
  generate->callback([&] { exit_code = cmd_generate(gen); });

  RunArgs run;
  CLI::App* runc = app.add_subcommand("run", "run one sampling policy + detector over a stream");
  runc->add_option("--input", run.input, "events CSV")->required();
  runc->add_option("--method", run.method, "vanilla | risky_only | combination | none")
      ->required();
  runc->add_option("--rate", run.rate, "target admitted fraction");
  runc->add_option("--posterior-high", run.posterior_high, "target HIGH share of the sample");
  runc->add_option("--prior-high", run.prior_high, "assumed HIGH share of the stream");
  runc->add_flag("--adaptive-prior", run.adaptive_prior,
                 "estimate the prior from the stream instead of --prior-high");
  runc->add_option("--seed", run.seed, "admission seed");
  runc->add_option("--k-sigma", run.detector.k_sigma, "flag threshold in standard deviations");
  runc->add_option("--n-min", run.detector.n_min, "observations required before flagging");
  runc->add_option("--sigma-floor", run.detector.sigma_floor, "degenerate-variance floor");
  runc->add_option("-o,--output", run.output, "metrics CSV path")->capture_default_str();
  runc->add_option("--decisions", run.decisions, "optional per-event decisions CSV path");
  runc->callback([&] { exit_code = cmd_run(run); });

  SweepArgs sweep;
  CLI::App* sweepc = app.add_subcommand("sweep", "methods x rates x seeds experiment grid");
  sweepc->add_option("--config", sweep.config_path,
                     "flat key=value config (default: $RISKSTREAM_CONFIG, else built-ins)");
  sweepc->add_option("-o,--output", sweep.output, "results directory")->capture_default_str();
  sweepc->callback([&] { exit_code = cmd_sweep(sweep); });

  BenchArgs bench;
  CLI::App* benchc = app.add_subcommand("bench", "in-memory throughput benchmark");
  benchc->add_option("--events", bench.config.events, "events to push through the pipeline");
  benchc->add_option("--obs-per-user", bench.config.obs_per_user, "observations per user");
  benchc->add_option("--method", bench.method, "sampling policy for the timed pipeline");
  benchc->add_option("--rate", bench.config.policy.rate, "target admitted fraction");
  benchc->add_option("--posterior-high", bench.config.policy.posterior_high,
                     "target HIGH share of the sample");
  benchc->add_option("--prior-high", bench.config.policy.prior_high,
                     "assumed HIGH share of the stream");
  benchc->add_option("--seed", bench.config.seed, "seed");
  benchc->callback([&] { exit_code = cmd_bench(bench); });

  ReportArgs report;
  CLI::App* reportc = app.add_subcommand("report", "render sweep results as markdown + plot CSV");
  reportc->add_option("--results", report.results, "sweep results directory")->required();
  reportc->add_option("-o,--output", report.output, "markdown path (default <results>/report.md)");
  reportc->add_option("--plot", report.plot,
                      "plot CSV path (default <results>/report_plot.csv)");
  reportc->callback([&] { exit_code = cmd_report(report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return exit_code;
}
