#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "judgekit/error.hpp"
#include "judgekit/io.hpp"
#include "judgekit/pipeline.hpp"
#include "judgekit/report.hpp"
#include "judgekit/synthetic.hpp"

namespace judgekit::cli {

namespace {

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = spdlog::get("judgekit");
  if (!logger) logger = spdlog::stderr_logger_st("judgekit");
  logger->set_pattern("judgekit [%l] %v");
  const char* env = std::getenv("JUDGEKIT_LOG");
  logger->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  return logger;
}

struct Common {
  int scale = 4;
  std::string format = "tsv";
  std::string output;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--scale", c.scale, "Number of ordinal levels K (levels 1..K)")
      ->check(CLI::Range(2, 1000));
  app->add_option("--format", c.format, "Report format: tsv, json or markdown")
      ->check(CLI::IsMember({"tsv", "json", "markdown", "md"}));
  app->add_option("-o,--output", c.output, "Write the report to this file instead of stdout");
}

void emit(const std::string& bytes, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << bytes;
    return;
  }
  std::ofstream file(output, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + output + "'");
  file << bytes;
}

ReportMetadata metadata_for(const std::string& path, const std::string& bytes) {
  ReportMetadata m = base_metadata();
  m.input_digests[std::filesystem::path(path).filename().string()] = digest(bytes);
  return m;
}

std::vector<std::string> metrics_in(const ConsolidatedRatings& c) {
  std::set<std::string> present;
  for (const auto& [key, vote] : c.entries) present.insert(key.metric);
  std::vector<std::string> ordered;
  for (const auto& m : kStandardMetrics) {
    if (present.erase(m)) ordered.push_back(m);
  }
  ordered.insert(ordered.end(), present.begin(), present.end());
  return ordered;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger();
  CLI::App app{"judgekit: reliability and paired-comparison statistics for LLM judge ratings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("judgekit ") + base_metadata().toolkit_version);

  // validate
  Common validate_common;
  std::string validate_path, validate_input = "long-csv";
  auto* validate = app.add_subcommand("validate", "Report diagnostics for a ratings file");
  validate->add_option("ratings", validate_path, "Ratings CSV")->required();
  validate->add_option("--input-format", validate_input, "long-csv or wide-csv")
      ->check(CLI::IsMember({"long-csv", "wide-csv"}));
  add_common(validate, validate_common);

  // judge-eval
  Common judge_common;
  std::string judge_path, judge_input = "long-csv", gold_rater, judge_weights = "identity",
                          judge_difference = "ordinal";
  auto* judge = app.add_subcommand("judge-eval", "Profile each judge column against a gold column");
  judge->add_option("ratings", judge_path, "Ratings CSV holding judge and gold columns")->required();
  judge->add_option("--gold-rater", gold_rater, "Rater id of the gold (human) column")->required();
  judge->add_option("--input-format", judge_input, "long-csv or wide-csv")
      ->check(CLI::IsMember({"long-csv", "wide-csv"}));
  judge->add_option("--weights", judge_weights,
                    "Weights for percent agreement and kappa: identity, linear, quadratic")
      ->check(CLI::IsMember({"identity", "linear", "quadratic"}));
  judge->add_option("--alpha-difference", judge_difference, "nominal, ordinal or interval")
      ->check(CLI::IsMember({"nominal", "ordinal", "interval"}));
  add_common(judge, judge_common);

  // compare
  Common compare_common;
  std::string compare_path, runs_format = "run-jsonl", system_a, system_b, metrics_text,
                            correction = "bh", pooling = "pooled", zero_policy = "drop",
                            tie_policy = "lower";
  double alpha = 0.05;
  std::vector<std::string> polarity_overrides;
  auto* compare = app.add_subcommand("compare", "Paired Wilcoxon comparison of two systems");
  compare->add_option("runs", compare_path, "Run records file")->required();
  compare->add_option("--runs-format", runs_format, "run-jsonl or run-csv")
      ->check(CLI::IsMember({"run-jsonl", "run-csv"}));
  compare->add_option("--system-a", system_a, "Baseline system id")->required();
  compare->add_option("--system-b", system_b, "Candidate system id")->required();
  compare->add_option("--metrics", metrics_text, "Comma-separated metrics (default: all present)");
  compare->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(1e-12, 0.999999));
  compare->add_option("--correction", correction, "bonferroni, holm or bh")
      ->check(CLI::IsMember({"bonferroni", "holm", "bh"}));
  compare->add_option("--pooling", pooling, "pooled or per-direction")
      ->check(CLI::IsMember({"pooled", "per-direction"}));
  compare->add_option("--zero-policy", zero_policy, "drop or pratt")
      ->check(CLI::IsMember({"drop", "pratt"}));
  compare->add_option("--tie-policy", tie_policy, "Majority-vote tie policy")
      ->check(CLI::IsMember({"lower"}));
  compare->add_option("--polarity", polarity_overrides,
                      "Metric polarity override, METRIC=higher or METRIC=lower");
  add_common(compare, compare_common);

  // describe
  Common describe_common;
  std::string describe_path, describe_format = "run-jsonl", describe_system;
  auto* describe = app.add_subcommand("describe", "Per-metric distribution and skewness table");
  describe->add_option("runs", describe_path, "Run records file")->required();
  describe->add_option("--runs-format", describe_format, "run-jsonl or run-csv")
      ->check(CLI::IsMember({"run-jsonl", "run-csv"}));
  describe->add_option("--system", describe_system, "Restrict to one system");
  add_common(describe, describe_common);

  // sweep-prevalence
  Common sweep_common;
  std::string shares_text = "0.55,0.65,0.75,0.85,0.95";
  double sweep_observed = 0.90;
  int sweep_items = 100;
  auto* sweep = app.add_subcommand("sweep-prevalence",
                                   "Kappa, alpha and AC across dominant-category shares");
  sweep->add_option("--shares", shares_text, "Comma-separated dominant-category shares");
  sweep->add_option("--observed-agreement", sweep_observed, "Fixed observed agreement");
  sweep->add_option("--items", sweep_items, "Items per constructed matrix");
  add_common(sweep, sweep_common);

  // gen-synthetic
  SyntheticOptions synth;
  std::string synth_output, synth_format = "run-jsonl";
  auto* gen = app.add_subcommand("gen-synthetic", "Write a seeded synthetic run dataset");
  gen->add_option("--seed", synth.seed, "Generator seed");
  gen->add_option("--queries", synth.queries, "Number of queries");
  gen->add_option("--runs", synth.runs, "Runs per query, system and metric");
  gen->add_option("--scale", synth.k, "Number of ordinal levels K")->check(CLI::Range(2, 1000));
  gen->add_option("--runs-format", synth_format, "run-jsonl or run-csv")
      ->check(CLI::IsMember({"run-jsonl", "run-csv"}));
  gen->add_option("-o,--output", synth_output, "Write the dataset to this file");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*validate) {
      const std::string bytes = read_file(validate_path);
      const RatingsMatrix m =
          parse_ratings_text(bytes, parse_ratings_format(validate_input),
                             OrdinalScale::levels(validate_common.scale), validate_path);
      const Diagnostics d = validate_matrix(m);
      emit(render_report(diagnostics_document(d, m, metadata_for(validate_path, bytes)),
                         parse_render_style(validate_common.format)),
           validate_common.output, out);
      return d.ok() ? 0 : 2;
    }

    if (*judge) {
      const std::string bytes = read_file(judge_path);
      const RatingsMatrix m = parse_ratings_text(bytes, parse_ratings_format(judge_input),
                                                 OrdinalScale::levels(judge_common.scale), judge_path);
      log->info("parsed {} items x {} raters", m.n_items(), m.n_raters());
      ProfileOptions options;
      options.agreement_weights = parse_weight_scheme(judge_weights);
      options.alpha_difference = parse_difference(judge_difference);
      const JudgeReport report = evaluate_judges(m, gold_rater, options);
      ReportMetadata meta = metadata_for(judge_path, bytes);
      meta.decisions = {{"gold_rater", gold_rater},
                        {"scale", std::to_string(judge_common.scale)},
                        {"agreement_weights", judge_weights},
                        {"alpha_difference", judge_difference},
                        {"ac_marginals", "item-averaged over co-rated items"},
                        {"kendall", "tau-b"},
                        {"rank_correlations", "pooled over paired items"}};
      emit(render_report(judge_report_document(report, std::move(meta)),
                         parse_render_style(judge_common.format)),
           judge_common.output, out);
      return 0;
    }

    if (*compare) {
      const std::string bytes = read_file(compare_path);
      const std::vector<RunRecord> records =
          parse_runs_text(bytes, parse_runs_format(runs_format), compare_common.scale, compare_path);
      log->info("parsed {} run records", records.size());
      const ConsolidatedRatings consolidated = consolidate_runs(records, TiePolicy::Lower);
      CompareOptions options;
      options.alpha = alpha;
      options.correction = parse_correction(correction);
      options.pooling = parse_pooling(pooling);
      options.zero_policy = parse_zero_policy(zero_policy);
      for (const auto& entry : polarity_overrides) {
        const auto eq = entry.rfind('=');
        const std::string value = eq == std::string::npos ? "" : entry.substr(eq + 1);
        if (value != "higher" && value != "lower") {
          throw Error(ErrorKind::InvalidArgument,
                      "--polarity expects METRIC=higher or METRIC=lower, got '" + entry + "'");
        }
        options.polarity[entry.substr(0, eq)] =
            value == "higher" ? Polarity::HigherIsBetter : Polarity::LowerIsBetter;
      }
      const std::vector<std::string> metrics =
          metrics_text.empty() ? metrics_in(consolidated) : split_list(metrics_text);
      const ComparisonReport report =
          compare_systems(consolidated, system_a, system_b, metrics, options);
      ReportMetadata meta = metadata_for(compare_path, bytes);
      meta.decisions = {{"tie_policy", tie_policy}, {"scale", std::to_string(compare_common.scale)}};
      emit(render_report(comparison_report_document(report, std::move(meta)),
                         parse_render_style(compare_common.format)),
           compare_common.output, out);
      return 0;
    }

    if (*describe) {
      const std::string bytes = read_file(describe_path);
      const std::vector<RunRecord> records = parse_runs_text(
          bytes, parse_runs_format(describe_format), describe_common.scale, describe_path);
      const ConsolidatedRatings consolidated = consolidate_runs(records, TiePolicy::Lower);
      const std::optional<std::string> system =
          describe_system.empty() ? std::nullopt : std::optional<std::string>(describe_system);
      emit(render_report(skewness_document(consolidated, describe_common.scale,
                                           metrics_in(consolidated), system,
                                           metadata_for(describe_path, bytes)),
                         parse_render_style(describe_common.format)),
           describe_common.output, out);
      return 0;
    }

    if (*sweep) {
      std::vector<double> shares;
      for (const auto& s : split_list(shares_text)) {
        try {
          std::size_t used = 0;
          shares.push_back(std::stod(s, &used));
          if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidArgument, "share '" + s + "' is not a number");
        }
      }
      const auto rows = prevalence_sweep(shares, sweep_observed, sweep_items);
      ReportMetadata meta = base_metadata();
      meta.decisions = {{"observed_agreement", std::to_string(sweep_observed)},
                        {"items", std::to_string(sweep_items)}};
      emit(render_report(sweep_document(rows, std::move(meta)),
                         parse_render_style(sweep_common.format)),
           sweep_common.output, out);
      return 0;
    }

    if (*gen) {
      const auto records = generate_synthetic_runs(synth);
      log->info("generated {} run records (seed {})", records.size(), synth.seed);
      emit(write_runs(records, parse_runs_format(synth_format)), synth_output, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return 1;
}

}  // namespace judgekit::cli
