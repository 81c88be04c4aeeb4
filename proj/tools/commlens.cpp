// Command-line front end: generate synthetic corpora, analyze message
// archives into metric tables, run the satisfaction statistics, and emit
// scorecards. Stages hand off through files so any step can be re-run or
// audited in isolation.

#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commlens/io.hpp"
#include "commlens/pipeline.hpp"
#include "commlens/simgen.hpp"

namespace {

using commlens::NormScope;
using commlens::RunConfig;

void add_analysis_flags(CLI::App* cmd, RunConfig& config, std::string& salt) {
  cmd->add_option("--window-days", config.window_days, "Oscillation window length in days")
      ->capture_default_str();
  cmd->add_option("--step-days", config.step_days, "Window step in days")
      ->capture_default_str();
  cmd->add_option("--reply-cap-days", config.reply_cap_days,
                  "Longest latency accepted as a reply")
      ->capture_default_str();
  cmd->add_flag("--strict-threading", config.strict_threading,
                "Match replies by in_reply_to headers only");
  cmd->add_flag("--exclude-cc{false},--include-cc{true}", config.include_cc,
                "Count cc recipients toward arcs (default: include)");
  cmd->add_flag("--art-both-directions", config.art_both_directions,
                "Average response time over all responders, not only members");
  cmd->add_option("--salt", salt, "Anonymize addresses with this salt");
  cmd->add_option("--jobs", config.jobs, "Worker threads for per-account analysis")
      ->capture_default_str();
  cmd->add_flag("--export-dichotomized", config.export_dichotomized,
                "Export binary network files");
  cmd->add_flag("--export-symmetrized", config.export_symmetrized,
                "Export symmetrized network files");
}

void add_scope_option(CLI::App* cmd, NormScope& scope) {
  static const std::map<std::string, NormScope> names{{"period", NormScope::period},
                                                      {"account", NormScope::account},
                                                      {"global", NormScope::global}};
  cmd->add_option("--norm-scope", scope, "Scorecard normalization scope")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case))
      ->default_str("period");
}

void run_analyze(RunConfig& config, const std::string& salt) {
  if (!salt.empty()) config.salt = salt;
  const auto result = commlens::analyze(config);
  commlens::write_analysis(result, config);
  std::fprintf(stderr, "analyze: %zu messages, %zu rejects, %zu records -> %s\n",
               result.messages_parsed, result.rejects.size(), result.records.size(),
               config.out_dir.c_str());
}

void run_stats(const RunConfig& config, const std::string& metrics_path) {
  const auto records = commlens::load_metric_records_file(metrics_path);
  const auto survey = commlens::load_nps_file(config.nps_path);
  const auto rosters = commlens::load_rosters_file(config.roster_path);
  const auto periods = commlens::load_periods_file(config.periods_path);
  const auto report =
      commlens::compute_stats(records, survey, rosters, periods, config.reml);
  commlens::write_stats(report, config);
  std::fprintf(stderr, "stats: %zu panel rows over %zu groups -> %s\n", report.panel_rows,
               report.panel_groups, config.out_dir.c_str());
}

void run_score(const RunConfig& config, const std::string& metrics_path) {
  const auto records = commlens::load_metric_records_file(metrics_path);
  const auto cards =
      commlens::score_records(records, config.norm_scope, config.remedy_threshold);
  commlens::write_scorecards(cards, config);
  std::fprintf(stderr, "score: %zu scorecards -> %s\n", cards.size(), config.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaboration metrics from e-mail metadata"};
  app.require_subcommand(1);

  RunConfig config;
  std::string salt;
  std::string metrics_path;

  // generate
  commlens::ScenarioConfig scenario;
  std::string scenario_path;
  std::string gen_out = "data";
  auto* generate = app.add_subcommand("generate", "Emit a synthetic corpus with ground truth");
  generate->add_option("--seed", scenario.seed, "Deterministic seed")->capture_default_str();
  generate->add_option("--accounts", scenario.accounts, "Account count")->capture_default_str();
  generate->add_option("--members", scenario.members_per_account, "Members per account")
      ->capture_default_str();
  generate->add_option("--clients", scenario.clients_per_account, "Clients per account")
      ->capture_default_str();
  generate->add_option("--responses", scenario.nps_responses_per_period,
                       "Survey responses per account-period")
      ->capture_default_str();
  generate->add_option("--scenario", scenario_path,
                       "JSON scenario file (overrides the flags above)");
  generate->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute the metric tables from an archive");
  analyze->add_option("--messages", config.messages_path, "Message file (JSON lines)")
      ->required();
  analyze->add_option("--roster", config.roster_path, "Account roster JSON")->required();
  analyze->add_option("--periods", config.periods_path, "Collection periods JSON")->required();
  analyze->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  add_analysis_flags(analyze, config, salt);

  // stats
  auto* stats = app.add_subcommand("stats", "Group comparison, correlations, and models");
  stats->add_option("--metrics", metrics_path, "metrics.csv from the analyze stage")
      ->required();
  stats->add_option("--nps", config.nps_path, "NPS survey CSV")->required();
  stats->add_option("--roster", config.roster_path, "Account roster JSON")->required();
  stats->add_option("--periods", config.periods_path, "Collection periods JSON")->required();
  stats->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  stats->add_flag("--reml", config.reml, "REML instead of ML variance estimates");

  // score
  auto* score = app.add_subcommand("score", "Normalize metrics into scorecards");
  score->add_option("--metrics", metrics_path, "metrics.csv from the analyze stage")
      ->required();
  score->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  score->add_option("--remedy-threshold", config.remedy_threshold,
                    "Scores strictly below attach a remedy")
      ->capture_default_str();
  add_scope_option(score, config.norm_scope);

  // run: analyze + stats + score through the same files
  auto* run = app.add_subcommand("run", "Full pipeline: analyze, stats, score");
  run->add_option("--messages", config.messages_path, "Message file (JSON lines)")->required();
  run->add_option("--roster", config.roster_path, "Account roster JSON")->required();
  run->add_option("--periods", config.periods_path, "Collection periods JSON")->required();
  run->add_option("--nps", config.nps_path, "NPS survey CSV")->required();
  run->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  run->add_flag("--reml", config.reml, "REML instead of ML variance estimates");
  run->add_option("--remedy-threshold", config.remedy_threshold,
                  "Scores strictly below attach a remedy")
      ->capture_default_str();
  add_scope_option(run, config.norm_scope);
  add_analysis_flags(run, config, salt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      if (!scenario_path.empty())
        scenario = commlens::scenario_from_json(commlens::read_file(scenario_path));
      commlens::generate_to_dir(scenario, gen_out);
      std::fprintf(stderr, "generate: seed %llu -> %s\n",
                   static_cast<unsigned long long>(scenario.seed), gen_out.c_str());
    } else if (analyze->parsed()) {
      run_analyze(config, salt);
    } else if (stats->parsed()) {
      run_stats(config, metrics_path);
    } else if (score->parsed()) {
      run_score(config, metrics_path);
    } else if (run->parsed()) {
      run_analyze(config, salt);
      metrics_path = config.out_dir + "/metrics.csv";
      run_stats(config, metrics_path);
      run_score(config, metrics_path);
    }
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    err["command"] = app.get_subcommands().empty() ? std::string("?")
                                                   : app.get_subcommands()[0]->get_name();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
  return 0;
}
