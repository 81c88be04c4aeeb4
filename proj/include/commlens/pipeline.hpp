#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commlens/io.hpp"
#include "commlens/mlm.hpp"
#include "commlens/scorecard.hpp"
#include "commlens/stats.hpp"
#include "commlens/types.hpp"

namespace commlens {

enum class NormScope { period, account, global };

struct RunConfig {
  std::string messages_path;
  std::string roster_path;
  std::string periods_path;
  std::string nps_path;  // stats stage only
  std::string out_dir = "out";

  int window_days = 7;
  int step_days = 7;
  double reply_cap_days = 14.0;
  bool strict_threading = false;   // disable the subject-match fallback
  bool include_cc = true;
  bool art_both_directions = false;  // default: provider-side responders only
  NormScope norm_scope = NormScope::period;
  bool reml = false;
  int jobs = 1;
  std::optional<std::string> salt;  // anonymize messages + roster when set
  // Transform applied to exported per-period network files; the metric
  // path always uses its own pinned transforms.
  bool export_dichotomized = false;
  bool export_symmetrized = false;
  double remedy_threshold = 0.33;
};

struct AnalysisResult {
  std::vector<MetricRecord> records;       // account-major, periods in time order
  std::vector<ActorMetricRow> actor_rows;  // per window per actor
  struct PairsBlock {
    std::string account;
    std::string period;
    std::vector<ReplyPair> pairs;
  };
  std::vector<PairsBlock> reply_pairs;
  struct NetworkBlock {
    std::string account;
    std::string period;
    Sociomatrix matrix;  // raw weighted period matrix over the roster universe
  };
  std::vector<NetworkBlock> networks;
  std::vector<Reject> rejects;
  std::optional<IdfTable> idf;  // absent when nothing tokenizes
  std::size_t messages_parsed = 0;
};

// Figure-style pipeline stage: scope -> windows -> network/content/
// interaction metrics per account-period.
AnalysisResult analyze(const RunConfig& config);
void write_analysis(const AnalysisResult& result, const RunConfig& config);

struct StatsReport {
  // Before/after NPS change per account, compared across study groups.
  std::string before_period;
  std::string after_period;
  struct AccountChange {
    std::string account;
    StudyGroup group = StudyGroup::control;
    double before = 0.0;
    double after = 0.0;
    double change = 0.0;
  };
  std::vector<AccountChange> changes;
  std::optional<TwoSampleTest> group_comparison;  // experimental vs control

  // Pairwise correlations over the account-period panel.
  std::vector<std::string> panel_vars;
  std::vector<std::vector<std::optional<Correlation>>> correlations;  // lower triangle

  // Random-intercept models: empty, one per predictor, time, combined.
  struct Model {
    std::string name;
    std::vector<std::string> predictors;
    MlmFit fit;
    std::optional<double> d_tau2_pct;    // vs the empty model
    std::optional<double> d_sigma2_pct;
  };
  std::vector<Model> models;
  std::size_t panel_rows = 0;
  std::size_t panel_groups = 0;
};

StatsReport compute_stats(std::span<const MetricRecord> records,
                          std::span<const NpsResponse> survey,
                          std::span<const AccountRoster> rosters,
                          std::span<const Period> periods, bool reml);
std::string stats_report_json(const StatsReport& report);
std::string stats_report_text(const StatsReport& report);
void write_stats(const StatsReport& report, const RunConfig& config);

std::vector<Scorecard> score_records(std::span<const MetricRecord> records, NormScope scope,
                                     double remedy_threshold);
std::string scorecards_csv(std::span<const Scorecard> cards);
std::string scorecards_json(std::span<const Scorecard> cards);
void write_scorecards(std::span<const Scorecard> cards, const RunConfig& config);

}  // namespace commlens
