#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace commlens {

// Per account-period metric bundle. Every metric is either a finite number
// or explicitly missing.
struct MetricRecord {
  std::string account;
  std::string period;
  std::optional<double> gdc;
  std::optional<double> group_oscillation;
  std::optional<double> mean_complexity;
  std::optional<double> art_seconds;
  std::optional<double> awci;
  std::optional<double> nps;
};

// Scored rows of the collaboration scorecard. All five metrics are
// lower-is-better in raw form, so normalized scores are inverted min-max:
// 1 is desirable.
enum class ScoreMetric : std::size_t {
  central_leaders = 0,   // group degree centralization
  steady_leadership,     // betweenness oscillation
  complexity,            // language complexity
  responsiveness,        // average response time
  initiative,            // contribution-index spread (AWCI)
};
constexpr std::size_t kScoreMetricCount = 5;

const char* metric_label(ScoreMetric m);
const char* remedy_text(ScoreMetric m);

struct Scorecard {
  std::string account;
  std::string period;
  std::array<std::optional<double>, kScoreMetricCount> scores;
  std::vector<ScoreMetric> flagged;  // scores strictly below the threshold
};

// Min-max normalization with direction applied, computed across the given
// records (the caller chooses the grouping scope). Degenerate range maps
// to 0.5; missing metrics stay missing. Output keeps input order.
std::vector<Scorecard> normalize(std::span<const MetricRecord> records);

// Attaches the fixed remedy per metric scoring strictly below threshold.
void apply_remedies(std::span<Scorecard> cards, double threshold = 0.33);

// Static report: one table per period, score bars inline.
std::string scorecard_html(std::span<const Scorecard> cards);

}  // namespace commlens
