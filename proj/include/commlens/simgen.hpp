#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commlens/types.hpp"

namespace commlens {

// Per-account behavior dials. Each one drives exactly one pipeline metric,
// so generated corpora carry known ground truth.
struct AccountKnobs {
  double latency_median_hours = 6.0;  // lognormal reply latency median
  double latency_log_sigma = 0.6;     // log-scale spread
  double rarity_bias = 0.3;           // probability a subject token is rare
  double rotation_rate = 0.2;         // probability the hub rotates per window
  double hub_dominance = 0.7;         // share of traffic routed through the hub
  double traffic_per_day = 8.0;       // client inquiries per day
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int accounts = 4;
  int members_per_account = 6;
  int clients_per_account = 4;
  std::vector<Period> periods;  // empty = four default two-month waves coded 1,2,4,5
  double experimental_fraction = 0.25;

  // Survey model: score = clamp(round(base - sum of planted effects + noise), 0, 10).
  // Effects enter through z-scores of the knob values across accounts, so
  // every behavior dial pushes satisfaction in a known direction.
  int nps_responses_per_period = 10;
  double nps_base = 8.2;
  double nps_noise_sd = 0.7;
  double effect_art = 1.0;
  double effect_complexity = 1.0;
  double effect_oscillation = 1.0;
  double effect_gdc = 0.8;
  // Added to scores of experimental accounts in waves coded >= 4.
  double experimental_lift = 0.5;

  // Knob ranges sampled per account when explicit knobs are not supplied.
  std::pair<double, double> latency_median_hours_range{2.0, 30.0};
  double latency_log_sigma = 0.6;
  std::pair<double, double> rarity_range{0.05, 0.85};
  std::pair<double, double> rotation_range{0.0, 0.9};
  std::pair<double, double> hub_range{0.3, 0.95};
  std::pair<double, double> traffic_range{6.0, 14.0};
  std::optional<std::vector<AccountKnobs>> account_knobs;  // overrides sampling

  bool valid() const;
};

struct GeneratedFiles {
  std::string messages_jsonl;
  std::string roster_json;
  std::string periods_json;
  std::string nps_csv;
};

// Byte-deterministic in the seed; emitted files pass corpus validation.
GeneratedFiles generate(const ScenarioConfig& config);
void generate_to_dir(const ScenarioConfig& config, const std::string& dir);

// The analytic expectations implied by the dials: the resolved per-account
// knob values plus the monotone direction each knob plants.
struct GroundTruth {
  std::vector<std::string> account_names;
  std::vector<AccountKnobs> knobs;
  // metric name -> knob accessor index order mirrors knobs fields:
  // higher latency -> higher ART, higher rarity -> higher complexity,
  // higher rotation -> higher oscillation, higher dominance -> higher GDC,
  // and each of the four pushes NPS down.
};
GroundTruth ground_truth(const ScenarioConfig& config);

std::vector<Period> default_waves();

// JSON form of ScenarioConfig; absent keys keep their defaults.
ScenarioConfig scenario_from_json(const std::string& text);

}  // namespace commlens
