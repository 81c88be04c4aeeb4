#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "commlens/complexity.hpp"
#include "commlens/interaction.hpp"
#include "commlens/scorecard.hpp"
#include "commlens/sociomatrix.hpp"
#include "commlens/types.hpp"

namespace commlens {

// Roster file: JSON object mapping account name to
// {"members": [...], "clients": [...], "group": "experimental"|"control"}.
// Throws std::runtime_error on malformed input or violated invariants
// (empty members, member/client overlap).
std::vector<AccountRoster> load_rosters(std::istream& in);
std::vector<AccountRoster> load_rosters_file(const std::string& path);
std::string rosters_json(std::span<const AccountRoster> rosters);

// Periods file: JSON array of {"label", "start", "end", "time_code"}.
// Periods must be valid (start < end) and pairwise non-overlapping.
std::vector<Period> load_periods(std::istream& in);
std::vector<Period> load_periods_file(const std::string& path);
std::string periods_json(std::span<const Period> periods);

// NPS survey: CSV with header account,period,score; score is an integer
// 0..10. Throws with the offending line number on malformed rows.
struct NpsResponse {
  std::string account;
  std::string period;
  int score = 0;
};
std::vector<NpsResponse> load_nps(std::istream& in);
std::vector<NpsResponse> load_nps_file(const std::string& path);
std::string nps_csv(std::span<const NpsResponse> rows);

// Delimited metric tables. Missing values serialize as empty fields.
std::string metric_records_csv(std::span<const MetricRecord> records);
std::vector<MetricRecord> load_metric_records(std::istream& in);
std::vector<MetricRecord> load_metric_records_file(const std::string& path);

struct ActorMetricRow {
  std::string account;
  std::string period;
  std::size_t window_index = 0;
  ActorId actor;
  double degree_inout = 0.0;
  std::uint32_t degree_neighbors = 0;
  double betweenness_raw = 0.0;
  double betweenness_std = 0.0;
  bool betweenness_std_defined = false;
};
std::string actor_metrics_csv(std::span<const ActorMetricRow> rows);

std::string reply_pairs_csv(std::span<const ReplyPair> pairs, const std::string& account,
                            const std::string& period);
std::string idf_csv(const IdfTable& table);

// Graph exports for external viewers.
std::string graphml(const Sociomatrix& m);
std::string dot(const Sociomatrix& m);

// Plumbing shared by the writers.
std::string format_double(double v);
std::string csv_field(const std::string& s);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace commlens
