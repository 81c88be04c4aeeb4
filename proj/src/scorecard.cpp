#include "commlens/scorecard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace commlens {

namespace {

std::optional<double> record_value(const MetricRecord& r, ScoreMetric m) {
  switch (m) {
    case ScoreMetric::central_leaders: return r.gdc;
    case ScoreMetric::steady_leadership: return r.group_oscillation;
    case ScoreMetric::complexity: return r.mean_complexity;
    case ScoreMetric::responsiveness: return r.art_seconds;
    case ScoreMetric::initiative: return r.awci;
  }
  return std::nullopt;
}

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

const char* metric_label(ScoreMetric m) {
  switch (m) {
    case ScoreMetric::central_leaders: return "Central leaders";
    case ScoreMetric::steady_leadership: return "Steady leadership";
    case ScoreMetric::complexity: return "Complexity";
    case ScoreMetric::responsiveness: return "Responsiveness";
    case ScoreMetric::initiative: return "Initiative";
  }
  return "";
}

const char* remedy_text(ScoreMetric m) {
  switch (m) {
    case ScoreMetric::central_leaders:
      return "Designated leaders need to become more proactive";
    case ScoreMetric::steady_leadership:
      return "A few people need to be designated as customer contacts, and communication has "
             "to be channeled through them";
    case ScoreMetric::complexity:
      return "Use a shared language that the customer can understand";
    case ScoreMetric::responsiveness:
      return "Designated customer contacts should answer faster; raise awareness of importance "
             "of speed";
    case ScoreMetric::initiative:
      return "Customer communication should be channeled through designated touch points";
  }
  return "";
}

std::vector<Scorecard> normalize(std::span<const MetricRecord> records) {
  std::vector<Scorecard> cards(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    cards[i].account = records[i].account;
    cards[i].period = records[i].period;
  }
  for (std::size_t m = 0; m < kScoreMetricCount; ++m) {
    const auto metric = static_cast<ScoreMetric>(m);
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& r : records) {
      const auto v = record_value(r, metric);
      if (!v) continue;
      if (!any) {
        lo = hi = *v;
        any = true;
      } else {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    }
    if (!any) continue;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto v = record_value(records[i], metric);
      if (!v) continue;
      // All five metrics are lower-is-better: invert so 1 = desirable.
      cards[i].scores[m] = hi > lo ? (hi - *v) / (hi - lo) : 0.5;
    }
  }
  return cards;
}

void apply_remedies(std::span<Scorecard> cards, double threshold) {
  for (auto& card : cards) {
    card.flagged.clear();
    for (std::size_t m = 0; m < kScoreMetricCount; ++m)
      if (card.scores[m] && *card.scores[m] < threshold)
        card.flagged.push_back(static_cast<ScoreMetric>(m));
  }
}

std::string scorecard_html(std::span<const Scorecard> cards) {
  std::map<std::string, std::vector<const Scorecard*>> by_period;
  for (const auto& c : cards) by_period[c.period].push_back(&c);

  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n"
      << "<title>Collaboration scorecards</title>\n"
      << "<style>\n"
      << "body{font-family:sans-serif;margin:2em}\n"
      << "table{border-collapse:collapse;margin-bottom:2em}\n"
      << "th,td{border:1px solid #999;padding:4px 8px;text-align:left}\n"
      << ".bar{display:inline-block;height:0.8em;background:#4a90d9;vertical-align:middle}\n"
      << ".missing{color:#999}\n"
      << ".remedy{font-size:0.85em;color:#a33}\n"
      << "</style></head><body>\n"
      << "<h1>Collaboration scorecards</h1>\n";

  for (const auto& [period, list] : by_period) {
    out << "<h2>Period " << html_escape(period) << "</h2>\n<table>\n<tr><th>Account</th>";
    for (std::size_t m = 0; m < kScoreMetricCount; ++m)
      out << "<th>" << metric_label(static_cast<ScoreMetric>(m)) << "</th>";
    out << "<th>Remedies</th></tr>\n";
    for (const Scorecard* c : list) {
      out << "<tr><td>" << html_escape(c->account) << "</td>";
      for (std::size_t m = 0; m < kScoreMetricCount; ++m) {
        if (!c->scores[m]) {
          out << "<td class=\"missing\">&mdash;</td>";
          continue;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf),
                      "<td><span class=\"bar\" style=\"width:%dpx\"></span> %.2f</td>",
                      static_cast<int>(std::lround(*c->scores[m] * 60.0)), *c->scores[m]);
        out << buf;
      }
      out << "<td>";
      for (std::size_t i = 0; i < c->flagged.size(); ++i) {
        if (i > 0) out << "<br>";
        out << "<span class=\"remedy\">" << metric_label(c->flagged[i]) << ": "
            << remedy_text(c->flagged[i]) << "</span>";
      }
      out << "</td></tr>\n";
    }
    out << "</table>\n";
  }
  out << "</body></html>\n";
  return out.str();
}

}  // namespace commlens
