#include "commlens/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace commlens {

namespace {

using nlohmann::json;

json parse_json(std::istream& in, const char* what) {
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error(std::string(what) + ": malformed JSON");
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::optional<double> parse_opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad numeric field: " + s);
  return v;
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<AccountRoster> load_rosters(std::istream& in) {
  const json j = parse_json(in, "roster");
  if (!j.is_object()) throw std::runtime_error("roster: expected an object of accounts");
  std::vector<AccountRoster> out;
  for (const auto& [name, spec] : j.items()) {
    AccountRoster r;
    r.account = name;
    if (!spec.is_object()) throw std::runtime_error("roster " + name + ": expected object");
    for (const auto& m : spec.value("members", json::array()))
      r.members.insert(ActorId{m.get<std::string>()});
    for (const auto& c : spec.value("clients", json::array()))
      r.clients.insert(ActorId{c.get<std::string>()});
    const std::string group = spec.value("group", "control");
    if (group == "experimental")
      r.group = StudyGroup::experimental;
    else if (group == "control")
      r.group = StudyGroup::control;
    else
      throw std::runtime_error("roster " + name + ": unknown group " + group);
    if (r.members.empty()) throw std::runtime_error("roster " + name + ": empty members");
    for (const auto& m : r.members)
      if (r.clients.count(m))
        throw std::runtime_error("roster " + name + ": member/client overlap " + m.value);
    out.push_back(std::move(r));
  }
  return out;
}

std::string rosters_json(std::span<const AccountRoster> rosters) {
  json j = json::object();
  for (const auto& r : rosters) {
    json members = json::array(), clients = json::array();
    for (const auto& m : r.members) members.push_back(m.value);
    for (const auto& c : r.clients) clients.push_back(c.value);
    j[r.account] = {{"members", std::move(members)},
                    {"clients", std::move(clients)},
                    {"group", r.group == StudyGroup::experimental ? "experimental" : "control"}};
  }
  return j.dump(2) + "\n";
}

std::vector<Period> load_periods(std::istream& in) {
  const json j = parse_json(in, "periods");
  if (!j.is_array()) throw std::runtime_error("periods: expected an array");
  std::vector<Period> out;
  for (const auto& e : j) {
    Period p;
    p.label = e.at("label").get<std::string>();
    const auto start = parse_iso8601(e.at("start").get<std::string>());
    const auto end = parse_iso8601(e.at("end").get<std::string>());
    if (!start || !end) throw std::runtime_error("periods " + p.label + ": malformed instant");
    p.start = *start;
    p.end = *end;
    p.time_code = e.value("time_code", 0.0);
    if (p.start >= p.end) throw std::runtime_error("periods " + p.label + ": start >= end");
    out.push_back(std::move(p));
  }
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if (out[a].start < out[b].end && out[b].start < out[a].end)
        throw std::runtime_error("periods: " + out[a].label + " overlaps " + out[b].label);
  return out;
}

std::string periods_json(std::span<const Period> periods) {
  json j = json::array();
  for (const auto& p : periods)
    j.push_back({{"label", p.label},
                 {"start", format_iso8601(p.start)},
                 {"end", format_iso8601(p.end)},
                 {"time_code", p.time_code}});
  return j.dump(2) + "\n";
}

std::vector<NpsResponse> load_nps(std::istream& in) {
  std::vector<NpsResponse> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() >= 3 && fields[0] == "account") continue;  // header row
    }
    if (fields.size() != 3)
      throw std::runtime_error("nps line " + std::to_string(line_no) + ": expected 3 fields");
    NpsResponse r;
    r.account = fields[0];
    r.period = fields[1];
    try {
      std::size_t pos = 0;
      r.score = std::stoi(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error("nps line " + std::to_string(line_no) + ": bad score");
    }
    if (r.score < 0 || r.score > 10)
      throw std::runtime_error("nps line " + std::to_string(line_no) + ": score out of range");
    out.push_back(std::move(r));
  }
  return out;
}

std::string nps_csv(std::span<const NpsResponse> rows) {
  std::ostringstream out;
  out << "account,period,score\n";
  for (const auto& r : rows)
    out << csv_field(r.account) << ',' << csv_field(r.period) << ',' << r.score << '\n';
  return out.str();
}

std::string metric_records_csv(std::span<const MetricRecord> records) {
  std::ostringstream out;
  out << "account,period,gdc,group_oscillation,mean_complexity,art_seconds,awci\n";
  for (const auto& r : records) {
    out << csv_field(r.account) << ',' << csv_field(r.period) << ',' << opt_field(r.gdc) << ','
        << opt_field(r.group_oscillation) << ',' << opt_field(r.mean_complexity) << ','
        << opt_field(r.art_seconds) << ',' << opt_field(r.awci) << '\n';
  }
  return out.str();
}

std::vector<MetricRecord> load_metric_records(std::istream& in) {
  std::vector<MetricRecord> out;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 7)
      throw std::runtime_error("metrics line " + std::to_string(line_no) + ": expected 7 fields");
    MetricRecord r;
    r.account = fields[0];
    r.period = fields[1];
    r.gdc = parse_opt_double(fields[2]);
    r.group_oscillation = parse_opt_double(fields[3]);
    r.mean_complexity = parse_opt_double(fields[4]);
    r.art_seconds = parse_opt_double(fields[5]);
    r.awci = parse_opt_double(fields[6]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string actor_metrics_csv(std::span<const ActorMetricRow> rows) {
  std::ostringstream out;
  out << "account,period,window_index,actor,degree_inout,degree_neighbors,"
         "betweenness_raw,betweenness_std\n";
  for (const auto& r : rows) {
    out << csv_field(r.account) << ',' << csv_field(r.period) << ',' << r.window_index << ','
        << csv_field(r.actor.value) << ',' << format_double(r.degree_inout) << ','
        << r.degree_neighbors << ',' << format_double(r.betweenness_raw) << ','
        << (r.betweenness_std_defined ? format_double(r.betweenness_std) : std::string())
        << '\n';
  }
  return out.str();
}

std::string reply_pairs_csv(std::span<const ReplyPair> pairs, const std::string& account,
                            const std::string& period) {
  std::ostringstream out;
  for (const auto& p : pairs) {
    out << csv_field(account) << ',' << csv_field(period) << ',' << csv_field(p.original_id)
        << ',' << csv_field(p.reply_id) << ',' << csv_field(p.responder.value) << ','
        << p.latency_seconds << '\n';
  }
  return out.str();
}

std::string idf_csv(const IdfTable& table) {
  std::ostringstream out;
  out << "term,df,idf\n";
  for (const auto& [term, df] : table.frequencies())
    out << csv_field(term) << ',' << df << ',' << format_double(table.idf(term)) << '\n';
  return out.str();
}

std::string graphml(const Sociomatrix& m) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (const auto& a : m.actors())
    out << "    <node id=\"" << xml_escape(a.value) << "\"/>\n";
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.at(i, j) > 0)
        out << "    <edge source=\"" << xml_escape(m.actors()[i].value) << "\" target=\""
            << xml_escape(m.actors()[j].value) << "\"><data key=\"w\">" << m.at(i, j)
            << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string dot(const Sociomatrix& m) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (const auto& a : m.actors()) out << "  \"" << a.value << "\";\n";
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.at(i, j) > 0)
        out << "  \"" << m.actors()[i].value << "\" -> \"" << m.actors()[j].value
            << "\" [weight=" << m.at(i, j) << ", label=\"" << m.at(i, j) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::vector<AccountRoster> load_rosters_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_rosters(in);
}

std::vector<Period> load_periods_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_periods(in);
}

std::vector<NpsResponse> load_nps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_nps(in);
}

std::vector<MetricRecord> load_metric_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_metric_records(in);
}

}  // namespace commlens
