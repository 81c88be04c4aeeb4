#include "commlens/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "commlens/corpus.hpp"
#include "commlens/io.hpp"

namespace commlens {

namespace {

// mt19937_64 bit source with hand-rolled distributions, so byte output
// never depends on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
  }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

const char* kCommonWords[] = {
    "status",  "update",   "meeting",  "report",   "project", "invoice", "schedule",
    "review",  "plan",     "notes",    "question", "request", "summary", "agenda",
    "budget",  "delivery", "contract", "issue",    "release", "weekly",  "monthly",
    "call",    "follow",   "up",       "team",     "client",  "order",   "ticket",
    "support", "change",   "draft",    "final",    "approval", "numbers", "sync",
    "details", "timeline", "feedback", "quarter",  "results"};
constexpr int kCommonWordCount = static_cast<int>(sizeof(kCommonWords) / sizeof(char*));

std::string account_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "acct%03d", i);
  return buf;
}

std::string subject_line(Rng& rng, double rarity_bias) {
  const int len = static_cast<int>(rng.uniform_int(3, 6));
  std::string s;
  for (int i = 0; i < len; ++i) {
    if (!s.empty()) s.push_back(' ');
    if (rng.chance(rarity_bias)) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "w%06lld", static_cast<long long>(rng.uniform_int(0, 999999)));
      s += buf;
    } else {
      s += kCommonWords[rng.uniform_int(0, kCommonWordCount - 1)];
    }
  }
  return s;
}

struct ZScores {
  std::vector<double> art, cpx, osc, gdc;
};

std::vector<double> zscores(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  std::vector<double> z(v.size(), 0.0);
  if (sd > 0.0)
    for (std::size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - mean) / sd;
  return z;
}

std::vector<AccountKnobs> resolve_knobs(const ScenarioConfig& cfg) {
  if (cfg.account_knobs) {
    if (static_cast<int>(cfg.account_knobs->size()) != cfg.accounts)
      throw std::invalid_argument("simgen: account_knobs size != accounts");
    return *cfg.account_knobs;
  }
  // Dedicated sub-stream: knob resolution never shifts with traffic draws.
  Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x51ed2701u);
  std::vector<AccountKnobs> knobs(cfg.accounts);
  for (auto& k : knobs) {
    k.latency_median_hours = rng.uniform(cfg.latency_median_hours_range.first,
                                         cfg.latency_median_hours_range.second);
    k.latency_log_sigma = cfg.latency_log_sigma;
    k.rarity_bias = rng.uniform(cfg.rarity_range.first, cfg.rarity_range.second);
    k.rotation_rate = rng.uniform(cfg.rotation_range.first, cfg.rotation_range.second);
    k.hub_dominance = rng.uniform(cfg.hub_range.first, cfg.hub_range.second);
    k.traffic_per_day = rng.uniform(cfg.traffic_range.first, cfg.traffic_range.second);
  }
  return knobs;
}

}  // namespace

std::vector<Period> default_waves() {
  const auto make = [](const char* label, const char* start, const char* end, double code) {
    Period p;
    p.label = label;
    p.start = *parse_iso8601(start);
    p.end = *parse_iso8601(end);
    p.time_code = code;
    return p;
  };
  return {make("2012-06", "2012-06-01T00:00:00Z", "2012-08-01T00:00:00Z", 1.0),
          make("2012-10", "2012-10-01T00:00:00Z", "2012-12-01T00:00:00Z", 2.0),
          make("2013-10", "2013-10-01T00:00:00Z", "2013-12-01T00:00:00Z", 4.0),
          make("2014-05", "2014-05-01T00:00:00Z", "2014-07-01T00:00:00Z", 5.0)};
}

bool ScenarioConfig::valid() const {
  const auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  return seed != 0 && accounts >= 1 && members_per_account >= 1 && clients_per_account >= 1 &&
         experimental_fraction >= 0.0 && experimental_fraction <= 1.0 &&
         nps_responses_per_period >= 1 && in01(rarity_range.first) && in01(rarity_range.second) &&
         in01(rotation_range.first) && in01(rotation_range.second) && in01(hub_range.first) &&
         in01(hub_range.second) && latency_median_hours_range.first > 0.0 &&
         traffic_range.first > 0.0;
}

GroundTruth ground_truth(const ScenarioConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("simgen: invalid config");
  GroundTruth gt;
  gt.knobs = resolve_knobs(cfg);
  gt.account_names.reserve(cfg.accounts);
  for (int a = 0; a < cfg.accounts; ++a) gt.account_names.push_back(account_name(a));
  return gt;
}

GeneratedFiles generate(const ScenarioConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("simgen: invalid config");
  const std::vector<Period> periods = cfg.periods.empty() ? default_waves() : cfg.periods;
  const std::vector<AccountKnobs> knobs = resolve_knobs(cfg);

  // Planted satisfaction effects, standardized across accounts.
  ZScores z;
  {
    std::vector<double> art, cpx, osc, gdc;
    for (const auto& k : knobs) {
      art.push_back(k.latency_median_hours);
      cpx.push_back(k.rarity_bias);
      osc.push_back(k.rotation_rate);
      gdc.push_back(k.hub_dominance);
    }
    z.art = zscores(art);
    z.cpx = zscores(cpx);
    z.osc = zscores(osc);
    z.gdc = zscores(gdc);
  }

  std::vector<Message> all_messages;
  std::vector<AccountRoster> rosters;
  std::vector<NpsResponse> nps_rows;

  const int n_experimental =
      static_cast<int>(std::lround(cfg.experimental_fraction * cfg.accounts));

  for (int a = 0; a < cfg.accounts; ++a) {
    const std::string acct = account_name(a);
    const AccountKnobs& k = knobs[a];
    Rng rng(cfg.seed * 0x2545f4914f6cdd1dULL + static_cast<std::uint64_t>(a) + 1);

    AccountRoster roster;
    roster.account = acct;
    roster.group = a < n_experimental ? StudyGroup::experimental : StudyGroup::control;
    std::vector<ActorId> members, clients;
    for (int i = 0; i < cfg.members_per_account; ++i) {
      members.push_back(ActorId{"m" + std::to_string(i) + "@" + acct + ".example"});
      roster.members.insert(members.back());
    }
    for (int i = 0; i < cfg.clients_per_account; ++i) {
      clients.push_back(ActorId{"c" + std::to_string(i) + "@" + acct + ".example"});
      roster.clients.insert(clients.back());
    }
    rosters.push_back(roster);

    long counter = 0;
    const auto next_id = [&] { return acct + "-" + std::to_string(counter++); };
    const double latency_mu = std::log(k.latency_median_hours * 3600.0);

    for (const Period& period : periods) {
      int hub = 0;
      bool first_window = true;
      for (Timestamp w_start = period.start; w_start < period.end;
           w_start += 7 * kSecondsPerDay) {
        const Timestamp w_end = std::min<Timestamp>(w_start + 7 * kSecondsPerDay, period.end);
        if (!first_window && rng.chance(k.rotation_rate) && cfg.members_per_account > 1) {
          int next = static_cast<int>(rng.uniform_int(0, cfg.members_per_account - 2));
          if (next >= hub) ++next;
          hub = next;
        }
        first_window = false;

        const double days = static_cast<double>(w_end - w_start) / kSecondsPerDay;
        const int inquiries = std::max(1, static_cast<int>(std::lround(
                                               k.traffic_per_day * days * rng.uniform(0.8, 1.2))));
        for (int q = 0; q < inquiries; ++q) {
          const ActorId& client = clients[rng.uniform_int(0, clients.size() - 1)];
          const int target = rng.chance(k.hub_dominance)
                                 ? hub
                                 : static_cast<int>(rng.uniform_int(0, members.size() - 1));
          const Timestamp t = w_start + rng.uniform_int(0, w_end - w_start - 1);
          Message inquiry;
          inquiry.id = next_id();
          inquiry.sender = client;
          inquiry.recipients = {members[target]};
          inquiry.timestamp = t;
          inquiry.subject = subject_line(rng, k.rarity_bias);
          all_messages.push_back(inquiry);

          const auto latency =
              static_cast<std::int64_t>(rng.lognormal(latency_mu, k.latency_log_sigma));
          const Timestamp rt = t + std::max<std::int64_t>(60, latency);
          if (rt < period.end) {
            Message reply;
            reply.id = next_id();
            reply.sender = members[target];
            reply.recipients = {client};
            reply.timestamp = rt;
            reply.subject = "Re: " + inquiry.subject;
            reply.in_reply_to = inquiry.id;
            all_messages.push_back(std::move(reply));
          }

          // Proactive outbound share keeps contribution indexes spread out.
          if (rng.chance(0.25)) {
            Message update;
            update.id = next_id();
            update.sender = members[rng.chance(k.hub_dominance)
                                        ? hub
                                        : rng.uniform_int(0, members.size() - 1)];
            update.recipients = {clients[rng.uniform_int(0, clients.size() - 1)]};
            update.timestamp = w_start + rng.uniform_int(0, w_end - w_start - 1);
            update.subject = subject_line(rng, k.rarity_bias);
            all_messages.push_back(std::move(update));
          }
        }

        // Internal coordination. The hub reaches every member each window,
        // so a steady hub makes a steady star; lateral member-to-member
        // links appear in proportion to 1 - hub_dominance and flatten the
        // centralization.
        for (int m = 0; m < cfg.members_per_account; ++m) {
          if (m == hub) continue;
          Message coord;
          coord.id = next_id();
          coord.sender = members[hub];
          coord.recipients = {members[m]};
          coord.timestamp = w_start + rng.uniform_int(0, w_end - w_start - 1);
          coord.subject = subject_line(rng, k.rarity_bias);
          all_messages.push_back(std::move(coord));

          if (cfg.members_per_account > 2 && rng.chance(1.0 - k.hub_dominance)) {
            int other = static_cast<int>(rng.uniform_int(0, cfg.members_per_account - 1));
            if (other == m || other == hub) other = -1;
            if (other >= 0) {
              Message lateral;
              lateral.id = next_id();
              lateral.sender = members[m];
              lateral.recipients = {members[other]};
              lateral.timestamp = w_start + rng.uniform_int(0, w_end - w_start - 1);
              lateral.subject = subject_line(rng, k.rarity_bias);
              all_messages.push_back(std::move(lateral));
            }
          }
        }
      }

      // Survey wave for this account-period.
      const double shift = cfg.effect_art * z.art[a] + cfg.effect_complexity * z.cpx[a] +
                           cfg.effect_oscillation * z.osc[a] + cfg.effect_gdc * z.gdc[a];
      const double lift = (roster.group == StudyGroup::experimental && period.time_code >= 4.0)
                              ? cfg.experimental_lift
                              : 0.0;
      for (int s = 0; s < cfg.nps_responses_per_period; ++s) {
        const double raw = cfg.nps_base - shift + lift + cfg.nps_noise_sd * rng.normal();
        NpsResponse r;
        r.account = acct;
        r.period = period.label;
        r.score = static_cast<int>(std::clamp(std::lround(raw), 0l, 10l));
        nps_rows.push_back(std::move(r));
      }
    }
  }

  std::stable_sort(all_messages.begin(), all_messages.end(),
                   [](const Message& x, const Message& y) {
                     if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
                     return x.id < y.id;
                   });

  GeneratedFiles files;
  {
    std::ostringstream out;
    for (const Message& m : all_messages) out << serialize_message(m) << '\n';
    files.messages_jsonl = out.str();
  }
  files.roster_json = rosters_json(rosters);
  files.periods_json = periods_json(periods);
  files.nps_csv = nps_csv(nps_rows);
  return files;
}

void generate_to_dir(const ScenarioConfig& cfg, const std::string& dir) {
  const GeneratedFiles files = generate(cfg);
  write_file(dir + "/messages.jsonl", files.messages_jsonl);
  write_file(dir + "/roster.json", files.roster_json);
  write_file(dir + "/periods.json", files.periods_json);
  write_file(dir + "/nps.csv", files.nps_csv);
}

ScenarioConfig scenario_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ScenarioConfig cfg;
  cfg.seed = j.value("seed", cfg.seed);
  cfg.accounts = j.value("accounts", cfg.accounts);
  cfg.members_per_account = j.value("members_per_account", cfg.members_per_account);
  cfg.clients_per_account = j.value("clients_per_account", cfg.clients_per_account);
  cfg.experimental_fraction = j.value("experimental_fraction", cfg.experimental_fraction);
  cfg.nps_responses_per_period = j.value("nps_responses_per_period", cfg.nps_responses_per_period);
  cfg.nps_base = j.value("nps_base", cfg.nps_base);
  cfg.nps_noise_sd = j.value("nps_noise_sd", cfg.nps_noise_sd);
  cfg.effect_art = j.value("effect_art", cfg.effect_art);
  cfg.effect_complexity = j.value("effect_complexity", cfg.effect_complexity);
  cfg.effect_oscillation = j.value("effect_oscillation", cfg.effect_oscillation);
  cfg.effect_gdc = j.value("effect_gdc", cfg.effect_gdc);
  cfg.experimental_lift = j.value("experimental_lift", cfg.experimental_lift);
  cfg.latency_log_sigma = j.value("latency_log_sigma", cfg.latency_log_sigma);
  const auto range = [&](const char* key, std::pair<double, double>& out) {
    if (j.contains(key)) {
      const auto& r = j.at(key);
      out = {r.at(0).get<double>(), r.at(1).get<double>()};
    }
  };
  range("latency_median_hours_range", cfg.latency_median_hours_range);
  range("rarity_range", cfg.rarity_range);
  range("rotation_range", cfg.rotation_range);
  range("hub_range", cfg.hub_range);
  range("traffic_range", cfg.traffic_range);
  if (j.contains("periods")) {
    std::istringstream in(j.at("periods").dump());
    cfg.periods = load_periods(in);
  }
  if (j.contains("account_knobs")) {
    std::vector<AccountKnobs> knobs;
    for (const auto& e : j.at("account_knobs")) {
      AccountKnobs k;
      k.latency_median_hours = e.value("latency_median_hours", k.latency_median_hours);
      k.latency_log_sigma = e.value("latency_log_sigma", k.latency_log_sigma);
      k.rarity_bias = e.value("rarity_bias", k.rarity_bias);
      k.rotation_rate = e.value("rotation_rate", k.rotation_rate);
      k.hub_dominance = e.value("hub_dominance", k.hub_dominance);
      k.traffic_per_day = e.value("traffic_per_day", k.traffic_per_day);
      knobs.push_back(k);
    }
    cfg.account_knobs = std::move(knobs);
  }
  return cfg;
}

}  // namespace commlens
