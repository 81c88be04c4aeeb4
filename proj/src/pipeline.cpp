#include "commlens/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "commlens/centrality.hpp"
#include "commlens/complexity.hpp"
#include "commlens/corpus.hpp"
#include "commlens/interaction.hpp"
#include "commlens/oscillation.hpp"
#include "commlens/windows.hpp"

namespace commlens {

namespace {

using nlohmann::json;

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const int workers = std::min<std::size_t>(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct TaskOutput {
  MetricRecord record;
  std::vector<ActorMetricRow> actor_rows;
  std::vector<ReplyPair> pairs;
  std::optional<Sociomatrix> matrix;
};

std::string period_file_tag(const std::string& label) {
  std::string tag;
  for (char c : label)
    tag.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  return tag;
}

std::optional<Correlation> safe_pearson(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  if (x.size() < 3) return std::nullopt;
  return pearson(x, y);
}

const char* group_name(StudyGroup g) {
  return g == StudyGroup::experimental ? "experimental" : "control";
}

std::string score_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

AnalysisResult analyze(const RunConfig& config) {
  AnalysisResult result;

  std::ifstream messages_in(config.messages_path);
  if (!messages_in) throw std::runtime_error("cannot read " + config.messages_path);
  ParseResult parsed = parse_messages(messages_in, ParseOptions{config.include_cc});
  result.rejects = std::move(parsed.rejects);
  result.messages_parsed = parsed.messages.size();

  std::vector<AccountRoster> rosters = load_rosters_file(config.roster_path);
  std::sort(rosters.begin(), rosters.end(),
            [](const AccountRoster& a, const AccountRoster& b) { return a.account < b.account; });
  std::vector<Period> periods = load_periods_file(config.periods_path);
  std::sort(periods.begin(), periods.end(),
            [](const Period& a, const Period& b) { return a.start < b.start; });

  std::vector<Message> messages = std::move(parsed.messages);
  if (config.salt) {
    messages = anonymize(messages, *config.salt);
    for (auto& r : rosters) r = anonymize(r, *config.salt);
  }

  // Route each message to the account-period buckets it touches.
  std::unordered_map<ActorId, std::vector<std::size_t>> account_of;
  for (std::size_t a = 0; a < rosters.size(); ++a) {
    for (const auto& m : rosters[a].members) account_of[m].push_back(a);
    for (const auto& c : rosters[a].clients) account_of[c].push_back(a);
  }
  const std::size_t n_accounts = rosters.size(), n_periods = periods.size();
  std::vector<std::vector<std::size_t>> buckets(n_accounts * n_periods);
  std::vector<std::size_t> touched;
  for (std::size_t mi = 0; mi < messages.size(); ++mi) {
    const Message& m = messages[mi];
    std::size_t pi = n_periods;
    for (std::size_t p = 0; p < n_periods; ++p)
      if (periods[p].contains(m.timestamp)) {
        pi = p;
        break;
      }
    if (pi == n_periods) continue;
    touched.clear();
    const auto visit = [&](const ActorId& a) {
      auto it = account_of.find(a);
      if (it == account_of.end()) return;
      for (std::size_t acc : it->second)
        if (std::find(touched.begin(), touched.end(), acc) == touched.end())
          touched.push_back(acc);
    };
    visit(m.sender);
    for (const auto& r : m.recipients) visit(r);
    for (std::size_t acc : touched) buckets[acc * n_periods + pi].push_back(mi);
  }

  // One idf table per run: every subject that enters any account-period.
  std::optional<IdfTable> idf;
  {
    std::vector<char> included(messages.size(), 0);
    for (const auto& bucket : buckets)
      for (std::size_t mi : bucket) included[mi] = 1;
    std::vector<std::string> subjects;
    for (std::size_t mi = 0; mi < messages.size(); ++mi)
      if (included[mi]) subjects.push_back(messages[mi].subject);
    if (!subjects.empty()) {
      try {
        idf = IdfTable::build(subjects);
      } catch (const std::invalid_argument&) {
        idf = std::nullopt;  // nothing tokenizes; complexity stays missing
      }
    }
  }
  result.idf = idf;

  const std::int64_t cap_seconds =
      static_cast<std::int64_t>(config.reply_cap_days * kSecondsPerDay);
  const WindowPlan base_plan{config.window_days * kSecondsPerDay,
                             config.step_days * kSecondsPerDay, 0};
  if (!base_plan.valid()) throw std::runtime_error("invalid window plan");

  std::vector<TaskOutput> outputs(n_accounts * n_periods);
  parallel_for(n_accounts * n_periods, config.jobs, [&](std::size_t task) {
    const std::size_t ai = task / n_periods, pi = task % n_periods;
    const AccountRoster& roster = rosters[ai];
    const Period& period = periods[pi];
    TaskOutput& out = outputs[task];
    out.record.account = roster.account;
    out.record.period = period.label;

    const auto& bucket = buckets[task];
    if (bucket.empty()) return;  // empty period: all metrics missing

    std::vector<Message> subset;
    subset.reserve(bucket.size());
    for (std::size_t mi : bucket) subset.push_back(messages[mi]);

    // Actor universe: roster members and clients observed this period.
    std::set<ActorId> universe_set;
    for (const Message& m : subset) {
      if (roster.contains(m.sender)) universe_set.insert(m.sender);
      for (const auto& r : m.recipients)
        if (roster.contains(r)) universe_set.insert(r);
    }
    std::vector<ActorId> universe(universe_set.begin(), universe_set.end());
    if (universe.empty()) return;

    Sociomatrix period_matrix = Sociomatrix::from_messages(subset, universe);

    const Sociomatrix binary = period_matrix.dichotomized().symmetrized();
    out.record.gdc = group_degree_centralization(binary);

    WindowPlan plan = base_plan;
    plan.origin = period.start;
    const auto wins = windows(subset, plan, std::pair{period.start, period.end}, universe);

    std::vector<OscillationSeries> series(universe.size());
    for (std::size_t u = 0; u < universe.size(); ++u) {
      series[u].actor = universe[u];
      series[u].series.reserve(wins.size());
    }
    for (std::size_t w = 0; w < wins.size(); ++w) {
      const auto cents = actor_centralities(wins[w].matrix);
      for (std::size_t u = 0; u < cents.size(); ++u) {
        ActorMetricRow row;
        row.account = roster.account;
        row.period = period.label;
        row.window_index = w;
        row.actor = cents[u].actor;
        row.degree_inout = cents[u].degree_inout;
        row.degree_neighbors = cents[u].degree_neighbors;
        row.betweenness_raw = cents[u].betweenness_raw.to_double();
        if (cents[u].betweenness_std) {
          row.betweenness_std = cents[u].betweenness_std->to_double();
          row.betweenness_std_defined = true;
        }
        out.actor_rows.push_back(std::move(row));
        series[u].series.push_back(cents[u].betweenness_raw.to_double());
      }
    }
    for (auto& s : series) s.oscillations = oscillation(s.series);
    out.record.group_oscillation = static_cast<double>(group_oscillation(series));

    if (idf) out.record.mean_complexity = group_complexity(subset, *idf);

    out.pairs = match_replies(subset, ReplyMatchOptions{cap_seconds, !config.strict_threading});
    out.record.art_seconds =
        config.art_both_directions ? art(out.pairs) : art(out.pairs, roster.members);

    out.record.awci = contribution_stats(period_matrix).awci;
    out.matrix = std::move(period_matrix);
  });

  for (std::size_t task = 0; task < outputs.size(); ++task) {
    TaskOutput& out = outputs[task];
    result.records.push_back(std::move(out.record));
    result.actor_rows.insert(result.actor_rows.end(),
                             std::make_move_iterator(out.actor_rows.begin()),
                             std::make_move_iterator(out.actor_rows.end()));
    if (!out.pairs.empty())
      result.reply_pairs.push_back({result.records.back().account,
                                    result.records.back().period, std::move(out.pairs)});
    if (out.matrix)
      result.networks.push_back({result.records.back().account, result.records.back().period,
                                 std::move(*out.matrix)});
  }
  return result;
}

void write_analysis(const AnalysisResult& result, const RunConfig& config) {
  const std::string dir = config.out_dir;
  write_file(dir + "/metrics.csv", metric_records_csv(result.records));
  write_file(dir + "/actor_metrics.csv", actor_metrics_csv(result.actor_rows));

  std::string pairs_csv = "account,period,original_id,reply_id,responder,latency_seconds\n";
  for (const auto& block : result.reply_pairs)
    pairs_csv += reply_pairs_csv(block.pairs, block.account, block.period);
  write_file(dir + "/reply_pairs.csv", pairs_csv);

  write_file(dir + "/idf.csv", result.idf ? idf_csv(*result.idf) : "term,df,idf\n");

  std::ostringstream rejects;
  rejects << "line,reason\n";
  for (const auto& r : result.rejects)
    rejects << r.line << ',' << csv_field(r.reason) << '\n';
  write_file(dir + "/rejects.csv", rejects.str());

  for (const auto& net : result.networks) {
    Sociomatrix m = net.matrix;
    if (config.export_dichotomized) m = m.dichotomized();
    if (config.export_symmetrized) m = m.symmetrized();
    const std::string base =
        dir + "/networks/" + period_file_tag(net.account) + "_" + period_file_tag(net.period);
    write_file(base + ".graphml", graphml(m));
    write_file(base + ".dot", dot(m));
    write_file(base + ".edges", edge_list_text(m));
  }
}

StatsReport compute_stats(std::span<const MetricRecord> records,
                          std::span<const NpsResponse> survey,
                          std::span<const AccountRoster> rosters,
                          std::span<const Period> periods, bool reml) {
  StatsReport report;

  std::vector<Period> sorted_periods(periods.begin(), periods.end());
  std::sort(sorted_periods.begin(), sorted_periods.end(),
            [](const Period& a, const Period& b) { return a.start < b.start; });
  std::map<std::string, double> time_code;
  for (const auto& p : sorted_periods) time_code[p.label] = p.time_code;

  std::map<std::string, StudyGroup> group_of;
  for (const auto& r : rosters) group_of[r.account] = r.group;

  // NPS per (account, period).
  std::map<std::pair<std::string, std::string>, std::vector<int>> scores;
  for (const auto& row : survey) scores[{row.account, row.period}].push_back(row.score);
  std::map<std::pair<std::string, std::string>, NpsResult> nps_of;
  for (const auto& [key, list] : scores) nps_of[key] = nps(list);

  // Change between the first and last wave, compared across groups.
  if (!sorted_periods.empty()) {
    report.before_period = sorted_periods.front().label;
    report.after_period = sorted_periods.back().label;
    std::vector<double> experimental, control;
    for (const auto& [account, group] : group_of) {
      auto before = nps_of.find({account, report.before_period});
      auto after = nps_of.find({account, report.after_period});
      if (before == nps_of.end() || after == nps_of.end()) continue;
      StatsReport::AccountChange change;
      change.account = account;
      change.group = group;
      change.before = before->second.nps;
      change.after = after->second.nps;
      change.change = nps_change(before->second, after->second);
      (group == StudyGroup::experimental ? experimental : control).push_back(change.change);
      report.changes.push_back(std::move(change));
    }
    if (experimental.size() >= 2 && control.size() >= 2)
      report.group_comparison = two_sample_test(experimental, control);
  }

  // Account-period panel.
  struct PanelRow {
    std::string account;
    double nps = 0.0;
    std::optional<double> complexity, oscillation, art_hours, gdc;
    double time = 0.0;
  };
  std::vector<PanelRow> panel;
  std::set<std::string> panel_accounts;
  for (const auto& r : records) {
    auto it = nps_of.find({r.account, r.period});
    if (it == nps_of.end()) continue;
    PanelRow row;
    row.account = r.account;
    row.nps = it->second.nps;
    row.complexity = r.mean_complexity;
    row.oscillation = r.group_oscillation;
    if (r.art_seconds) row.art_hours = *r.art_seconds / 3600.0;
    row.gdc = r.gdc;
    auto tc = time_code.find(r.period);
    row.time = tc == time_code.end() ? 0.0 : tc->second;
    panel.push_back(std::move(row));
    panel_accounts.insert(r.account);
  }
  report.panel_rows = panel.size();
  report.panel_groups = panel_accounts.size();

  // Pairwise-complete correlations.
  const auto var_value = [](const PanelRow& row, std::size_t v) -> std::optional<double> {
    switch (v) {
      case 0: return row.nps;
      case 1: return row.gdc;
      case 2: return row.oscillation;
      case 3: return row.complexity;
      case 4: return row.art_hours;
    }
    return std::nullopt;
  };
  report.panel_vars = {"nps", "gdc", "group_oscillation", "complexity", "art_hours"};
  report.correlations.resize(report.panel_vars.size());
  for (std::size_t a = 0; a < report.panel_vars.size(); ++a) {
    report.correlations[a].resize(a);
    for (std::size_t b = 0; b < a; ++b) {
      std::vector<double> xs, ys;
      for (const auto& row : panel) {
        const auto x = var_value(row, a), y = var_value(row, b);
        if (x && y) {
          xs.push_back(*x);
          ys.push_back(*y);
        }
      }
      report.correlations[a][b] = safe_pearson(xs, ys);
    }
  }

  // Random-intercept models. Predictors are centered on the panel mean;
  // time is centered on its first wave code.
  const auto center = [&](std::size_t v) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : panel) {
      const auto x = var_value(row, v);
      if (x) {
        sum += *x;
        ++n;
      }
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
  };
  const double c_gdc = center(1), c_osc = center(2), c_cpx = center(3), c_art = center(4);
  const double time_origin =
      sorted_periods.empty() ? 0.0 : sorted_periods.front().time_code;

  struct PredictorSpec {
    std::string name;
    std::function<std::optional<double>(const PanelRow&)> get;
  };
  const std::vector<PredictorSpec> specs = {
      {"complexity",
       [&](const PanelRow& r) -> std::optional<double> {
         if (!r.complexity) return std::nullopt;
         return *r.complexity - c_cpx;
       }},
      {"group_oscillation",
       [&](const PanelRow& r) -> std::optional<double> {
         if (!r.oscillation) return std::nullopt;
         return *r.oscillation - c_osc;
       }},
      {"art_hours",
       [&](const PanelRow& r) -> std::optional<double> {
         if (!r.art_hours) return std::nullopt;
         return *r.art_hours - c_art;
       }},
      {"gdc",
       [&](const PanelRow& r) -> std::optional<double> {
         if (!r.gdc) return std::nullopt;
         return *r.gdc - c_gdc;
       }},
      {"time", [&](const PanelRow& r) -> std::optional<double> { return r.time - time_origin; }},
  };
  const auto spec_by_name = [&](const std::string& name) -> const PredictorSpec& {
    for (const auto& s : specs)
      if (s.name == name) return s;
    throw std::logic_error("unknown predictor " + name);
  };

  const std::vector<std::pair<std::string, std::vector<std::string>>> model_specs = {
      {"Model 1", {}},
      {"Model 2", {"complexity"}},
      {"Model 3", {"group_oscillation"}},
      {"Model 4", {"art_hours"}},
      {"Model 5", {"gdc"}},
      {"Model 6", {"time"}},
      {"Model 7", {"complexity", "group_oscillation", "art_hours"}},
  };

  std::optional<MlmFit> empty_fit;
  for (const auto& [name, predictors] : model_specs) {
    StatsReport::Model model;
    model.name = name;
    model.predictors = predictors;
    std::vector<MlmObservation> rows;
    for (const auto& row : panel) {
      MlmObservation obs;
      obs.group = row.account;
      obs.y = row.nps;
      bool complete = true;
      for (const auto& p : predictors) {
        const auto v = spec_by_name(p).get(row);
        if (!v) {
          complete = false;
          break;
        }
        obs.x.push_back(*v);
      }
      if (complete) rows.push_back(std::move(obs));
    }
    try {
      model.fit = fit_random_intercept(rows, predictors, MlmOptions{reml, std::nullopt});
    } catch (const std::invalid_argument&) {
      model.fit.converged = false;
    }
    if (name == "Model 1" && model.fit.converged) empty_fit = model.fit;
    if (name != "Model 1" && empty_fit && model.fit.converged) {
      const auto [dt, ds] = variance_change(*empty_fit, model.fit);
      model.d_tau2_pct = dt;
      model.d_sigma2_pct = ds;
    }
    report.models.push_back(std::move(model));
  }
  return report;
}

std::string stats_report_json(const StatsReport& report) {
  json j;
  j["group_comparison"]["before_period"] = report.before_period;
  j["group_comparison"]["after_period"] = report.after_period;
  json changes = json::array();
  for (const auto& c : report.changes)
    changes.push_back({{"account", c.account},
                       {"group", group_name(c.group)},
                       {"nps_before", c.before},
                       {"nps_after", c.after},
                       {"change", c.change}});
  j["group_comparison"]["changes"] = std::move(changes);
  if (report.group_comparison) {
    const TwoSampleTest& t = *report.group_comparison;
    json jt;
    jt["experimental"] = {{"n", t.a.n}, {"mean", t.a.mean}, {"sd", t.a.sd}};
    jt["control"] = {{"n", t.b.n}, {"mean", t.b.mean}, {"sd", t.b.sd}};
    jt["mean_difference"] = t.mean_diff;
    jt["zero_variance"] = t.zero_variance;
    const auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) jt[key] = *v;
    };
    put("t_pooled", t.t_pooled);
    put("df_pooled", t.df_pooled);
    put("p_pooled", t.p_pooled);
    put("t_welch", t.t_welch);
    put("df_welch", t.df_welch);
    put("p_welch", t.p_welch);
    put("levene_f", t.levene_f);
    put("levene_p", t.levene_p);
    jt["note"] =
        "pooled and Welch t statistics are both reported; they differ whenever "
        "group variances do";
    j["group_comparison"]["test"] = std::move(jt);
  }

  json corr = json::object();
  for (std::size_t a = 0; a < report.panel_vars.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const std::string key = report.panel_vars[a] + "~" + report.panel_vars[b];
      if (report.correlations[a][b]) {
        const Correlation& c = *report.correlations[a][b];
        corr[key] = {{"r", c.r}, {"p", c.p}, {"n", c.n}};
      } else {
        corr[key] = nullptr;
      }
    }
  j["correlations"] = std::move(corr);

  json models = json::array();
  for (const auto& m : report.models) {
    json jm;
    jm["name"] = m.name;
    jm["converged"] = m.fit.converged;
    jm["degenerate"] = m.fit.degenerate;
    if (m.fit.converged) {
      json fixed = json::array();
      for (const auto& fe : m.fit.fixed)
        fixed.push_back({{"name", fe.name},
                         {"estimate", fe.estimate},
                         {"se", fe.se},
                         {"z", fe.z},
                         {"p", fe.p}});
      jm["fixed_effects"] = std::move(fixed);
      jm["variance_level2"] = m.fit.tau2;
      jm["variance_level1"] = m.fit.sigma2;
      jm["icc"] = m.fit.icc;
      jm["loglik"] = m.fit.loglik;
      jm["n"] = m.fit.n_obs;
      jm["groups"] = m.fit.n_groups;
      if (m.d_tau2_pct) jm["change_variance_level2_pct"] = *m.d_tau2_pct;
      if (m.d_sigma2_pct) jm["change_variance_level1_pct"] = *m.d_sigma2_pct;
    }
    models.push_back(std::move(jm));
  }
  j["models"] = std::move(models);
  j["panel"] = {{"rows", report.panel_rows}, {"groups", report.panel_groups}};
  return j.dump(2) + "\n";
}

std::string stats_report_text(const StatsReport& report) {
  std::ostringstream out;
  char buf[256];

  out << "== NPS change by study group (" << report.before_period << " -> "
      << report.after_period << ") ==\n";
  if (report.group_comparison) {
    const TwoSampleTest& t = *report.group_comparison;
    std::snprintf(buf, sizeof(buf), "  experimental: n=%zu mean=%+.4f sd=%.4f\n", t.a.n,
                  t.a.mean, t.a.sd);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  control:      n=%zu mean=%+.4f sd=%.4f\n", t.b.n,
                  t.b.mean, t.b.sd);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  mean difference: %+.4f\n", t.mean_diff);
    out << buf;
    if (t.t_pooled) {
      std::snprintf(buf, sizeof(buf), "  pooled t=%.3f (df=%.0f, p=%.4f)\n", *t.t_pooled,
                    *t.df_pooled, *t.p_pooled);
      out << buf;
    }
    if (t.t_welch) {
      std::snprintf(buf, sizeof(buf), "  Welch  t=%.3f (df=%.1f, p=%.4f)\n", *t.t_welch,
                    *t.df_welch, *t.p_welch);
      out << buf;
    }
    if (t.levene_f) {
      std::snprintf(buf, sizeof(buf), "  Levene F=%.3f (p=%.4f)\n", *t.levene_f, *t.levene_p);
      out << buf;
    }
    out << "  note: pooled and Welch t are both reported; they differ whenever\n"
           "  group variances do.\n";
  } else {
    out << "  insufficient data for the group comparison\n";
  }

  out << "\n== Correlations with NPS (account-period panel, pairwise complete) ==\n";
  for (std::size_t a = 1; a < report.panel_vars.size(); ++a) {
    const auto& c = report.correlations[a][0];
    if (c)
      std::snprintf(buf, sizeof(buf), "  %-18s r=%+.3f (n=%zu, p=%.4f)\n",
                    report.panel_vars[a].c_str(), c->r, c->n, c->p);
    else
      std::snprintf(buf, sizeof(buf), "  %-18s undefined\n", report.panel_vars[a].c_str());
    out << buf;
  }

  out << "\n== Random-intercept models (outcome: NPS) ==\n";
  for (const auto& m : report.models) {
    out << m.name;
    if (!m.predictors.empty()) {
      out << " [";
      for (std::size_t i = 0; i < m.predictors.size(); ++i)
        out << (i ? ", " : "") << m.predictors[i];
      out << "]";
    }
    out << "\n";
    if (!m.fit.converged) {
      out << "  did not converge\n";
      continue;
    }
    for (const auto& fe : m.fit.fixed) {
      std::snprintf(buf, sizeof(buf), "  %-20s %+.4f (se=%.4f, p=%.4f)\n", fe.name.c_str(),
                    fe.estimate, fe.se, fe.p);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "  variance level 2     %.4f\n", m.fit.tau2);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  variance level 1     %.4f\n", m.fit.sigma2);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  ICC                  %.2f%%\n", m.fit.icc * 100.0);
    out << buf;
    if (m.d_tau2_pct) {
      std::snprintf(buf, sizeof(buf), "  change var lev. 2    %+.2f%%\n", *m.d_tau2_pct);
      out << buf;
    }
    if (m.d_sigma2_pct) {
      std::snprintf(buf, sizeof(buf), "  change var lev. 1    %+.2f%%\n", *m.d_sigma2_pct);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "  N=%zu groups=%zu loglik=%.4f%s\n", m.fit.n_obs,
                  m.fit.n_groups, m.fit.loglik, m.fit.degenerate ? " (degenerate)" : "");
    out << buf;
  }
  return out.str();
}

void write_stats(const StatsReport& report, const RunConfig& config) {
  write_file(config.out_dir + "/stats.json", stats_report_json(report));
  write_file(config.out_dir + "/stats.txt", stats_report_text(report));
}

std::vector<Scorecard> score_records(std::span<const MetricRecord> records, NormScope scope,
                                     double remedy_threshold) {
  // Group records by normalization scope, normalize per group, reassemble
  // in input order.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::string key;
    switch (scope) {
      case NormScope::period: key = records[i].period; break;
      case NormScope::account: key = records[i].account; break;
      case NormScope::global: key = ""; break;
    }
    groups[key].push_back(i);
  }
  std::vector<Scorecard> cards(records.size());
  for (const auto& [key, indices] : groups) {
    std::vector<MetricRecord> slice;
    slice.reserve(indices.size());
    for (std::size_t i : indices) slice.push_back(records[i]);
    auto scored = normalize(slice);
    for (std::size_t k = 0; k < indices.size(); ++k) cards[indices[k]] = std::move(scored[k]);
  }
  apply_remedies(cards, remedy_threshold);
  return cards;
}

std::string scorecards_csv(std::span<const Scorecard> cards) {
  std::ostringstream out;
  out << "account,period,central_leaders,steady_leadership,complexity,responsiveness,"
         "initiative,remedies\n";
  for (const auto& c : cards) {
    out << csv_field(c.account) << ',' << csv_field(c.period);
    const ScoreMetric order[] = {ScoreMetric::central_leaders, ScoreMetric::steady_leadership,
                                 ScoreMetric::complexity, ScoreMetric::responsiveness,
                                 ScoreMetric::initiative};
    for (ScoreMetric m : order)
      out << ',' << score_field(c.scores[static_cast<std::size_t>(m)]);
    std::string remedies;
    for (ScoreMetric m : c.flagged) {
      if (!remedies.empty()) remedies += "; ";
      remedies += std::string(metric_label(m)) + ": " + remedy_text(m);
    }
    out << ',' << csv_field(remedies) << '\n';
  }
  return out.str();
}

std::string scorecards_json(std::span<const Scorecard> cards) {
  json j = json::array();
  for (const auto& c : cards) {
    json jc;
    jc["account"] = c.account;
    jc["period"] = c.period;
    json scores = json::object();
    for (std::size_t m = 0; m < kScoreMetricCount; ++m) {
      const char* label = metric_label(static_cast<ScoreMetric>(m));
      if (c.scores[m])
        scores[label] = *c.scores[m];
      else
        scores[label] = nullptr;
    }
    jc["scores"] = std::move(scores);
    json remedies = json::array();
    for (ScoreMetric m : c.flagged)
      remedies.push_back({{"metric", metric_label(m)}, {"remedy", remedy_text(m)}});
    jc["remedies"] = std::move(remedies);
    j.push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

void write_scorecards(std::span<const Scorecard> cards, const RunConfig& config) {
  write_file(config.out_dir + "/scorecards.csv", scorecards_csv(cards));
  write_file(config.out_dir + "/scorecards.json", scorecards_json(cards));
  write_file(config.out_dir + "/scorecards.html", scorecard_html(cards));
}

}  // namespace commlens
