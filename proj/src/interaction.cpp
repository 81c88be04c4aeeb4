#include "commlens/interaction.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "commlens/complexity.hpp"

namespace commlens {

namespace {

bool addressed_to(const Message& m, const ActorId& who) {
  return std::find(m.recipients.begin(), m.recipients.end(), who) != m.recipients.end();
}

std::string subject_key(const std::string& subject) {
  const auto tokens = tokenize(subject);
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key.push_back(' ');
    key += t;
  }
  return key;
}

}  // namespace

std::vector<ReplyPair> match_replies(std::span<const Message> messages,
                                     const ReplyMatchOptions& opts) {
  // Time order makes "first qualifying reply" a first-match scan.
  std::vector<const Message*> ordered;
  ordered.reserve(messages.size());
  for (const Message& m : messages) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Message* a, const Message* b) {
    if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
    return a->id < b->id;
  });

  std::unordered_map<std::string, const Message*> by_id;
  by_id.reserve(ordered.size());
  for (const Message* m : ordered) by_id.emplace(m->id, m);

  const auto qualifies = [&](const Message& original, const Message& reply) {
    if (reply.sender == original.sender) return false;
    if (reply.timestamp <= original.timestamp) return false;
    if (reply.timestamp - original.timestamp > opts.cap_seconds) return false;
    if (!addressed_to(original, reply.sender)) return false;
    return addressed_to(reply, original.sender);
  };

  // (original id, responder) -> pair; primary links win over fallback.
  std::map<std::pair<std::string, ActorId>, ReplyPair> matched;

  for (const Message* reply : ordered) {
    if (!reply->in_reply_to) continue;
    auto it = by_id.find(*reply->in_reply_to);
    if (it == by_id.end()) continue;
    const Message& original = *it->second;
    if (!qualifies(original, *reply)) continue;
    matched.try_emplace({original.id, reply->sender},
                        ReplyPair{original.id, reply->id, reply->sender,
                                  reply->timestamp - original.timestamp});
  }

  if (opts.subject_fallback) {
    std::unordered_map<std::string, std::vector<const Message*>> by_subject;
    for (const Message* m : ordered) {
      std::string key = subject_key(m->subject);
      if (key.empty()) continue;  // tokenless subjects never match by subject
      by_subject[std::move(key)].push_back(m);
    }
    for (const auto& [key, group] : by_subject) {
      for (std::size_t oi = 0; oi < group.size(); ++oi) {
        const Message& original = *group[oi];
        for (const ActorId& responder : original.recipients) {
          if (responder == original.sender) continue;
          if (matched.count({original.id, responder})) continue;
          for (std::size_t ri = oi + 1; ri < group.size(); ++ri) {
            const Message& reply = *group[ri];
            if (reply.timestamp - original.timestamp > opts.cap_seconds) break;
            if (reply.sender != responder) continue;
            if (!qualifies(original, reply)) continue;
            matched.emplace(std::pair{original.id, responder},
                            ReplyPair{original.id, reply.id, responder,
                                      reply.timestamp - original.timestamp});
            break;
          }
        }
      }
    }
  }

  std::vector<ReplyPair> out;
  out.reserve(matched.size());
  for (auto& [key, pair] : matched) out.push_back(std::move(pair));
  return out;
}

std::optional<double> art(std::span<const ReplyPair> pairs) {
  if (pairs.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& p : pairs) sum += static_cast<double>(p.latency_seconds);
  return sum / static_cast<double>(pairs.size());
}

std::optional<double> art(std::span<const ReplyPair> pairs, const std::set<ActorId>& responders) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : pairs) {
    if (responders.count(p.responder) == 0) continue;
    sum += static_cast<double>(p.latency_seconds);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

ContributionStats contribution_stats(const Sociomatrix& x) {
  const std::size_t n = x.size();
  ContributionStats stats;
  std::uint64_t total_volume = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ContributionStats::Entry e;
    e.actor = x.actors()[i];
    for (std::size_t j = 0; j < n; ++j) {
      e.sent += x.at(i, j);
      e.received += x.at(j, i);
    }
    if (e.sent + e.received == 0) continue;
    e.ci = (static_cast<double>(e.sent) - static_cast<double>(e.received)) /
           (static_cast<double>(e.sent) + static_cast<double>(e.received));
    total_volume += e.sent + e.received;
    stats.entries.push_back(std::move(e));
  }
  if (stats.entries.empty()) return stats;  // all-zero matrix: awci stays missing

  for (auto& e : stats.entries) {
    e.weight = static_cast<double>(e.sent + e.received) / static_cast<double>(total_volume);
    stats.weighted_mean_ci += e.weight * e.ci;
  }
  double var = 0.0;
  for (const auto& e : stats.entries) {
    const double d = e.ci - stats.weighted_mean_ci;
    var += e.weight * d * d;
  }
  stats.awci = var;
  return stats;
}

}  // namespace commlens
