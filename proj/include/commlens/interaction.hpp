#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "commlens/sociomatrix.hpp"
#include "commlens/types.hpp"

namespace commlens {

struct ReplyPair {
  std::string original_id;
  std::string reply_id;
  ActorId responder;
  std::int64_t latency_seconds = 0;  // > 0, <= cap
};

struct ReplyMatchOptions {
  std::int64_t cap_seconds = 14 * kSecondsPerDay;
  bool subject_fallback = true;  // off = strict in_reply_to threading
};

// Pairs each message with the first qualifying reply per (original,
// responder). Primary rule: a valid in_reply_to link. Fallback rule: the
// earliest later message from a recipient back to the sender with the same
// normalized subject. A qualifying reply is strictly later, addressed to
// the original sender, within the cap; self-responses are ignored.
std::vector<ReplyPair> match_replies(std::span<const Message> messages,
                                     const ReplyMatchOptions& opts = {});

// Arithmetic mean latency, optionally restricted to a responder set
// (one actor, or a roster side). Nullopt when no pair is in scope.
std::optional<double> art(std::span<const ReplyPair> pairs);
std::optional<double> art(std::span<const ReplyPair> pairs, const std::set<ActorId>& responders);

struct ContributionStats {
  struct Entry {
    ActorId actor;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    double ci = 0.0;      // (sent - received) / (sent + received)
    double weight = 0.0;  // share of total volume
  };
  std::vector<Entry> entries;        // volume > 0 actors, matrix order
  double weighted_mean_ci = 0.0;
  std::optional<double> awci;        // volume-weighted variance of ci
};

ContributionStats contribution_stats(const Sociomatrix& x);

}  // namespace commlens
