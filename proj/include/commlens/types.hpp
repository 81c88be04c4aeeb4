#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "commlens/time.hpp"

namespace commlens {

// Stable opaque token for a mailbox. Values are either raw addresses
// (pre-anonymization) or salted-hash tokens; the rest of the pipeline never
// needs to know which.
struct ActorId {
  std::string value;

  auto operator<=>(const ActorId&) const = default;
  bool operator==(const ActorId&) const = default;
};

// One e-mail metadata record. Recipients hold to + cc merged, deduplicated,
// in first-seen order. Sender may appear among recipients (self-mail); arcs
// to self are dropped later at matrix construction.
struct Message {
  std::string id;
  ActorId sender;
  std::vector<ActorId> recipients;
  Timestamp timestamp = 0;
  std::string subject;
  std::optional<std::string> in_reply_to;

  bool operator==(const Message&) const = default;
};

enum class StudyGroup { experimental, control };

// Provider members vs. customer clients for one account.
struct AccountRoster {
  std::string account;
  std::set<ActorId> members;
  std::set<ActorId> clients;
  StudyGroup group = StudyGroup::control;

  bool contains(const ActorId& a) const {
    return members.count(a) > 0 || clients.count(a) > 0;
  }
};

// One collection wave. Half-open interval [start, end); time_code is the
// numeric position on the regression time axis.
struct Period {
  std::string label;
  Timestamp start = 0;
  Timestamp end = 0;
  double time_code = 0.0;

  bool contains(Timestamp t) const { return t >= start && t < end; }
};

}  // namespace commlens

template <>
struct std::hash<commlens::ActorId> {
  std::size_t operator()(const commlens::ActorId& a) const noexcept {
    return std::hash<std::string>{}(a.value);
  }
};
