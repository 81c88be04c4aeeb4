#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "commlens/types.hpp"

namespace commlens {

struct ParseOptions {
  bool include_cc = true;  // merge cc into recipients
};

struct Reject {
  std::size_t line;  // 1-based input line number
  std::string reason;
};

struct ParseResult {
  std::vector<Message> messages;
  std::vector<Reject> rejects;
};

// Reads line-delimited records (one JSON object per line) with fields
// id, from, to[], cc[], ts, subject, in_reply_to. Unknown fields are
// ignored; blank lines are skipped. Bad records land in rejects with their
// line number, the stream is never aborted. Duplicate ids keep the first
// occurrence.
ParseResult parse_messages(std::istream& in, const ParseOptions& opts = {});

// Canonical one-line JSON for a message; parse(serialize(m)) == m.
std::string serialize_message(const Message& m);

// Salted token for one address: case-folded, hashed, hex. Deterministic per
// (address, salt); distinct salts separate tokens. Throws on empty salt.
ActorId anonymize_address(std::string_view address, std::string_view salt);

// Rewrites sender/recipients of every message. Input must hold raw
// addresses (applies exactly once).
std::vector<Message> anonymize(std::span<const Message> messages, std::string_view salt);

AccountRoster anonymize(const AccountRoster& roster, std::string_view salt);

// Keeps messages inside [period.start, period.end) that touch the roster
// (sender or any recipient is a member or client).
std::vector<Message> scope(std::span<const Message> messages, const AccountRoster& roster,
                           const Period& period);

}  // namespace commlens
