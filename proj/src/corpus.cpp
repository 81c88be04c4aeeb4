#include "commlens/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <istream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace commlens {

namespace {

using nlohmann::json;

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool get_string(const json& j, const char* key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end()) return false;
  if (it->is_string()) {
    out = it->get<std::string>();
    return true;
  }
  return false;
}

// Accepts an array of strings; missing key yields an empty list.
bool get_address_list(const json& j, const char* key, std::vector<std::string>& out) {
  auto it = j.find(key);
  if (it == j.end()) return true;
  if (!it->is_array()) return false;
  for (const auto& e : *it) {
    if (!e.is_string()) return false;
    out.push_back(e.get<std::string>());
  }
  return true;
}

}  // namespace

ParseResult parse_messages(std::istream& in, const ParseOptions& opts) {
  ParseResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      result.rejects.push_back({line_no, "malformed record"});
      continue;
    }

    Message m;
    if (!get_string(j, "id", m.id) || m.id.empty()) {
      result.rejects.push_back({line_no, "missing id"});
      continue;
    }
    std::string from;
    if (!get_string(j, "from", from) || from.empty()) {
      result.rejects.push_back({line_no, "missing sender"});
      continue;
    }
    m.sender = ActorId{from};

    std::vector<std::string> to, cc;
    if (!get_address_list(j, "to", to) || !get_address_list(j, "cc", cc)) {
      result.rejects.push_back({line_no, "malformed recipient list"});
      continue;
    }
    std::unordered_set<std::string> dedup;
    auto add = [&](const std::string& a) {
      if (!a.empty() && dedup.insert(a).second) m.recipients.push_back(ActorId{a});
    };
    for (const auto& a : to) add(a);
    if (opts.include_cc)
      for (const auto& a : cc) add(a);
    if (m.recipients.empty()) {
      result.rejects.push_back({line_no, "empty recipients"});
      continue;
    }

    std::string ts;
    if (!get_string(j, "ts", ts)) {
      result.rejects.push_back({line_no, "missing timestamp"});
      continue;
    }
    auto parsed = parse_iso8601(ts);
    if (!parsed) {
      result.rejects.push_back({line_no, "malformed timestamp"});
      continue;
    }
    m.timestamp = *parsed;

    get_string(j, "subject", m.subject);
    std::string reply;
    if (get_string(j, "in_reply_to", reply) && !reply.empty()) m.in_reply_to = reply;

    if (!seen_ids.insert(m.id).second) continue;  // duplicate id, keep first
    result.messages.push_back(std::move(m));
  }
  return result;
}

std::string serialize_message(const Message& m) {
  json j;
  j["id"] = m.id;
  j["from"] = m.sender.value;
  json to = json::array();
  for (const auto& r : m.recipients) to.push_back(r.value);
  j["to"] = std::move(to);
  j["ts"] = format_iso8601(m.timestamp);
  j["subject"] = m.subject;
  if (m.in_reply_to) j["in_reply_to"] = *m.in_reply_to;
  return j.dump();
}

ActorId anonymize_address(std::string_view address, std::string_view salt) {
  if (salt.empty()) throw std::invalid_argument("anonymize: empty salt");
  const std::string folded = lower_ascii(address);

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("anonymize: hash init failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, salt.data(), salt.size()) == 1 &&
            EVP_DigestUpdate(ctx, "\0", 1) == 1 &&
            EVP_DigestUpdate(ctx, folded.data(), folded.size()) == 1 &&
            EVP_DigestFinal_ex(ctx, digest, &digest_len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || digest_len < 16) throw std::runtime_error("anonymize: hash failed");

  static const char* hex = "0123456789abcdef";
  std::string token(32, '0');
  for (int i = 0; i < 16; ++i) {
    token[2 * i] = hex[digest[i] >> 4];
    token[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return ActorId{token};
}

std::vector<Message> anonymize(std::span<const Message> messages, std::string_view salt) {
  std::vector<Message> out;
  out.reserve(messages.size());
  for (const Message& m : messages) {
    Message a = m;
    a.sender = anonymize_address(m.sender.value, salt);
    for (auto& r : a.recipients) r = anonymize_address(r.value, salt);
    out.push_back(std::move(a));
  }
  return out;
}

AccountRoster anonymize(const AccountRoster& roster, std::string_view salt) {
  AccountRoster out;
  out.account = roster.account;
  out.group = roster.group;
  for (const auto& a : roster.members) out.members.insert(anonymize_address(a.value, salt));
  for (const auto& a : roster.clients) out.clients.insert(anonymize_address(a.value, salt));
  return out;
}

std::vector<Message> scope(std::span<const Message> messages, const AccountRoster& roster,
                           const Period& period) {
  std::vector<Message> out;
  for (const Message& m : messages) {
    if (!period.contains(m.timestamp)) continue;
    bool touches = roster.contains(m.sender);
    for (auto it = m.recipients.begin(); !touches && it != m.recipients.end(); ++it)
      touches = roster.contains(*it);
    if (touches) out.push_back(m);
  }
  return out;
}

}  // namespace commlens
