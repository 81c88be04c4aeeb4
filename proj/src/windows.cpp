#include "commlens/windows.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace commlens {

std::vector<Window> windows(std::span<const Message> messages, const WindowPlan& plan,
                            std::optional<std::pair<Timestamp, Timestamp>> span,
                            std::optional<std::vector<ActorId>> actors) {
  if (!plan.valid()) throw std::invalid_argument("windows: invalid plan");

  Timestamp lo, hi;
  if (span) {
    lo = span->first;
    hi = span->second;
  } else {
    if (messages.empty()) return {};
    lo = messages.front().timestamp;
    hi = messages.front().timestamp;
    for (const Message& m : messages) {
      lo = std::min(lo, m.timestamp);
      hi = std::max(hi, m.timestamp);
    }
    hi += 1;
  }
  if (hi <= lo) return {};

  std::vector<ActorId> universe;
  if (actors) {
    universe = std::move(*actors);
  } else {
    std::set<ActorId> seen;
    for (const Message& m : messages) {
      seen.insert(m.sender);
      seen.insert(m.recipients.begin(), m.recipients.end());
    }
    if (seen.empty()) return {};
    universe.assign(seen.begin(), seen.end());
  }

  // First window whose end reaches past lo, clamped to the grid start.
  std::int64_t k0 = 0;
  if (lo > plan.origin + plan.window_len) {
    k0 = (lo - plan.origin - plan.window_len) / plan.step + 1;
  }
  std::vector<Window> out;
  for (std::int64_t k = k0;; ++k) {
    const Timestamp w_start = plan.origin + k * plan.step;
    if (w_start >= hi) break;
    const Timestamp w_end = w_start + plan.window_len;
    std::vector<Message> inside;
    for (const Message& m : messages)
      if (m.timestamp >= w_start && m.timestamp < w_end) inside.push_back(m);
    out.push_back(Window{w_start, w_end, Sociomatrix::from_messages(inside, universe)});
  }
  return out;
}

}  // namespace commlens
