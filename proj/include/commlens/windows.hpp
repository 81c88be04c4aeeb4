#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "commlens/sociomatrix.hpp"
#include "commlens/types.hpp"

namespace commlens {

// Sliding-window grid anchored at origin: window k covers
// [origin + k*step, origin + k*step + window_len).
struct WindowPlan {
  std::int64_t window_len = 7 * kSecondsPerDay;
  std::int64_t step = 7 * kSecondsPerDay;
  Timestamp origin = 0;

  bool valid() const { return window_len > 0 && step > 0 && step <= window_len; }
};

struct Window {
  Timestamp start = 0;
  Timestamp end = 0;
  Sociomatrix matrix;
};

// Builds one matrix per window intersecting the span (by default the
// message span, [min_ts, max_ts + 1)). Every window shares one actor
// universe — supplied, or the union observed over all messages — so series
// indexed by actor stay aligned across windows; isolates keep degree 0.
// Messages before the origin fall into no window.
std::vector<Window> windows(std::span<const Message> messages, const WindowPlan& plan,
                            std::optional<std::pair<Timestamp, Timestamp>> span = std::nullopt,
                            std::optional<std::vector<ActorId>> actors = std::nullopt);

}  // namespace commlens
