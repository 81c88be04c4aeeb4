#pragma once

#include <span>
#include <vector>

#include "commlens/types.hpp"

namespace commlens {

// Number of interior extrema of a series under strict comparison. A plateau
// (run of equal values) flanked by strictly lower values on both sides is
// one maximum, flanked by strictly higher values one minimum. Endpoints and
// end plateaus never count.
int oscillation(std::span<const double> series);

struct OscillationSeries {
  ActorId actor;
  std::vector<double> series;  // one value per window, in window order
  int oscillations = 0;
};

OscillationSeries make_oscillation_series(ActorId actor, std::vector<double> series);

long group_oscillation(std::span<const OscillationSeries> series);

}  // namespace commlens
