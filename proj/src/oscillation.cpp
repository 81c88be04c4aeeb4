#include "commlens/oscillation.hpp"

namespace commlens {

int oscillation(std::span<const double> series) {
  // Collapse plateaus, then count strict interior extrema.
  std::vector<double> runs;
  for (double v : series)
    if (runs.empty() || runs.back() != v) runs.push_back(v);

  int count = 0;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
    const bool max = runs[i] > runs[i - 1] && runs[i] > runs[i + 1];
    const bool min = runs[i] < runs[i - 1] && runs[i] < runs[i + 1];
    if (max || min) ++count;
  }
  return count;
}

OscillationSeries make_oscillation_series(ActorId actor, std::vector<double> series) {
  OscillationSeries s;
  s.actor = std::move(actor);
  s.oscillations = oscillation(series);
  s.series = std::move(series);
  return s;
}

long group_oscillation(std::span<const OscillationSeries> series) {
  long total = 0;
  for (const auto& s : series) total += s.oscillations;
  return total;
}

}  // namespace commlens
