#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace commlens {

struct NpsResult {
  std::size_t n = 0;
  double promoters = 0.0;   // fraction scoring 9-10
  double passives = 0.0;    // fraction scoring 7-8
  double detractors = 0.0;  // fraction scoring 0-6
  double nps = 0.0;         // promoters - detractors, in [-1, 1]
};

// Throws std::invalid_argument on an empty list or a score outside 0..10.
NpsResult nps(std::span<const int> scores);

double nps_change(const NpsResult& before, const NpsResult& after);

struct GroupSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n-1)
};

GroupSummary summarize(std::span<const double> sample);

// Both t variants are always reported side by side; they differ whenever
// group variances do, and which one a published table used is not always
// recoverable.
struct TwoSampleTest {
  GroupSummary a, b;
  double mean_diff = 0.0;  // mean(a) - mean(b)
  std::optional<double> t_pooled, df_pooled, p_pooled;
  std::optional<double> t_welch, df_welch, p_welch;
  std::optional<double> levene_f, levene_p;  // raw-data mode only
  bool zero_variance = false;                // both groups constant; t undefined
};

TwoSampleTest two_sample_test(std::span<const double> a, std::span<const double> b);
// Summary-stat mode: t statistics only, no Levene.
TwoSampleTest two_sample_test(const GroupSummary& a, const GroupSummary& b);

struct Correlation {
  double r = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p = 0.0;  // two-sided
  std::size_t n = 0;
};

// Nullopt when either series is constant. Throws on length mismatch or
// n < 3.
std::optional<Correlation> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace commlens
