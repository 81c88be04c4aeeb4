#include "commlens/stats.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace commlens {

namespace {

double two_sided_t_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

double f_upper_p(double f, double df1, double df2) {
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

}  // namespace

NpsResult nps(std::span<const int> scores) {
  if (scores.empty()) throw std::invalid_argument("nps: empty score list");
  std::size_t promoters = 0, passives = 0, detractors = 0;
  for (int s : scores) {
    if (s < 0 || s > 10) throw std::invalid_argument("nps: score out of range 0..10");
    if (s >= 9)
      ++promoters;
    else if (s >= 7)
      ++passives;
    else
      ++detractors;
  }
  NpsResult r;
  r.n = scores.size();
  const double n = static_cast<double>(scores.size());
  r.promoters = promoters / n;
  r.passives = passives / n;
  r.detractors = detractors / n;
  r.nps = r.promoters - r.detractors;
  return r;
}

double nps_change(const NpsResult& before, const NpsResult& after) {
  return after.nps - before.nps;
}

GroupSummary summarize(std::span<const double> sample) {
  GroupSummary s;
  s.n = sample.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : sample) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : sample) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

TwoSampleTest two_sample_test(const GroupSummary& a, const GroupSummary& b) {
  if (a.n < 2 || b.n < 2) throw std::invalid_argument("two_sample_test: need n >= 2 per group");
  TwoSampleTest t;
  t.a = a;
  t.b = b;
  t.mean_diff = a.mean - b.mean;

  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  const double va = a.sd * a.sd, vb = b.sd * b.sd;

  if (va == 0.0 && vb == 0.0) {
    t.zero_variance = true;
    return t;
  }

  const double pooled_var = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
  t.df_pooled = na + nb - 2.0;
  t.t_pooled = t.mean_diff / std::sqrt(pooled_var * (1.0 / na + 1.0 / nb));
  t.p_pooled = two_sided_t_p(*t.t_pooled, *t.df_pooled);

  const double se2 = va / na + vb / nb;
  t.t_welch = t.mean_diff / std::sqrt(se2);
  t.df_welch = se2 * se2 /
               (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
  t.p_welch = two_sided_t_p(*t.t_welch, *t.df_welch);
  return t;
}

TwoSampleTest two_sample_test(std::span<const double> a, std::span<const double> b) {
  TwoSampleTest t = two_sample_test(summarize(a), summarize(b));

  // Levene, classic form: one-way F on mean-centered absolute deviations.
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::vector<double> za, zb;
  za.reserve(a.size());
  zb.reserve(b.size());
  for (double v : a) za.push_back(std::fabs(v - t.a.mean));
  for (double v : b) zb.push_back(std::fabs(v - t.b.mean));
  const GroupSummary sa = summarize(za), sb = summarize(zb);
  const double grand = (sa.mean * na + sb.mean * nb) / (na + nb);
  const double between = na * (sa.mean - grand) * (sa.mean - grand) +
                         nb * (sb.mean - grand) * (sb.mean - grand);
  double within = 0.0;
  for (double z : za) within += (z - sa.mean) * (z - sa.mean);
  for (double z : zb) within += (z - sb.mean) * (z - sb.mean);
  const double df2 = na + nb - 2.0;
  if (within > 0.0) {
    t.levene_f = between / (within / df2);
    t.levene_p = f_upper_p(*t.levene_f, 1.0, df2);
  } else if (between == 0.0) {
    t.levene_f = 0.0;  // identical spreads, no within variance
    t.levene_p = 1.0;
  }
  return t;
}

std::optional<Correlation> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;

  Correlation c;
  c.n = x.size();
  c.r = sxy / std::sqrt(sxx * syy);
  c.df = n - 2.0;
  const double r2 = std::min(c.r * c.r, 1.0);
  if (r2 >= 1.0) {
    c.t = c.r > 0 ? std::numeric_limits<double>::infinity()
                  : -std::numeric_limits<double>::infinity();
    c.p = 0.0;
  } else {
    c.t = c.r * std::sqrt(c.df / (1.0 - r2));
    c.p = two_sided_t_p(c.t, c.df);
  }
  return c;
}

}  // namespace commlens
