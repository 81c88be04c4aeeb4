#include "commlens/centrality.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>

namespace commlens {

namespace {

std::vector<std::vector<std::uint32_t>> undirected_adjacency(const Sociomatrix& x) {
  const std::size_t n = x.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (x.at(i, j) > 0 || x.at(j, i) > 0) {
        adj[i].push_back(static_cast<std::uint32_t>(j));
        adj[j].push_back(static_cast<std::uint32_t>(i));
      }
  return adj;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  // Counts must stay representable as Ratio numerators.
  constexpr auto limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  if (b > limit - a) throw std::overflow_error("betweenness: geodesic count overflow");
  return a + b;
}

}  // namespace

double degree_inout(const Sociomatrix& x, const ActorId& actor) {
  auto idx = x.index_of(actor);
  if (!idx) throw std::invalid_argument("degree_inout: unknown actor " + actor.value);
  const std::size_t i = *idx, n = x.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += static_cast<double>(x.at(i, j)) + x.at(j, i);
  return sum;
}

std::uint32_t degree_neighbors(const Sociomatrix& x, const ActorId& actor) {
  auto idx = x.index_of(actor);
  if (!idx) throw std::invalid_argument("degree_neighbors: unknown actor " + actor.value);
  const std::size_t i = *idx, n = x.size();
  std::uint32_t count = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i && (x.at(i, j) > 0 || x.at(j, i) > 0)) ++count;
  return count;
}

std::vector<Ratio> betweenness_raw(const Sociomatrix& x) {
  const std::size_t n = x.size();
  const auto adj = undirected_adjacency(x);
  std::vector<Ratio> accumulated(n, Ratio(0));

  constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(n);
  std::vector<std::uint64_t> sigma(n);
  std::vector<std::vector<std::uint32_t>> pred(n);
  std::vector<std::uint32_t> order;
  order.reserve(n);

  for (std::uint32_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(sigma.begin(), sigma.end(), 0);
    for (auto& p : pred) p.clear();
    order.clear();

    dist[s] = 0;
    sigma[s] = 1;
    std::queue<std::uint32_t> frontier;
    frontier.push(s);
    while (!frontier.empty()) {
      const std::uint32_t v = frontier.front();
      frontier.pop();
      order.push_back(v);
      for (std::uint32_t w : adj[v]) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          frontier.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] = checked_add(sigma[w], sigma[v]);
          pred[w].push_back(v);
        }
      }
    }

    // Dependency accumulation; each unordered pair is visited from both
    // endpoints, hence the final halving.
    std::vector<Ratio> delta(n, Ratio(0));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::uint32_t w = *it;
      const Ratio coeff = (Ratio(1) + delta[w]) / Ratio(static_cast<std::int64_t>(sigma[w]));
      for (std::uint32_t v : pred[w])
        delta[v] += Ratio(static_cast<std::int64_t>(sigma[v])) * coeff;
      if (w != s) accumulated[w] += delta[w];
    }
  }

  for (auto& r : accumulated) r = r / Ratio(2);
  return accumulated;
}

std::vector<ActorCentrality> actor_centralities(const Sociomatrix& x) {
  const std::size_t n = x.size();
  const auto raw = betweenness_raw(x);
  std::vector<ActorCentrality> out(n);
  const bool std_defined = n >= 3;
  const Ratio pairs = std_defined
                          ? Ratio(static_cast<std::int64_t>(n - 1) * static_cast<std::int64_t>(n - 2), 2)
                          : Ratio(1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].actor = x.actors()[i];
    out[i].degree_inout = degree_inout(x, x.actors()[i]);
    out[i].degree_neighbors = degree_neighbors(x, x.actors()[i]);
    out[i].betweenness_raw = raw[i];
    if (std_defined) out[i].betweenness_std = raw[i] / pairs;
  }
  return out;
}

std::optional<double> group_degree_centralization(const Sociomatrix& x) {
  const std::size_t n = x.size();
  if (n < 3) return std::nullopt;
  std::vector<std::uint32_t> deg(n);
  for (std::size_t i = 0; i < n; ++i) deg[i] = degree_neighbors(x, x.actors()[i]);
  const std::uint32_t dmax = *std::max_element(deg.begin(), deg.end());
  std::uint64_t sum = 0;
  for (std::uint32_t d : deg) sum += dmax - d;
  return static_cast<double>(sum) /
         (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

std::optional<double> group_betweenness_centralization(std::span<const Ratio> raw) {
  const std::size_t n = raw.size();
  if (n < 3) return std::nullopt;
  const Ratio bmax = *std::max_element(raw.begin(), raw.end());
  double sum = 0.0;
  for (const Ratio& b : raw) sum += (bmax - b).to_double();
  const double denom = static_cast<double>(n - 1) * static_cast<double>(n - 1) *
                       static_cast<double>(n - 2);
  return 2.0 * sum / denom;
}

std::optional<double> group_betweenness_centralization(std::span<const ActorCentrality> c) {
  std::vector<Ratio> raw;
  raw.reserve(c.size());
  for (const auto& a : c) raw.push_back(a.betweenness_raw);
  return group_betweenness_centralization(std::span<const Ratio>(raw));
}

}  // namespace commlens
