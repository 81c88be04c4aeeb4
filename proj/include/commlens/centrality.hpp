#pragma once

#include <optional>
#include <span>
#include <vector>

#include "commlens/rational.hpp"
#include "commlens/sociomatrix.hpp"

namespace commlens {

struct ActorCentrality {
  ActorId actor;
  double degree_inout = 0.0;          // weighted, in + out
  std::uint32_t degree_neighbors = 0;  // distinct partners, direction-blind
  Ratio betweenness_raw;
  std::optional<Ratio> betweenness_std;  // raw / ((n-1)(n-2)/2), n >= 3 only
};

// Weighted sum over row i plus column i. Throws on unknown actor.
double degree_inout(const Sociomatrix& x, const ActorId& actor);

std::uint32_t degree_neighbors(const Sociomatrix& x, const ActorId& actor);

// Geodesic betweenness per actor in matrix order. Ties are the unordered
// pairs with x(i,j) > 0 or x(j,i) > 0, so a dichotomized + symmetrized
// input is consumed as-is. Pairs with no connecting path contribute 0.
// Scores are exact fractions; Brandes accumulation, equivalent to
// enumerating every geodesic.
std::vector<Ratio> betweenness_raw(const Sociomatrix& x);

// Degrees from the weighted matrix, betweenness from the binary view.
std::vector<ActorCentrality> actor_centralities(const Sociomatrix& x);

// Freeman degree centralization over distinct-neighbor degrees:
// sum(d_max - d_i) / ((n-1)(n-2)). 1 on stars, 0 on regular graphs.
// nullopt when n < 3.
std::optional<double> group_degree_centralization(const Sociomatrix& x);

// 2 * sum(B_max - B_i) / ((n-1)^2 (n-2)) over raw betweenness scores.
std::optional<double> group_betweenness_centralization(std::span<const Ratio> raw);
std::optional<double> group_betweenness_centralization(std::span<const ActorCentrality> c);

}  // namespace commlens
