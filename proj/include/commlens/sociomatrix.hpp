#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "commlens/types.hpp"

namespace commlens {

// Weighted directed actor-by-actor interaction matrix. x(i, j) counts
// messages from actor i addressed to actor j; the diagonal is always zero.
// Actor order is the construction order: sorted lexicographically by token
// when derived from messages, caller order when a universe is supplied.
class Sociomatrix {
 public:
  explicit Sociomatrix(std::vector<ActorId> actors);

  // One arc per distinct recipient per message, weight 1 each; self-arcs
  // dropped. With a supplied universe, pairs touching unknown actors are
  // ignored. Without one, the universe is the union of senders and
  // recipients observed, sorted.
  static Sociomatrix from_messages(std::span<const Message> messages,
                                   std::optional<std::vector<ActorId>> actors = std::nullopt);

  std::size_t size() const { return actors_.size(); }
  const std::vector<ActorId>& actors() const { return actors_; }
  std::optional<std::size_t> index_of(const ActorId& a) const;

  std::uint32_t at(std::size_t i, std::size_t j) const { return weights_[i * size() + j]; }
  void add(std::size_t i, std::size_t j, std::uint32_t w);

  // x'(i,j) = 1 iff x(i,j) > 0. Idempotent.
  Sociomatrix dichotomized() const;
  // x'(i,j) = x'(j,i) = max(x(i,j), x(j,i)).
  Sociomatrix symmetrized() const;

  std::uint64_t total_weight() const;

  bool operator==(const Sociomatrix&) const = default;

 private:
  std::vector<ActorId> actors_;
  std::unordered_map<ActorId, std::size_t> index_;
  std::vector<std::uint32_t> weights_;  // row-major n*n
};

// "i j weight" per line for nonzero entries, row-major order.
std::string edge_list_text(const Sociomatrix& m);

}  // namespace commlens
