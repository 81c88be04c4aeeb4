#include "commlens/sociomatrix.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace commlens {

Sociomatrix::Sociomatrix(std::vector<ActorId> actors) : actors_(std::move(actors)) {
  if (actors_.empty()) throw std::invalid_argument("Sociomatrix: empty actor set");
  index_.reserve(actors_.size());
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    if (!index_.emplace(actors_[i], i).second)
      throw std::invalid_argument("Sociomatrix: duplicate actor " + actors_[i].value);
  }
  weights_.assign(actors_.size() * actors_.size(), 0);
}

Sociomatrix Sociomatrix::from_messages(std::span<const Message> messages,
                                       std::optional<std::vector<ActorId>> actors) {
  std::vector<ActorId> universe;
  if (actors) {
    universe = std::move(*actors);
  } else {
    std::set<ActorId> seen;
    for (const Message& m : messages) {
      seen.insert(m.sender);
      seen.insert(m.recipients.begin(), m.recipients.end());
    }
    universe.assign(seen.begin(), seen.end());
  }
  Sociomatrix x(std::move(universe));
  for (const Message& m : messages) {
    auto i = x.index_of(m.sender);
    if (!i) continue;
    for (const ActorId& r : m.recipients) {
      if (r == m.sender) continue;
      auto j = x.index_of(r);
      if (j) x.add(*i, *j, 1);
    }
  }
  return x;
}

std::optional<std::size_t> Sociomatrix::index_of(const ActorId& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Sociomatrix::add(std::size_t i, std::size_t j, std::uint32_t w) {
  if (i == j) return;
  weights_[i * size() + j] += w;
}

Sociomatrix Sociomatrix::dichotomized() const {
  Sociomatrix out(actors_);
  for (std::size_t k = 0; k < weights_.size(); ++k) out.weights_[k] = weights_[k] > 0 ? 1 : 0;
  return out;
}

Sociomatrix Sociomatrix::symmetrized() const {
  Sociomatrix out(actors_);
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.weights_[i * n + j] = std::max(at(i, j), at(j, i));
  return out;
}

std::uint64_t Sociomatrix::total_weight() const {
  std::uint64_t sum = 0;
  for (std::uint32_t w : weights_) sum += w;
  return sum;
}

std::string edge_list_text(const Sociomatrix& m) {
  std::ostringstream out;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.at(i, j) > 0)
        out << m.actors()[i].value << ' ' << m.actors()[j].value << ' ' << m.at(i, j) << '\n';
  return out.str();
}

}  // namespace commlens
