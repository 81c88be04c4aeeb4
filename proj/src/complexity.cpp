#include "commlens/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace commlens {

namespace {

bool is_token_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char fold(unsigned char c) {
  if (c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
  return static_cast<char>(c);
}

bool is_reply_marker(std::string_view token) {
  return token == "re" || token == "fw" || token == "fwd";
}

}  // namespace

std::vector<std::string> tokenize(std::string_view subject) {
  std::size_t pos = 0;
  const auto next_token = [&](std::size_t from, std::size_t& begin, std::size_t& end) {
    begin = from;
    while (begin < subject.size() && !is_token_char(subject[begin])) ++begin;
    end = begin;
    while (end < subject.size() && is_token_char(subject[end])) ++end;
    return begin < subject.size();
  };

  // Strip leading markers; the marker must be followed by a separator.
  for (;;) {
    std::size_t begin, end;
    if (!next_token(pos, begin, end)) break;
    std::string tok;
    for (std::size_t i = begin; i < end; ++i) tok.push_back(fold(subject[i]));
    if (is_reply_marker(tok) && end < subject.size()) {
      pos = end;
      continue;
    }
    break;
  }

  std::vector<std::string> tokens;
  std::size_t begin, end;
  while (next_token(pos, begin, end)) {
    std::string tok;
    tok.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) tok.push_back(fold(subject[i]));
    tokens.push_back(std::move(tok));
    pos = end;
  }
  return tokens;
}

IdfTable IdfTable::build(std::span<const std::string> subjects) {
  if (subjects.empty()) throw std::invalid_argument("IdfTable: empty corpus");
  IdfTable table;
  for (const std::string& subject : subjects) {
    const auto tokens = tokenize(subject);
    if (tokens.empty()) continue;
    ++table.doc_count_;
    std::set<std::string_view> distinct(tokens.begin(), tokens.end());
    for (auto t : distinct) ++table.df_[std::string(t)];
  }
  if (table.doc_count_ == 0) throw std::invalid_argument("IdfTable: no tokenizable subject");

  std::size_t min_df = table.doc_count_;
  for (const auto& [term, df] : table.df_) min_df = std::min(min_df, df);
  table.max_idf_ = std::log(static_cast<double>(table.doc_count_) / static_cast<double>(min_df));
  return table;
}

std::size_t IdfTable::df(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

double IdfTable::idf(const std::string& term) const {
  const std::size_t d = std::max<std::size_t>(df(term), 1);  // unseen terms act as df = 1
  return std::log(static_cast<double>(doc_count_) / static_cast<double>(d));
}

double complexity(std::string_view subject, const IdfTable& table) {
  const auto tokens = tokenize(subject);
  if (tokens.empty()) return 0.0;
  if (table.max_idf() <= 0.0) return 0.0;  // N == 1, or every term ubiquitous
  double sum = 0.0;
  for (const auto& t : tokens) sum += table.idf(t);
  const double score = (sum / static_cast<double>(tokens.size())) / table.max_idf();
  return std::clamp(score, 0.0, 1.0);
}

double complexity(const Message& message, const IdfTable& table) {
  return complexity(message.subject, table);
}

std::optional<double> group_complexity(std::span<const Message> messages, const IdfTable& table) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const Message& m : messages) {
    if (tokenize(m.subject).empty()) continue;
    sum += complexity(m.subject, table);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace commlens
