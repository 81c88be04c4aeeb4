#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commlens/types.hpp"

namespace commlens {

// Case-folded tokens split on non-alphanumeric runs. Leading reply/forward
// markers (re, fw, fwd followed by a separator) are stripped repeatedly.
// Bytes >= 0x80 count as token characters, so non-ASCII words survive.
std::vector<std::string> tokenize(std::string_view subject);

// Document frequencies over a subject corpus. A document is one subject
// with at least one token; df counts documents containing a term, not
// occurrences.
class IdfTable {
 public:
  // Throws std::invalid_argument when no subject yields a token.
  static IdfTable build(std::span<const std::string> subjects);

  std::size_t doc_count() const { return doc_count_; }              // N
  std::size_t df(const std::string& term) const;                    // 0 when absent
  double idf(const std::string& term) const;                        // ln(N/df); unseen -> ln(N)
  double max_idf() const { return max_idf_; }                       // ln(N/min_df)
  const std::map<std::string, std::size_t>& frequencies() const { return df_; }

 private:
  std::size_t doc_count_ = 0;
  double max_idf_ = 0.0;
  std::map<std::string, std::size_t> df_;
};

// Mean idf of the subject's token occurrences, normalized by the largest
// idf in the table so scores live in [0, 1] and survive corpus duplication
// unchanged. Tokenless subjects and single-document corpora score 0.
double complexity(std::string_view subject, const IdfTable& table);
double complexity(const Message& message, const IdfTable& table);

// Unweighted mean over messages with at least one token; nullopt if none.
std::optional<double> group_complexity(std::span<const Message> messages, const IdfTable& table);

}  // namespace commlens
