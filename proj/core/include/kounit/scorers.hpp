#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kounit/beam_search.hpp"

namespace kounit::scorers {

// Same distribution after every prefix.
class UniformScorer final : public AttentionScorer {
 public:
  explicit UniformScorer(std::size_t vocab_size);
  std::size_t vocab_size() const override { return vocab_size_; }
  std::vector<double> score_next(std::span<const TokenId> prefix) const override;

 private:
  std::size_t vocab_size_;
};

// Explicit prefix -> distribution table with a fallback row.
//
// File form:
//   V=<int>
//   <prefix><TAB><V log-probabilities>
// where <prefix> is "-" for the empty prefix, "*" for the fallback row, or
// comma-separated token ids. Without a "*" row the fallback is uniform.
class TableScorer final : public AttentionScorer {
 public:
  // Throws FormatError when a row has the wrong size or does not normalize.
  TableScorer(std::size_t vocab_size, std::map<TokenSequence, std::vector<double>> rows,
              std::vector<double> fallback = {});

  std::size_t vocab_size() const override { return vocab_size_; }
  std::vector<double> score_next(std::span<const TokenId> prefix) const override;

  static TableScorer load(std::istream& in);
  static TableScorer load_file(const std::string& path);
  void save(std::ostream& out) const;

 private:
  std::size_t vocab_size_;
  std::map<TokenSequence, std::vector<double>> rows_;
  std::vector<double> fallback_;
};

// Token n-gram with add-k smoothing; the history is padded with <sos/eos>
// and each training sequence ends with it.
//
// File form: header "order=<n> add_k=<k>", then one training sequence per
// line as space-separated token ids.
class NgramScorer final : public AttentionScorer {
 public:
  // Throws InvalidConfig for order < 1, add_k <= 0 or ids outside the vocabulary.
  NgramScorer(std::size_t vocab_size, TokenId sos_eos, int order, double add_k,
              std::span<const TokenSequence> training);

  std::size_t vocab_size() const override { return vocab_size_; }
  std::vector<double> score_next(std::span<const TokenId> prefix) const override;

  int order() const noexcept { return order_; }

  static NgramScorer load(std::istream& in, std::size_t vocab_size, TokenId sos_eos);
  static NgramScorer load_file(const std::string& path, std::size_t vocab_size, TokenId sos_eos);

 private:
  TokenSequence history(std::span<const TokenId> prefix) const;

  std::size_t vocab_size_;
  TokenId sos_eos_;
  int order_;
  double add_k_;
  std::map<TokenSequence, std::vector<double>> counts_;  // history -> next-token counts
};

}  // namespace kounit::scorers
