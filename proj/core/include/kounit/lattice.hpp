#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kounit/vocabulary.hpp"

namespace kounit {

// T x V matrix of per-frame log-probabilities; each row must log-sum-exp to
// zero within kRowTolerance.
class LogProbLattice {
 public:
  static constexpr double kRowTolerance = 1e-6;

  // Throws DimensionMismatch on a bad shape or blank id, FormatError when a
  // row does not normalize.
  LogProbLattice(std::size_t frames, std::size_t vocab_size, std::vector<double> values, TokenId blank = 0);

  // Row-wise log-softmax of unnormalized scores.
  static LogProbLattice from_logits(std::size_t frames, std::size_t vocab_size, std::span<const double> logits,
                                    TokenId blank = 0);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  TokenId blank() const noexcept { return blank_; }

  std::span<const double> row(std::size_t t) const noexcept {
    return {values_.data() + t * vocab_size_, vocab_size_};
  }
  double operator()(std::size_t t, TokenId v) const noexcept {
    return values_[t * vocab_size_ + static_cast<std::size_t>(v)];
  }
  std::span<const double> values() const noexcept { return values_; }

  // Text form: "T=<int> V=<int> blank=<int>", then T lines of V values
  // printed with round-trip precision.
  void save(std::ostream& out) const;
  static LogProbLattice load(std::istream& in);
  void save_file(const std::string& path) const;
  static LogProbLattice load_file(const std::string& path);

 private:
  std::size_t frames_;
  std::size_t vocab_size_;
  TokenId blank_;
  std::vector<double> values_;
};

}  // namespace kounit
