#pragma once

#include <span>
#include <vector>

#include "kounit/lattice.hpp"
#include "kounit/log_math.hpp"
#include "kounit/vocabulary.hpp"

namespace kounit::ctc {

// Many-to-one map from a frame path to a label sequence: merge adjacent
// repeats, then drop blanks.
TokenSequence collapse(std::span<const TokenId> path, TokenId blank = 0);

// Fewest frames that can emit `labels`: one per label plus one blank between
// each pair of equal neighbours.
std::size_t min_frames(std::span<const TokenId> labels);

struct ForwardResult {
  double log_prob = kLogZero;  // log P(labels | lattice)
  bool alignable = false;      // false when T < min_frames(labels); log_prob is then kLogZero
};

// Sum over every path that collapses to `labels`, by the forward recursion on
// the blank-interleaved label sequence. Throws UnknownTokenId for ids outside
// the lattice and InvalidConfig if `labels` contains the blank.
ForwardResult forward(const LogProbLattice& lattice, std::span<const TokenId> labels);

struct GradientResult {
  double log_prob = kLogZero;
  bool alignable = false;
  // d log P / d lattice(t, v), row-major T x V. Entry (t, v) is the posterior
  // occupancy of symbol v at frame t; zero where v cannot be emitted at t,
  // and all zero when the labels are not alignable.
  std::vector<double> grad;
};

GradientResult gradient(const LogProbLattice& lattice, std::span<const TokenId> labels);

// Chain rule through a row-wise log-softmax: turns d/d(log-prob) into
// d/d(logit) for a lattice built with LogProbLattice::from_logits.
std::vector<double> gradient_wrt_logits(const LogProbLattice& lattice, std::span<const double> grad_logprob);

}  // namespace kounit::ctc

namespace kounit {

// Interpolation weight between the CTC and attention log-scores.
class MtlWeight {
 public:
  // Throws InvalidConfig outside [0, 1].
  explicit MtlWeight(double lambda);
  double value() const noexcept { return lambda_; }

 private:
  double lambda_;
};

// lambda * ctc + (1 - lambda) * att. The boundary weights return the
// selected term exactly, so a log-zero on the ignored side cannot leak in.
double mtl_combine(double ctc_logp, double att_logp, MtlWeight lambda) noexcept;

}  // namespace kounit
