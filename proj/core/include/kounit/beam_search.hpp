#pragma once

#include <span>
#include <vector>

#include "kounit/ctc.hpp"
#include "kounit/ctc_prefix.hpp"
#include "kounit/lattice.hpp"
#include "kounit/vocabulary.hpp"

namespace kounit {

// Label-synchronous next-token distribution p(c_l | c_1..c_{l-1}, X).
// score_next must return vocab_size() log-probabilities that log-sum-exp to
// zero, and must be deterministic for a fixed prefix. Implementations shipped
// here are immutable and safe to call concurrently.
class AttentionScorer {
 public:
  virtual ~AttentionScorer() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual std::vector<double> score_next(std::span<const TokenId> prefix) const = 0;
};

struct Hypothesis {
  TokenSequence labels;  // never holds blank or <sos/eos>
  double att_logp = 0.0;
  // Prefix score while live; fully terminated CTC score once finished.
  double ctc_logp = 0.0;
  double combined_logp = 0.0;  // mtl_combine(ctc_logp, att_logp, lambda)
  bool finished = false;
  ctc::PrefixState ctc_state;
};

struct BeamSearchOptions {
  MtlWeight lambda{0.2};
  std::size_t beam = 30;
  // Longest label sequence considered; 0 means the number of frames.
  std::size_t max_len = 0;
  TokenId sos_eos = -1;
  // When set, hypotheses that reach max_len are ended with <sos/eos>. When
  // cleared they are dropped, and if nothing ended the best live hypotheses
  // are returned with BeamSearchResult::finished = false.
  bool end_at_max_len = true;
};

struct BeamSearchResult {
  std::vector<Hypothesis> hypotheses;  // best first
  bool finished = true;
};

// One-pass joint CTC/attention beam search. At every step each live
// hypothesis is extended by every non-blank label and scored by
// lambda * (CTC prefix score) + (1 - lambda) * (attention chain score); the
// best `beam` candidates survive. Emitting <sos/eos> ends a hypothesis with
// its terminated CTC score. Ties go to the lexicographically smaller label
// sequence. Throws InvalidConfig / DimensionMismatch on bad options.
BeamSearchResult joint_beam_search(const LogProbLattice& lattice, const AttentionScorer& scorer,
                                   const BeamSearchOptions& options);

}  // namespace kounit
