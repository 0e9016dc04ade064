#pragma once

#include <span>
#include <vector>

#include "kounit/lattice.hpp"
#include "kounit/log_math.hpp"
#include "kounit/vocabulary.hpp"

// Incremental CTC scoring of label prefixes, for label-synchronous search.
//
// For a prefix g the state keeps, per frame t, the log-probability that
// frames 0..t emit exactly g with the last frame on a label (nonblank) or on
// the blank. Extending by a label c costs O(T).
namespace kounit::ctc {

struct PrefixState {
  std::vector<double> nonblank;
  std::vector<double> blank;
  TokenId last = -1;         // last label of the prefix, -1 when empty
  double log_prefix = 0.0;   // log P(prefix is a prefix of the collapsed output)
};

struct PrefixExtension {
  PrefixState state;
  double log_prefix;
};

PrefixState prefix_init(const LogProbLattice& lattice);

// Throws InvalidConfig when `label` is the blank, UnknownTokenId when it lies
// outside the lattice.
PrefixExtension prefix_extend(const LogProbLattice& lattice, const PrefixState& state, TokenId label);

// Same score as prefix_extend(...).log_prefix without building the state.
double prefix_score(const LogProbLattice& lattice, const PrefixState& state, TokenId label);

// Probability that the collapsed output is exactly the prefix.
double prefix_terminate(const PrefixState& state) noexcept;

}  // namespace kounit::ctc
