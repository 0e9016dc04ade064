#include "kounit/ctc_prefix.hpp"

#include "kounit/errors.hpp"

namespace kounit::ctc {

namespace {

void check_label(const LogProbLattice& lattice, TokenId label) {
  if (label < 0 || static_cast<std::size_t>(label) >= lattice.vocab_size()) {
    throw UnknownTokenId(label, lattice.vocab_size());
  }
  if (label == lattice.blank()) throw InvalidConfig("cannot extend a prefix by the blank symbol");
}

// Log-probability of reaching the end of `state`'s prefix by frame t - 1
// such that `label` can be emitted next at frame t.
double entry(const PrefixState& state, std::size_t t, TokenId label) {
  return label == state.last ? state.blank[t - 1] : log_add(state.blank[t - 1], state.nonblank[t - 1]);
}

}  // namespace

PrefixState prefix_init(const LogProbLattice& lattice) {
  const std::size_t T = lattice.frames();
  PrefixState s;
  s.nonblank.assign(T, kLogZero);
  s.blank.resize(T);
  double acc = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    acc = log_mul(acc, lattice(t, lattice.blank()));
    s.blank[t] = acc;
  }
  return s;
}

PrefixExtension prefix_extend(const LogProbLattice& lattice, const PrefixState& g, TokenId label) {
  check_label(lattice, label);
  const std::size_t T = lattice.frames();
  const TokenId blank = lattice.blank();
  PrefixState h;
  h.nonblank.resize(T);
  h.blank.resize(T);
  h.last = label;
  h.nonblank[0] = g.last < 0 ? lattice(0, label) : kLogZero;
  h.blank[0] = kLogZero;
  double psi = h.nonblank[0];
  for (std::size_t t = 1; t < T; ++t) {
    const double phi = entry(g, t, label);
    h.nonblank[t] = log_mul(log_add(h.nonblank[t - 1], phi), lattice(t, label));
    h.blank[t] = log_mul(log_add(h.blank[t - 1], h.nonblank[t - 1]), lattice(t, blank));
    psi = log_add(psi, log_mul(phi, lattice(t, label)));
  }
  h.log_prefix = clamp_log(psi);
  return {std::move(h), clamp_log(psi)};
}

double prefix_score(const LogProbLattice& lattice, const PrefixState& g, TokenId label) {
  check_label(lattice, label);
  const std::size_t T = lattice.frames();
  double psi = g.last < 0 ? lattice(0, label) : kLogZero;
  for (std::size_t t = 1; t < T; ++t) psi = log_add(psi, log_mul(entry(g, t, label), lattice(t, label)));
  return clamp_log(psi);
}

double prefix_terminate(const PrefixState& state) noexcept {
  return clamp_log(log_add(state.nonblank.back(), state.blank.back()));
}

}  // namespace kounit::ctc
