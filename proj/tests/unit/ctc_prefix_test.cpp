#include "kounit/ctc_prefix.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kounit/ctc.hpp"
#include "kounit/errors.hpp"
#include "support/oracles.hpp"

namespace kounit::ctc {
namespace {

PrefixState state_for(const LogProbLattice& lat, const std::vector<TokenId>& labels) {
  PrefixState s = prefix_init(lat);
  for (TokenId l : labels) s = prefix_extend(lat, s, l).state;
  return s;
}

// Probability mass of paths whose collapsed output starts with `prefix`.
double brute_force_prefix(const LogProbLattice& lat, const std::vector<TokenId>& prefix) {
  double total = 0.0;
  testing::for_each_path(lat, [&](const std::vector<TokenId>& path, double p) {
    const auto out = testing::reference_collapse(path, lat.blank());
    if (out.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), out.begin())) total += p;
  });
  return total;
}

TEST(CtcPrefixTest, EmptyPrefixHasScoreZero) {
  std::mt19937_64 rng(1);
  const auto lat = testing::random_lattice(rng, 4, 3);
  const PrefixState s = prefix_init(lat);
  EXPECT_EQ(s.log_prefix, 0.0);
  EXPECT_EQ(s.last, -1);
  EXPECT_NEAR(prefix_terminate(s), forward(lat, std::vector<TokenId>{}).log_prob, 1e-12);
}

TEST(CtcPrefixTest, TerminationMatchesForward) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 1 + trial % 6;
    const auto lat = testing::random_lattice(rng, T, 4);
    for (const auto& labels : testing::all_sequences({1, 2, 3}, std::min<std::size_t>(T, 3))) {
      const auto fwd = forward(lat, labels);
      const double term = prefix_terminate(state_for(lat, labels));
      if (!fwd.alignable) {
        EXPECT_TRUE(is_log_zero(term));
      } else {
        EXPECT_NEAR(term, fwd.log_prob, 1e-12);
      }
    }
  }
}

TEST(CtcPrefixTest, PrefixScoreMatchesPathEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t T = 2 + trial % 4;
    const auto lat = testing::random_lattice(rng, T, 3);
    for (const auto& labels : testing::all_sequences({1, 2}, 3)) {
      if (labels.empty()) continue;
      const std::vector<TokenId> head(labels.begin(), labels.end() - 1);
      const PrefixState g = state_for(lat, head);
      const auto ext = prefix_extend(lat, g, labels.back());
      const double want = brute_force_prefix(lat, labels);
      if (want == 0.0) {
        EXPECT_TRUE(is_log_zero(ext.log_prefix));
      } else {
        EXPECT_NEAR(std::exp(ext.log_prefix), want, 1e-12);
      }
      EXPECT_EQ(prefix_score(lat, g, labels.back()), ext.log_prefix);
    }
  }
}

TEST(CtcPrefixTest, PrefixScoreNeverIncreasesAlongAPath) {
  std::mt19937_64 rng(13);
  const auto lat = testing::random_lattice(rng, 8, 4);
  PrefixState s = prefix_init(lat);
  double prev = s.log_prefix;
  for (TokenId l : {1, 3, 3, 2, 1}) {
    const auto ext = prefix_extend(lat, s, l);
    EXPECT_LE(ext.log_prefix, prev + 1e-12);
    // The exact-output probability is bounded by the prefix probability.
    EXPECT_LE(prefix_terminate(ext.state), ext.log_prefix + 1e-12);
    prev = ext.log_prefix;
    s = ext.state;
  }
}

TEST(CtcPrefixTest, ExtensionsPlusTerminationSumToParent) {
  std::mt19937_64 rng(21);
  const auto lat = testing::random_lattice(rng, 5, 4);
  const PrefixState g = state_for(lat, {2});
  double total = std::exp(prefix_terminate(g));
  for (TokenId c = 1; c < 4; ++c) total += std::exp(prefix_score(lat, g, c));
  EXPECT_NEAR(total, std::exp(g.log_prefix), 1e-12);
}

TEST(CtcPrefixTest, RejectsBlankAndOutOfRange) {
  std::mt19937_64 rng(2);
  const auto lat = testing::random_lattice(rng, 3, 3);
  const PrefixState s = prefix_init(lat);
  EXPECT_THROW(prefix_extend(lat, s, 0), InvalidConfig);
  EXPECT_THROW(prefix_score(lat, s, 3), UnknownTokenId);
}

}  // namespace
}  // namespace kounit::ctc
