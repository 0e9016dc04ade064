#pragma once

// Reference computations used only by tests. They share no code with the
// library beyond the lattice container.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kounit/beam_search.hpp"
#include "kounit/lattice.hpp"

namespace kounit::testing {

// Random normalized lattice; `peaky` sharpens rows so that a few paths dominate.
inline LogProbLattice random_lattice(std::mt19937_64& rng, std::size_t frames, std::size_t vocab, TokenId blank = 0,
                                     double spread = 2.0) {
  std::normal_distribution<double> gauss(0.0, spread);
  std::vector<double> v(frames * vocab);
  for (std::size_t t = 0; t < frames; ++t) {
    double z = 0.0;
    for (std::size_t k = 0; k < vocab; ++k) {
      v[t * vocab + k] = std::exp(gauss(rng));
      z += v[t * vocab + k];
    }
    for (std::size_t k = 0; k < vocab; ++k) v[t * vocab + k] = std::log(v[t * vocab + k] / z);
  }
  return LogProbLattice(frames, vocab, std::move(v), blank);
}

// Plain CTC collapse, written out independently.
inline std::vector<TokenId> reference_collapse(const std::vector<TokenId>& path, TokenId blank) {
  std::vector<TokenId> out;
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (path[t] == blank) continue;
    if (t > 0 && path[t] == path[t - 1]) continue;
    out.push_back(path[t]);
  }
  return out;
}

// Calls fn(path, probability) for every one of the V^T frame paths.
inline void for_each_path(const LogProbLattice& lat,
                          const std::function<void(const std::vector<TokenId>&, double)>& fn) {
  const std::size_t T = lat.frames();
  const std::size_t V = lat.vocab_size();
  std::vector<TokenId> path(T, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t t = 0; t < T; ++t) p *= std::exp(lat(t, path[t]));
    fn(path, p);
    std::size_t t = 0;
    while (t < T && static_cast<std::size_t>(++path[t]) == V) path[t++] = 0;
    if (t == T) break;
  }
}

// P(labels | lattice) in the probability domain by path enumeration.
inline double brute_force_ctc(const LogProbLattice& lat, const std::vector<TokenId>& labels) {
  double total = 0.0;
  for_each_path(lat, [&](const std::vector<TokenId>& path, double p) {
    if (reference_collapse(path, lat.blank()) == labels) total += p;
  });
  return total;
}

// Every sequence over `alphabet` of length 0..max_len.
inline std::vector<std::vector<TokenId>> all_sequences(const std::vector<TokenId>& alphabet, std::size_t max_len) {
  std::vector<std::vector<TokenId>> out{{}};
  std::vector<std::vector<TokenId>> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<TokenId>> next;
    for (const auto& s : frontier) {
      for (TokenId a : alphabet) {
        auto e = s;
        e.push_back(a);
        next.push_back(e);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// Central finite difference of f at x along every coordinate.
inline std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x, double eps) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double up = f(x);
    x[i] = saved - eps;
    const double down = f(x);
    x[i] = saved;
    g[i] = (up - down) / (2 * eps);
  }
  return g;
}

// Attention log-score of a full sequence including the end token, by the
// chain rule over the scorer.
inline double chain_score(const AttentionScorer& scorer, const std::vector<TokenId>& labels, TokenId eos) {
  double s = 0.0;
  std::vector<TokenId> prefix;
  for (TokenId l : labels) {
    s += scorer.score_next(prefix)[static_cast<std::size_t>(l)];
    prefix.push_back(l);
  }
  return s + scorer.score_next(prefix)[static_cast<std::size_t>(eos)];
}

// Wagner-Fischer distance with two rolling rows.
template <class T>
std::size_t reference_levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min(sub, std::min(prev[j], cur[j - 1]) + 1);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Deterministic random scorer: every prefix gets its own normalized row,
// derived from a hash of the prefix so repeated calls agree.
class RandomTableScorer final : public AttentionScorer {
 public:
  RandomTableScorer(std::size_t vocab, std::uint64_t seed) : vocab_(vocab), seed_(seed) {}
  std::size_t vocab_size() const override { return vocab_; }
  std::vector<double> score_next(std::span<const TokenId> prefix) const override {
    std::uint64_t h = seed_ ^ 0x9E3779B97F4A7C15ull;
    for (TokenId t : prefix) h = (h ^ static_cast<std::uint64_t>(t + 1)) * 0x100000001B3ull;
    std::mt19937_64 rng(h);
    std::normal_distribution<double> gauss(0.0, 1.5);
    std::vector<double> row(vocab_);
    double z = 0.0;
    for (auto& v : row) {
      v = std::exp(gauss(rng));
      z += v;
    }
    for (auto& v : row) v = std::log(v / z);
    return row;
  }

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
};

}  // namespace kounit::testing
