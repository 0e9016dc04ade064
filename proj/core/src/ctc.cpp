#include "kounit/ctc.hpp"

#include <cmath>

#include "kounit/errors.hpp"

namespace kounit::ctc {

namespace {

void check_labels(const LogProbLattice& lattice, std::span<const TokenId> labels) {
  for (TokenId id : labels) {
    if (id < 0 || static_cast<std::size_t>(id) >= lattice.vocab_size()) {
      throw UnknownTokenId(id, lattice.vocab_size());
    }
    if (id == lattice.blank()) throw InvalidConfig("label sequence contains the blank symbol");
  }
}

// Blank-interleaved labels: blank, l1, blank, l2, ..., lL, blank.
std::vector<TokenId> interleave(std::span<const TokenId> labels, TokenId blank) {
  std::vector<TokenId> ext(2 * labels.size() + 1, blank);
  for (std::size_t i = 0; i < labels.size(); ++i) ext[2 * i + 1] = labels[i];
  return ext;
}

// Whether state s may be entered directly from s - 2 (skipping a blank).
bool can_skip(const std::vector<TokenId>& ext, std::size_t s, TokenId blank) {
  return s >= 2 && ext[s] != blank && ext[s] != ext[s - 2];
}

// alpha[t * S + s], emissions included.
std::vector<double> forward_table(const LogProbLattice& lattice, const std::vector<TokenId>& ext) {
  const std::size_t T = lattice.frames();
  const std::size_t S = ext.size();
  const TokenId blank = lattice.blank();
  std::vector<double> alpha(T * S, kLogZero);
  alpha[0] = lattice(0, ext[0]);
  if (S > 1) alpha[1] = lattice(0, ext[1]);
  for (std::size_t t = 1; t < T; ++t) {
    const double* prev = &alpha[(t - 1) * S];
    double* cur = &alpha[t * S];
    for (std::size_t s = 0; s < S; ++s) {
      double a = prev[s];
      if (s >= 1) a = log_add(a, prev[s - 1]);
      if (can_skip(ext, s, blank)) a = log_add(a, prev[s - 2]);
      cur[s] = log_mul(a, lattice(t, ext[s]));
    }
  }
  return alpha;
}

std::vector<double> backward_table(const LogProbLattice& lattice, const std::vector<TokenId>& ext) {
  const std::size_t T = lattice.frames();
  const std::size_t S = ext.size();
  const TokenId blank = lattice.blank();
  std::vector<double> beta(T * S, kLogZero);
  beta[(T - 1) * S + S - 1] = lattice(T - 1, ext[S - 1]);
  if (S > 1) beta[(T - 1) * S + S - 2] = lattice(T - 1, ext[S - 2]);
  for (std::size_t t = T - 1; t-- > 0;) {
    const double* next = &beta[(t + 1) * S];
    double* cur = &beta[t * S];
    for (std::size_t s = 0; s < S; ++s) {
      double b = next[s];
      if (s + 1 < S) b = log_add(b, next[s + 1]);
      if (s + 2 < S && can_skip(ext, s + 2, blank)) b = log_add(b, next[s + 2]);
      cur[s] = log_mul(b, lattice(t, ext[s]));
    }
  }
  return beta;
}

double final_log_prob(const std::vector<double>& alpha, std::size_t T, std::size_t S) {
  const double* last = &alpha[(T - 1) * S];
  return S > 1 ? log_add(last[S - 1], last[S - 2]) : last[0];
}

}  // namespace

TokenSequence collapse(std::span<const TokenId> path, TokenId blank) {
  TokenSequence out;
  TokenId previous = -1;
  bool first = true;
  for (TokenId z : path) {
    if ((first || z != previous) && z != blank) out.push_back(z);
    previous = z;
    first = false;
  }
  return out;
}

std::size_t min_frames(std::span<const TokenId> labels) {
  std::size_t n = labels.size();
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++n;
  }
  return n;
}

ForwardResult forward(const LogProbLattice& lattice, std::span<const TokenId> labels) {
  check_labels(lattice, labels);
  if (lattice.frames() < min_frames(labels)) return {};
  const auto ext = interleave(labels, lattice.blank());
  const auto alpha = forward_table(lattice, ext);
  const double lp = clamp_log(final_log_prob(alpha, lattice.frames(), ext.size()));
  return {lp, true};
}

GradientResult gradient(const LogProbLattice& lattice, std::span<const TokenId> labels) {
  check_labels(lattice, labels);
  const std::size_t T = lattice.frames();
  const std::size_t V = lattice.vocab_size();
  GradientResult result;
  result.grad.assign(T * V, 0.0);
  if (T < min_frames(labels)) return result;

  const auto ext = interleave(labels, lattice.blank());
  const std::size_t S = ext.size();
  const auto alpha = forward_table(lattice, ext);
  const auto beta = backward_table(lattice, ext);
  const double lp = final_log_prob(alpha, T, S);
  result.log_prob = clamp_log(lp);
  result.alignable = true;
  if (is_log_zero(lp)) return result;

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const double a = alpha[t * S + s];
      const double b = beta[t * S + s];
      if (is_log_zero(a) || is_log_zero(b)) continue;
      // alpha and beta both carry the frame-t emission; remove one copy.
      result.grad[t * V + static_cast<std::size_t>(ext[s])] += std::exp(a + b - lattice(t, ext[s]) - lp);
    }
  }
  return result;
}

std::vector<double> gradient_wrt_logits(const LogProbLattice& lattice, std::span<const double> grad_logprob) {
  const std::size_t T = lattice.frames();
  const std::size_t V = lattice.vocab_size();
  if (grad_logprob.size() != T * V) throw DimensionMismatch("gradient has the wrong size");
  std::vector<double> out(T * V);
  for (std::size_t t = 0; t < T; ++t) {
    double total = 0.0;
    for (std::size_t v = 0; v < V; ++v) total += grad_logprob[t * V + v];
    for (std::size_t v = 0; v < V; ++v) {
      const double p = std::exp(lattice(t, static_cast<TokenId>(v)));
      out[t * V + v] = grad_logprob[t * V + v] - p * total;
    }
  }
  return out;
}

}  // namespace kounit::ctc

namespace kounit {

MtlWeight::MtlWeight(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidConfig("MTL weight must lie in [0, 1], got " + std::to_string(lambda));
  }
}

double mtl_combine(double ctc_logp, double att_logp, MtlWeight lambda) noexcept {
  const double l = lambda.value();
  if (l == 0.0) return att_logp;
  if (l == 1.0) return ctc_logp;
  return clamp_log(l * ctc_logp + (1.0 - l) * att_logp);
}

}  // namespace kounit
