#include "kounit/beam_search.hpp"

#include <algorithm>
#include <cmath>

#include "kounit/errors.hpp"

namespace kounit {

namespace {

struct Candidate {
  std::size_t parent;
  TokenId token;  // label, or sos_eos when ending
  double ctc_logp;
  double att_logp;
  double combined;
  bool ends;
};

// Strict ordering: better score first, then shorter-or-smaller label
// sequence, then ended before live.
bool better(const Candidate& a, const Candidate& b, const std::vector<Hypothesis>& live) {
  if (a.combined != b.combined) return a.combined > b.combined;
  const TokenSequence& la = live[a.parent].labels;
  const TokenSequence& lb = live[b.parent].labels;
  // Compare parent.labels (+ token unless ending) lexicographically.
  const std::size_t na = la.size() + (a.ends ? 0 : 1);
  const std::size_t nb = lb.size() + (b.ends ? 0 : 1);
  for (std::size_t i = 0; i < std::min(na, nb); ++i) {
    const TokenId xa = i < la.size() ? la[i] : a.token;
    const TokenId xb = i < lb.size() ? lb[i] : b.token;
    if (xa != xb) return xa < xb;
  }
  if (na != nb) return na < nb;
  if (a.ends != b.ends) return a.ends;
  return false;
}

bool hyp_better(const Hypothesis& a, const Hypothesis& b) {
  if (a.combined_logp != b.combined_logp) return a.combined_logp > b.combined_logp;
  if (a.labels != b.labels) return a.labels < b.labels;
  return a.finished && !b.finished;
}

}  // namespace

BeamSearchResult joint_beam_search(const LogProbLattice& lattice, const AttentionScorer& scorer,
                                   const BeamSearchOptions& options) {
  const std::size_t V = lattice.vocab_size();
  const TokenId blank = lattice.blank();
  const TokenId eos = options.sos_eos;
  if (options.beam == 0) throw InvalidConfig("beam width must be at least 1");
  if (scorer.vocab_size() != V) {
    throw DimensionMismatch("scorer vocabulary (" + std::to_string(scorer.vocab_size()) +
                            ") differs from lattice vocabulary (" + std::to_string(V) + ")");
  }
  if (eos < 0 || static_cast<std::size_t>(eos) >= V || eos == blank) {
    throw InvalidConfig("<sos/eos> id must be a non-blank id inside the vocabulary");
  }
  const std::size_t max_len = options.max_len == 0 ? lattice.frames() : options.max_len;
  const MtlWeight lambda = options.lambda;

  std::vector<Hypothesis> live(1);
  live[0].ctc_state = ctc::prefix_init(lattice);
  std::vector<Hypothesis> ended;
  std::vector<Hypothesis> stalled;  // reached max_len without ending

  std::vector<Candidate> candidates;
  while (!live.empty()) {
    candidates.clear();
    for (std::size_t h = 0; h < live.size(); ++h) {
      const Hypothesis& hyp = live[h];
      const std::vector<double> att = scorer.score_next(hyp.labels);
      if (att.size() != V) throw DimensionMismatch("scorer returned a distribution of the wrong size");
      const bool at_limit = hyp.labels.size() >= max_len;
      if (!at_limit || options.end_at_max_len) {
        const double ctc_end = ctc::prefix_terminate(hyp.ctc_state);
        const double att_end = hyp.att_logp + att[static_cast<std::size_t>(eos)];
        candidates.push_back({h, eos, ctc_end, att_end, mtl_combine(ctc_end, att_end, lambda), true});
      }
      if (at_limit) {
        if (!options.end_at_max_len) stalled.push_back(hyp);
        continue;
      }
      for (std::size_t v = 0; v < V; ++v) {
        const auto label = static_cast<TokenId>(v);
        if (label == blank || label == eos) continue;
        const double att_logp = hyp.att_logp + att[v];
        // At lambda = 0 the CTC term cannot change the ranking; skip it.
        const double ctc_logp = lambda.value() == 0.0 ? 0.0 : ctc::prefix_score(lattice, hyp.ctc_state, label);
        candidates.push_back({h, label, ctc_logp, att_logp, mtl_combine(ctc_logp, att_logp, lambda), false});
      }
    }
    if (candidates.empty()) break;

    const std::size_t keep = std::min(options.beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      [&](const Candidate& a, const Candidate& b) { return better(a, b, live); });

    std::vector<Hypothesis> next;
    for (std::size_t k = 0; k < keep; ++k) {
      const Candidate& c = candidates[k];
      const Hypothesis& parent = live[c.parent];
      Hypothesis h;
      h.labels = parent.labels;
      h.att_logp = c.att_logp;
      h.ctc_logp = c.ctc_logp;
      h.combined_logp = c.combined;
      if (c.ends) {
        h.finished = true;
        h.ctc_state = parent.ctc_state;
        ended.push_back(std::move(h));
        continue;
      }
      h.labels.push_back(c.token);
      auto ext = ctc::prefix_extend(lattice, parent.ctc_state, c.token);
      h.ctc_state = std::move(ext.state);
      h.ctc_logp = ext.log_prefix;
      next.push_back(std::move(h));
    }
    live = std::move(next);
  }

  if (ended.empty()) {
    std::sort(stalled.begin(), stalled.end(), hyp_better);
    if (stalled.size() > options.beam) stalled.resize(options.beam);
    return {std::move(stalled), false};
  }
  std::sort(ended.begin(), ended.end(), hyp_better);
  return {std::move(ended), true};
}

}  // namespace kounit
