// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kounit/beam_search.hpp"
#include "kounit/ctc.hpp"
#include "kounit/ctc_prefix.hpp"
#include "kounit/hangul.hpp"
#include "kounit/metrics.hpp"
#include "kounit/subword.hpp"
#include "kounit/unit_schemes.hpp"
#include "support/fixtures.hpp"
#include "support/metrics_fixture.hpp"
#include "support/oracles.hpp"
#include "support/segmentation.hpp"

using namespace kounit;

namespace {

// Pinned tolerances and budgets.
constexpr double kVocabSeconds = 1.0;
constexpr double kBijectionSeconds = 1.0;
constexpr double kCtcOracleTolerance = 1e-9;
constexpr double kCtcOracleSeconds = 30.0;
constexpr int kCtcOracleLattices = 1000;
constexpr double kGradientEpsilon = 1e-5;
constexpr double kGradientRelativeError = 1e-4;
// Entries smaller than this are compared absolutely: the central difference
// carries O(eps^2) truncation and O(1e-16 / eps) rounding error.
constexpr double kGradientFloor = 1e-6;
constexpr int kGradientInstances = 100;
constexpr double kGradientSeconds = 60.0;
constexpr double kPrefixTolerance = 1e-12;
constexpr int kPrefixInstances = 1000;
constexpr double kDecodeTieGap = 1e-12;
constexpr std::size_t kSyllableSubwordTarget = 80;
constexpr std::size_t kJamoSubwordTarget = 160;
constexpr std::size_t kRoundTripSubwordTarget = 600;

struct Outcome {
  bool pass = false;
  std::string detail;
  double budget = 0.0;  // seconds; 0 means none
};

Scheme scheme(UnitKind kind, EnglishMode en = EnglishMode::none) {
  if (kind == UnitKind::byte) return Scheme::byte();
  return Scheme{kind, en, is_subword(kind) ? std::vector<std::string>{} : default_symbol_set()};
}

std::string row_of(const TokenSequence& ids, const Vocabulary& v) {
  std::string out;
  for (TokenId id : ids) {
    if (!out.empty()) out += ",";
    out += display_token(v.token(id));
  }
  return out;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

Outcome vocabulary_arithmetic() {
  const auto corpus = testing::ranked_syllable_corpus();
  const auto start = std::chrono::steady_clock::now();
  const Vocabulary syl = build_vocabulary(corpus, scheme(UnitKind::syllable));
  const Vocabulary jamo = build_vocabulary(corpus, scheme(UnitKind::jamo));
  const Vocabulary byte = build_vocabulary(corpus, Scheme::byte());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = core_class_count(syl) == 2371 && syl.size() == 2373 && core_class_count(jamo) == 88 &&
                  jamo.size() == 90 && core_class_count(byte) == 256 && byte.size() == 258;
  return {ok && secs < kVocabSeconds,
          "syllable " + std::to_string(core_class_count(syl)) + "+2, jamo " + std::to_string(core_class_count(jamo)) +
              "+2, byte " + std::to_string(core_class_count(byte)) + "+2, built in " + fmt("%.3f", secs) + " s"};
}

Outcome hangul_bijection() {
  std::size_t bad = 0;
  for (char32_t c = hangul::kSyllableFirst; c <= hangul::kSyllableLast; ++c) {
    if (hangul::compose(hangul::decompose(c)) != c) ++bad;
  }
  std::size_t triples = 0;
  for (int l = 0; l < 19; ++l) {
    for (int v = 0; v < 21; ++v) {
      for (int t = 0; t < 28; ++t) {
        const hangul::JamoTriple j(l, v, t);
        if (!(hangul::decompose(hangul::compose(j)) == j)) ++bad;
        ++triples;
      }
    }
  }
  return {bad == 0 && triples == 11172, std::to_string(triples) + " syllables, " + std::to_string(bad) + " mismatches",
          kBijectionSeconds};
}

Outcome worked_example_rows() {
  std::size_t checked = 0, failed = 0;
  std::string first_failure;
  auto check = [&](bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      ++failed;
      if (first_failure.empty()) first_failure = what;
    }
  };
  auto encoded = [&](UnitKind kind, const std::string& text, const std::string& want) {
    const Scheme s = scheme(kind, EnglishMode::characters);
    const Vocabulary v = build_vocabulary(std::vector<std::string>{"학교에 간다"}, s);
    check(row_of(encode(text, v, s), v) == want, text + " -> " + want);
  };
  encoded(UnitKind::syllable, "학교에 간다", "학,교,에,<sp>,간,다");
  encoded(UnitKind::jamo, "학교에 간다", "ㅎ,ㅏ,ㄱ,ㄱ,ㅛ,ㅇ,ㅔ,<sp>,ㄱ,ㅏ,ㄴ,ㄷ,ㅏ");
  // English letters are case-folded.
  encoded(UnitKind::syllable, "I'm going to school", "i,',m,<sp>,g,o,i,n,g,<sp>,t,o,<sp>,s,c,h,o,o,l");
  encoded(UnitKind::jamo, "school에 간다", "s,c,h,o,o,l,ㅇ,ㅔ,<sp>,ㄱ,ㅏ,ㄴ,ㄷ,ㅏ");
  encoded(UnitKind::syllable, "school에 간다", "s,c,h,o,o,l,에,<sp>,간,다");

  const auto corpus = testing::fixture_lines("worked_examples_corpus.txt");
  const auto syl = subword::train(corpus, subword::Base::syllable, kSyllableSubwordTarget);
  const auto jamo = subword::train(corpus, subword::Base::jamo, kJamoSubwordTarget);
  auto reachable = [&](const subword::SubwordModel& m, const std::string& text, const std::string& row) {
    const auto seg = testing::segment_by_display(text, m.base(), testing::split_row(row));
    bool ok = seg.has_value();
    if (ok) {
      for (const auto& p : *seg) ok = ok && m.find(p).has_value();
      ok = ok && subword::join_pieces(*seg, m.base()) == text;
    }
    check(ok, std::string(subword::to_string(m.base())) + " " + row);
  };
  reachable(syl, "학교에 간다", "학교,에▁,간,다");
  reachable(jamo, "학교에 간다", "학ㄱ,ㅛ,ㅇ,ㅔ▁,가,ㄴ,다");
  reachable(syl, "I'm going to school", "I'm,▁go,ing,▁to▁,s,ch,ool");
  reachable(syl, "school 에 간다", "s,ch,ool▁,에▁,간,다");
  reachable(jamo, "school 에 간다", "s,ch,ool▁,ㅇ,ㅔ▁,가,ㄴ,다");
  std::string detail = std::to_string(checked - failed) + "/" + std::to_string(checked) + " rows";
  if (!first_failure.empty()) detail += ", first mismatch: " + first_failure;
  return {failed == 0, detail};
}

Outcome ctc_oracle() {
  std::mt19937_64 rng(20190901);
  double worst = 0.0, worst_sum = 0.0;
  std::size_t sequences = 0;
  for (int n = 0; n < kCtcOracleLattices; ++n) {
    const std::size_t T = 1 + static_cast<std::size_t>(n % 6);
    const std::size_t V = 2 + static_cast<std::size_t>((n / 6) % 3);
    const TokenId blank = static_cast<TokenId>(n % static_cast<int>(V));
    const auto lat = testing::random_lattice(rng, T, V, blank);
    // One pass over all V^T paths, bucketed by their collapsed output.
    std::map<std::vector<TokenId>, double> mass;
    testing::for_each_path(lat, [&](const std::vector<TokenId>& path, double p) {
      mass[testing::reference_collapse(path, blank)] += p;
    });
    std::vector<TokenId> alphabet;
    for (TokenId v = 0; v < static_cast<TokenId>(V); ++v) {
      if (v != blank) alphabet.push_back(v);
    }
    double total = 0.0;
    for (const auto& labels : testing::all_sequences(alphabet, T)) {
      const double got = std::exp(ctc::forward(lat, labels).log_prob);
      const auto it = mass.find(labels);
      const double want = it == mass.end() ? 0.0 : it->second;
      worst = std::max(worst, std::abs(got - want));
      total += got;
      ++sequences;
    }
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
  }
  return {worst <= kCtcOracleTolerance && worst_sum <= kCtcOracleTolerance,
          std::to_string(kCtcOracleLattices) + " lattices, " + std::to_string(sequences) +
              " label sequences, max |diff| " + fmt("%.2e", worst) + ", max |sum-1| " + fmt("%.2e", worst_sum),
          kCtcOracleSeconds};
}

Outcome gradient_check() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.5);
  double worst = 0.0;
  std::size_t entries = 0;
  for (int n = 0; n < kGradientInstances; ++n) {
    const std::size_t T = 2 + static_cast<std::size_t>(n % 5);
    const std::size_t V = 2 + static_cast<std::size_t>(n % 4);
    std::vector<double> logits(T * V);
    for (auto& z : logits) z = gauss(rng);
    // A random label sequence that fits in T frames.
    std::uniform_int_distribution<int> len(1, static_cast<int>((T + 1) / 2));
    std::uniform_int_distribution<int> sym(1, static_cast<int>(V) - 1);
    std::vector<TokenId> labels(static_cast<std::size_t>(len(rng)));
    for (auto& l : labels) l = sym(rng);
    if (ctc::min_frames(labels) > T) labels.resize(1);

    const auto lat = LogProbLattice::from_logits(T, V, logits);
    const auto g = ctc::gradient_wrt_logits(lat, ctc::gradient(lat, labels).grad);
    const auto fd = testing::finite_difference(
        [&](const std::vector<double>& z) { return ctc::forward(LogProbLattice::from_logits(T, V, z), labels).log_prob; },
        logits, kGradientEpsilon);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double scale = std::max({std::abs(g[i]), std::abs(fd[i]), kGradientFloor});
      worst = std::max(worst, std::abs(g[i] - fd[i]) / scale);
      ++entries;
    }
  }
  return {worst < kGradientRelativeError,
          std::to_string(kGradientInstances) + " instances, " + std::to_string(entries) + " entries, max rel err " +
              fmt("%.2e", worst),
          kGradientSeconds};
}

Outcome prefix_consistency() {
  std::mt19937_64 rng(31337);
  double worst = 0.0;
  std::size_t unalignable = 0, mismatched_zero = 0;
  for (int n = 0; n < kPrefixInstances; ++n) {
    const std::size_t T = 1 + static_cast<std::size_t>(n % 8);
    const std::size_t V = 2 + static_cast<std::size_t>(n % 4);
    const auto lat = testing::random_lattice(rng, T, V);
    std::uniform_int_distribution<int> len(0, static_cast<int>(T));
    std::uniform_int_distribution<int> sym(1, static_cast<int>(V) - 1);
    std::vector<TokenId> labels(static_cast<std::size_t>(len(rng)));
    for (auto& l : labels) l = sym(rng);
    ctc::PrefixState s = ctc::prefix_init(lat);
    for (TokenId l : labels) s = ctc::prefix_extend(lat, s, l).state;
    const double term = ctc::prefix_terminate(s);
    const auto fwd = ctc::forward(lat, labels);
    if (!fwd.alignable) {
      ++unalignable;
      if (!is_log_zero(term)) ++mismatched_zero;
      continue;
    }
    worst = std::max(worst, std::abs(term - fwd.log_prob));
  }
  return {worst <= kPrefixTolerance && mismatched_zero == 0,
          std::to_string(kPrefixInstances) + " instances (" + std::to_string(unalignable) +
              " unalignable), max |diff| " + fmt("%.2e", worst)};
}

Outcome joint_decoding() {
  std::mt19937_64 rng(4242);
  const double lambdas[] = {0.0, 0.2, 0.5, 1.0};
  std::size_t runs = 0, exact = 0, ties = 0, failures = 0;
  for (int n = 0; n < 200; ++n) {
    const std::size_t V = 3 + static_cast<std::size_t>(n % 2);
    const std::size_t T = 1 + static_cast<std::size_t>(n % 5);
    const std::size_t L = 1 + static_cast<std::size_t>((n / 5) % 4);
    const auto lat = testing::random_lattice(rng, T, V);
    const testing::RandomTableScorer scorer(V, static_cast<std::uint64_t>(n) * 7919u);
    const TokenId eos = static_cast<TokenId>(V - 1);
    std::vector<TokenId> alphabet;
    for (TokenId v = 1; v < eos; ++v) alphabet.push_back(v);
    const auto candidates = testing::all_sequences(alphabet, L);
    for (double lam : lambdas) {
      const MtlWeight w(lam);
      // Brute-force argmax of the interpolated sequence score.
      double best = kLogZero, second = kLogZero;
      std::vector<TokenId> arg;
      for (const auto& c : candidates) {
        const double s = mtl_combine(ctc::forward(lat, c).log_prob, testing::chain_score(scorer, c, eos), w);
        if (s > best || (s == best && c < arg)) {
          second = std::max(second, best);
          best = s;
          arg = c;
        } else {
          second = std::max(second, s);
        }
      }
      BeamSearchOptions opt;
      opt.lambda = w;
      opt.beam = 100000;
      opt.max_len = L;
      opt.sos_eos = eos;
      const auto r = joint_beam_search(lat, scorer, opt);
      ++runs;
      const auto& top = r.hypotheses.front();
      if (best - second > kDecodeTieGap) {
        if (top.labels == arg && std::abs(top.combined_logp - best) <= 1e-9) {
          ++exact;
        } else {
          ++failures;
        }
      } else {
        // Near-tie within floating-point noise: only the score is checked.
        ++ties;
        if (std::abs(top.combined_logp - best) > 1e-9) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(runs) + " searches over lambda {0, 0.2, 0.5, 1}, " + std::to_string(exact) +
                             " exact top-1, " + std::to_string(ties) + " near-ties, " + std::to_string(failures) +
                             " failures"};
}

Outcome segmentation_collapse() {
  const auto units = subword::base_units("학교", subword::Base::jamo);
  const std::size_t n = units.size();
  std::vector<std::vector<std::string>> segmentations;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<std::string> pieces{units[0]};
    for (std::size_t i = 1; i < n; ++i) {
      if (mask & (1u << (i - 1))) {
        pieces.push_back(units[i]);
      } else {
        pieces.back() += units[i];
      }
    }
    segmentations.push_back(std::move(pieces));
  }
  std::size_t surface_ok = 0, pairs = 0, token_differs = 0, surface_zero = 0;
  std::vector<std::string> token_lines, surface_lines;
  for (const auto& seg : segmentations) {
    std::string line;
    for (const auto& p : seg) line += (line.empty() ? "" : " ") + display_token(p);
    token_lines.push_back(line);
    surface_lines.push_back(subword::join_pieces(seg, subword::Base::jamo));
    if (surface_lines.back() == "학교") ++surface_ok;
  }
  for (std::size_t a = 0; a < segmentations.size(); ++a) {
    for (std::size_t b = a + 1; b < segmentations.size(); ++b) {
      ++pairs;
      const std::vector<std::string> r{token_lines[a]}, h{token_lines[b]};
      if (metrics::evaluate(r, h, metrics::CharMode::token).cer > 0) ++token_differs;
      const std::vector<std::string> rs{surface_lines[a]}, hs{surface_lines[b]};
      if (metrics::evaluate(rs, hs, metrics::CharMode::surface).cer == 0) ++surface_zero;
    }
  }
  const bool ok = surface_ok == segmentations.size() && token_differs == pairs && surface_zero == pairs;
  return {ok, std::to_string(segmentations.size()) + " segmentations all detokenize to 학교; " +
                  std::to_string(token_differs) + "/" + std::to_string(pairs) + " pairs with token CER > 0, " +
                  std::to_string(surface_zero) + "/" + std::to_string(pairs) + " with surface CER = 0"};
}

Outcome round_trips() {
  const auto corpus = testing::fixture_lines("mixed_corpus.txt");
  std::size_t failures = 0, checks = 0;
  auto run = [&](const Codec& codec) {
    for (const auto& line : corpus) {
      ++checks;
      if (codec.decode(codec.encode(line)) != line) ++failures;
    }
  };
  for (auto kind : {UnitKind::syllable, UnitKind::jamo}) {
    const Scheme s = scheme(kind, EnglishMode::characters);
    const Vocabulary v = build_vocabulary(corpus, s);
    run(Codec(s, v));
  }
  const Vocabulary bv = build_vocabulary(corpus, Scheme::byte());
  run(Codec(Scheme::byte(), bv));
  for (auto [kind, base] : {std::pair{UnitKind::syllable_subword, subword::Base::syllable},
                            std::pair{UnitKind::jamo_subword, subword::Base::jamo}}) {
    const auto model = subword::train(corpus, base, kRoundTripSubwordTarget);
    for (const auto& line : corpus) {
      ++checks;
      if (model.detokenize(model.apply(line)) != line) ++failures;
    }
    const Vocabulary v = build_vocabulary(model);
    run(Codec(scheme(kind, EnglishMode::subword), v, &model));
  }
  return {failures == 0 && corpus.size() >= 1000,
          std::to_string(corpus.size()) + " lines, " + std::to_string(checks) + " round trips over 5 schemes, " +
              std::to_string(failures) + " failures"};
}

Outcome metrics_fixture() {
  const auto refs = testing::fixture_lines("metrics_refs.txt");
  const auto hyps = testing::fixture_lines("metrics_hyps.txt");
  const auto want = testing::expected_metric_counts();
  const auto r = metrics::evaluate(refs, hyps);
  std::size_t bad = 0;
  std::size_t cs = 0, ci = 0, cd = 0, rc = 0, ws = 0, wi = 0, wd = 0, rw = 0, err_utts = 0;
  for (std::size_t i = 0; i < want.size() && i < r.per_utterance.size(); ++i) {
    const auto& u = r.per_utterance[i];
    const auto& w = want[i];
    if (u.chars.substitutions != w.char_sub || u.chars.insertions != w.char_ins || u.chars.deletions != w.char_del ||
        u.ref_chars != w.ref_chars || u.words.substitutions != w.word_sub || u.words.insertions != w.word_ins ||
        u.words.deletions != w.word_del || u.ref_words != w.ref_words) {
      ++bad;
    }
    cs += w.char_sub, ci += w.char_ins, cd += w.char_del, rc += w.ref_chars;
    ws += w.word_sub, wi += w.word_ins, wd += w.word_del, rw += w.ref_words;
    if (w.word_sub + w.word_ins + w.word_del > 0) ++err_utts;
  }
  const double cer = 100.0 * static_cast<double>(cs + ci + cd) / static_cast<double>(rc);
  const double wer = 100.0 * static_cast<double>(ws + wi + wd) / static_cast<double>(rw);
  const double ser = 100.0 * static_cast<double>(err_utts) / static_cast<double>(want.size());
  const bool totals = r.cer == cer && r.wer == wer && r.ser == ser;

  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> len(0, 20), sym(0, 4);
  std::size_t oracle_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<int> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
    for (auto& x : a) x = sym(rng);
    for (auto& x : b) x = sym(rng);
    if (metrics::edit_distance(a, b).total() != testing::reference_levenshtein(a, b)) ++oracle_bad;
  }
  return {want.size() == 20 && r.per_utterance.size() == 20 && bad == 0 && totals && oracle_bad == 0,
          "CER " + fmt("%.4f", r.cer) + " WER " + fmt("%.4f", r.wer) + " SER " + fmt("%.1f", r.ser) + ", " +
              std::to_string(bad) + " utterance mismatches; 1000 random pairs vs oracle, " +
              std::to_string(oracle_bad) + " mismatches"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"vocabulary arithmetic", vocabulary_arithmetic},
      {"hangul bijection", hangul_bijection},
      {"worked-example token rows", worked_example_rows},
      {"ctc oracle equivalence", ctc_oracle},
      {"ctc gradient check", gradient_check},
      {"prefix scorer consistency", prefix_consistency},
      {"joint decoding exactness", joint_decoding},
      {"segmentation collapse", segmentation_collapse},
      {"round trips", round_trips},
      {"metrics", metrics_fixture},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.budget > 0 && secs > o.budget) {
      o.pass = false;
      o.detail += ", over the " + fmt("%.0f", o.budget) + " s budget";
    }
    std::printf("%s  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
