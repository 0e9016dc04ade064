#include "kounit/metrics.hpp"

#include <cstdio>

#include "kounit/errors.hpp"
#include "kounit/hangul.hpp"
#include "kounit/utf8.hpp"

namespace kounit::metrics {

namespace {

double rate(std::size_t errors, std::size_t reference) {
  if (errors == 0) return 0.0;
  return 100.0 * static_cast<double>(errors) / static_cast<double>(std::max<std::size_t>(reference, 1));
}

std::vector<std::string> split_spaces(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string_view to_string(CharMode mode) noexcept {
  switch (mode) {
    case CharMode::surface:
      return "surface";
    case CharMode::raw:
      return "raw";
    case CharMode::jamo:
      return "jamo";
    case CharMode::token:
      return "token";
  }
  return "?";
}

bool parse_char_mode(std::string_view name, CharMode& mode) noexcept {
  for (auto m : {CharMode::surface, CharMode::raw, CharMode::jamo, CharMode::token}) {
    if (to_string(m) == name) {
      mode = m;
      return true;
    }
  }
  return false;
}

std::vector<std::u32string> character_units(std::string_view line, CharMode mode) {
  std::vector<std::u32string> out;
  if (mode == CharMode::token) {
    for (const auto& t : split_spaces(line)) out.push_back(utf8::decode(t));
    return out;
  }
  const std::u32string chars = hangul::compose_conjoining(utf8::decode(line));
  for (char32_t c : chars) {
    if (c == U' ' && mode != CharMode::raw) continue;
    if (mode == CharMode::jamo && hangul::is_syllable(c)) {
      for (const auto& s : hangul::text_to_jamo(std::u32string_view(&c, 1))) {
        out.emplace_back(1, std::get<hangul::JamoLetter>(s).positional_scalar());
      }
      continue;
    }
    out.emplace_back(1, c);
  }
  return out;
}

std::vector<std::string> word_units(std::string_view line) { return split_spaces(line); }

UtteranceCounts score_utterance(std::string_view ref, std::string_view hyp, CharMode mode) {
  UtteranceCounts u;
  const auto rc = character_units(ref, mode);
  const auto hc = character_units(hyp, mode);
  u.chars = edit_distance(rc, hc);
  u.ref_chars = rc.size();
  if (mode == CharMode::token) {
    u.words = u.chars;
    u.ref_words = u.ref_chars;
  } else {
    const auto rw = word_units(ref);
    const auto hw = word_units(hyp);
    u.words = edit_distance(rw, hw);
    u.ref_words = rw.size();
  }
  return u;
}

void Evaluator::add(std::string_view ref, std::string_view hyp) {
  const UtteranceCounts u = score_utterance(ref, hyp, mode_);
  acc_.char_errors += u.chars;
  acc_.ref_chars += u.ref_chars;
  acc_.word_errors += u.words;
  acc_.ref_words += u.ref_words;
  ++acc_.utterances;
  if (u.words.total() > 0) ++acc_.utterances_with_error;
  if (keep_) acc_.per_utterance.push_back(u);
}

EvalReport Evaluator::report() const {
  EvalReport r = acc_;
  r.cer = rate(r.char_errors.total(), r.ref_chars);
  r.wer = rate(r.word_errors.total(), r.ref_words);
  r.ser = rate(r.utterances_with_error, r.utterances);
  return r;
}

EvalReport evaluate(std::span<const std::string> refs, std::span<const std::string> hyps, CharMode mode) {
  if (refs.size() != hyps.size()) throw LineCountMismatch(refs.size(), hyps.size());
  Evaluator e(mode, true);
  for (std::size_t i = 0; i < refs.size(); ++i) e.add(refs[i], hyps[i]);
  return e.report();
}

std::string format_text(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "CER %6.2f %%  (%zu errors / %zu chars: S=%zu I=%zu D=%zu)\n"
                "WER %6.2f %%  (%zu errors / %zu words: S=%zu I=%zu D=%zu)\n"
                "SER %6.2f %%  (%zu / %zu utterances)\n",
                r.cer, r.char_errors.total(), r.ref_chars, r.char_errors.substitutions, r.char_errors.insertions,
                r.char_errors.deletions, r.wer, r.word_errors.total(), r.ref_words, r.word_errors.substitutions,
                r.word_errors.insertions, r.word_errors.deletions, r.ser, r.utterances_with_error, r.utterances);
  return buf;
}

std::string format_kv(const EvalReport& r) {
  char buf[768];
  std::snprintf(buf, sizeof(buf),
                "cer=%.6f\nwer=%.6f\nser=%.6f\n"
                "char_sub=%zu\nchar_ins=%zu\nchar_del=%zu\nref_chars=%zu\n"
                "word_sub=%zu\nword_ins=%zu\nword_del=%zu\nref_words=%zu\n"
                "utterances=%zu\nutterances_with_error=%zu\n",
                r.cer, r.wer, r.ser, r.char_errors.substitutions, r.char_errors.insertions, r.char_errors.deletions,
                r.ref_chars, r.word_errors.substitutions, r.word_errors.insertions, r.word_errors.deletions,
                r.ref_words, r.utterances, r.utterances_with_error);
  return buf;
}

}  // namespace kounit::metrics
