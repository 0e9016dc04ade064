#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kounit::metrics {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t total() const noexcept { return substitutions + insertions + deletions; }
  EditCounts& operator+=(const EditCounts& o) noexcept {
    substitutions += o.substitutions;
    insertions += o.insertions;
    deletions += o.deletions;
    return *this;
  }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Unit-cost Levenshtein alignment. Among minimal alignments the backtrace
// prefers match/substitution, then deletion, then insertion, so the split
// into operation kinds is deterministic.
template <class T>
EditCounts edit_distance(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> d((n + 1) * w);
  for (std::size_t i = 0; i <= n; ++i) d[i * w] = i;
  for (std::size_t j = 0; j <= m; ++j) d[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i * w + j] = std::min({diag, d[(i - 1) * w + j] + 1, d[i * w + j - 1] + 1});
    }
  }
  EditCounts c;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (d[i * w + j] == d[(i - 1) * w + j - 1] + (same ? 0 : 1)) {
        if (!same) ++c.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && d[i * w + j] == d[(i - 1) * w + j] + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

template <class T>
EditCounts edit_distance(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return edit_distance(std::span<const T>(ref), std::span<const T>(hyp));
}

// How lines are cut into "characters" for CER.
//   surface: Unicode scalars, spaces removed
//   raw:     Unicode scalars, spaces kept
//   jamo:    Hangul syllables split into positional letters, spaces removed
//   token:   space-separated tokens (for comparing token strings directly);
//            WER and SER are then also computed over tokens
enum class CharMode { surface, raw, jamo, token };

std::string_view to_string(CharMode mode) noexcept;
bool parse_char_mode(std::string_view name, CharMode& mode) noexcept;

std::vector<std::u32string> character_units(std::string_view line, CharMode mode);
// Words are the non-empty pieces between spaces.
std::vector<std::string> word_units(std::string_view line);

struct UtteranceCounts {
  EditCounts chars;
  std::size_t ref_chars = 0;
  EditCounts words;
  std::size_t ref_words = 0;
};

struct EvalReport {
  double cer = 0.0;  // percent
  double wer = 0.0;  // percent
  double ser = 0.0;  // percent of utterances with any word error
  EditCounts char_errors;
  std::size_t ref_chars = 0;
  EditCounts word_errors;
  std::size_t ref_words = 0;
  std::size_t utterances = 0;
  std::size_t utterances_with_error = 0;
  std::vector<UtteranceCounts> per_utterance;  // empty when not requested
};

UtteranceCounts score_utterance(std::string_view ref, std::string_view hyp, CharMode mode);

// Streaming accumulator; memory stays constant unless per-utterance counts
// are kept.
class Evaluator {
 public:
  explicit Evaluator(CharMode mode = CharMode::surface, bool keep_per_utterance = false)
      : mode_(mode), keep_(keep_per_utterance) {}

  void add(std::string_view ref, std::string_view hyp);
  EvalReport report() const;

 private:
  CharMode mode_;
  bool keep_;
  EvalReport acc_;
};

// Throws LineCountMismatch.
EvalReport evaluate(std::span<const std::string> refs, std::span<const std::string> hyps,
                    CharMode mode = CharMode::surface);

std::string format_text(const EvalReport& report);
// key=value lines.
std::string format_kv(const EvalReport& report);

}  // namespace kounit::metrics
