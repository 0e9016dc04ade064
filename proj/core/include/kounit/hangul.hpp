#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Arithmetic between precomposed Hangul syllable blocks (U+AC00..U+D7A3) and
// their positional Jamo letters.
//
// Letters are stored positionally: index 3 as a choseong and index 3 as a
// jongseong are different letters even when they print the same glyph. The
// Unicode conjoining Jamo blocks (U+1100, U+1161, U+11A8) give every
// positional letter its own scalar, which is what token strings use; the
// compatibility Jamo block (U+3131..) is the display form.
namespace kounit::hangul {

inline constexpr char32_t kSyllableFirst = 0xAC00;
inline constexpr char32_t kSyllableLast = 0xD7A3;

inline constexpr int kChoseongCount = 19;
inline constexpr int kJungseongCount = 21;
inline constexpr int kJongseongCount = 28;  // includes "no jongseong" at 0
inline constexpr int kSyllableCount = kChoseongCount * kJungseongCount * kJongseongCount;
// Letters that can appear in a stream; the empty jongseong never does.
inline constexpr int kStreamLetterCount = kChoseongCount + kJungseongCount + kJongseongCount - 1;
// Positional inventory used for modeling, empty jongseong included.
inline constexpr int kPositionalUnitCount = kChoseongCount + kJungseongCount + kJongseongCount;

constexpr bool is_syllable(char32_t c) noexcept { return c >= kSyllableFirst && c <= kSyllableLast; }

class JamoTriple {
 public:
  // Throws IndexOutOfRange.
  JamoTriple(int cho, int jung, int jong = 0);

  int cho() const noexcept { return cho_; }
  int jung() const noexcept { return jung_; }
  int jong() const noexcept { return jong_; }
  bool has_jong() const noexcept { return jong_ != 0; }

  friend bool operator==(const JamoTriple&, const JamoTriple&) = default;
  friend auto operator<=>(const JamoTriple&, const JamoTriple&) = default;

 private:
  std::uint8_t cho_;
  std::uint8_t jung_;
  std::uint8_t jong_;
};

enum class JamoKind : std::uint8_t { choseong, jungseong, jongseong };

class JamoLetter {
 public:
  // Throws IndexOutOfRange; a jongseong index must be >= 1.
  JamoLetter(JamoKind kind, int index);

  JamoKind kind() const noexcept { return kind_; }
  int index() const noexcept { return index_; }

  // Conjoining-Jamo scalar, unique per positional letter.
  char32_t positional_scalar() const noexcept;
  // Compatibility-Jamo glyph (e.g. U+3131 'ㄱ' for both choseong and
  // jongseong kiyeok).
  char32_t display_scalar() const noexcept;

  // Inverse of positional_scalar().
  static std::optional<JamoLetter> from_positional(char32_t c) noexcept;

  friend bool operator==(const JamoLetter&, const JamoLetter&) = default;

 private:
  JamoKind kind_;
  std::uint8_t index_;
};

// A decomposed stream element: a Jamo letter or an untouched character.
using JamoSymbol = std::variant<JamoLetter, char32_t>;

JamoTriple decompose(char32_t syllable);  // throws NotAHangulSyllable
char32_t compose(const JamoTriple& triple) noexcept;

std::vector<JamoSymbol> text_to_jamo(std::u32string_view text);
std::vector<JamoSymbol> text_to_jamo(std::string_view utf8_text);

struct JamoDiagnostic {
  std::size_t position;  // index into the input symbol sequence
  std::string message;
};

// Regroups letters into syllable blocks. A consonant between two vowels
// starts the next block (a jongseong letter followed by a vowel is re-read as
// a choseong); letters that cannot join a block are emitted in display form
// and reported in `diagnostics` when given.
std::u32string jamo_to_text(std::span<const JamoSymbol> symbols,
                            std::vector<JamoDiagnostic>* diagnostics = nullptr);
std::string jamo_to_utf8(std::span<const JamoSymbol> symbols,
                         std::vector<JamoDiagnostic>* diagnostics = nullptr);

// Composes runs of conjoining Jamo (L V [T]) into precomposed syllables; the
// NFD-to-NFC step for modern Hangul. Everything else is copied.
std::u32string compose_conjoining(std::u32string_view text);

// Maps a compatibility-Jamo glyph to a positional letter: consonants become
// choseong when one exists, otherwise jongseong; vowels become jungseong.
std::optional<JamoLetter> letter_from_display(char32_t c) noexcept;

// Display form of a token string built from positional letters: complete
// cho+jung[+jong] runs are composed, leftover letters become compatibility
// glyphs, other characters are copied.
std::string to_display(std::string_view utf8_token);

}  // namespace kounit::hangul
