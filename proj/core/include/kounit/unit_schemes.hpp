#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kounit/subword.hpp"
#include "kounit/vocabulary.hpp"

namespace kounit {

enum class UnitKind { syllable, jamo, byte, syllable_subword, jamo_subword };
enum class EnglishMode { none, characters, subword };

std::string_view to_string(UnitKind kind) noexcept;
std::string_view to_string(EnglishMode mode) noexcept;
std::optional<UnitKind> parse_unit_kind(std::string_view name) noexcept;
std::optional<EnglishMode> parse_english_mode(std::string_view name) noexcept;

bool is_subword(UnitKind kind) noexcept;

// The 19 spoken-symbol classes used when none are configured: nine marks
// and the ten digits.
std::vector<std::string> default_symbol_set();

// The 27 English classes: a..z and the apostrophe.
std::vector<std::string> english_classes();

struct Scheme {
  UnitKind kind = UnitKind::syllable;
  EnglishMode english = EnglishMode::none;
  std::vector<std::string> symbols = default_symbol_set();

  // Throws InvalidConfig:
  //  - byte: English mode must be none and the symbol set empty;
  //  - syllable/jamo: English mode none or characters;
  //  - sub-word kinds: English mode none or subword (English letters are
  //    ordinary base units there);
  //  - symbols must be non-empty, unique, space-free strings.
  void validate() const;

  static Scheme byte() { return Scheme{UnitKind::byte, EnglishMode::none, {}}; }
};

struct VocabularyConfig {
  int top_k_syllables = 2350;
};

// Accumulates syllable frequencies line by line so corpora can be streamed.
class SyllableCounter {
 public:
  void add_line(std::string_view line);
  std::size_t lines() const noexcept { return lines_; }  // non-empty lines seen
  // Most frequent first, ties by ascending code point.
  std::vector<char32_t> top(std::size_t k) const;

 private:
  std::unordered_map<char32_t, long long> counts_;
  std::size_t lines_ = 0;
};

// Layouts (ids in this order):
//   syllable: top-k syllables, <sp>, <unk>, symbols, [27 English], <blk>, <sos/eos>
//   jamo:     19 choseong, 21 jungseong, <nojong>, 27 jongseong, <sp>, symbols,
//             [27 English], <blk>, <sos/eos>
//   byte:     "00".."ff", <blk>, <sos/eos>
// Throws EmptyCorpus (syllable kind), InvalidConfig.
Vocabulary build_vocabulary(std::span<const std::string> corpus, const Scheme& scheme,
                            const VocabularyConfig& config = {});
Vocabulary build_vocabulary(std::istream& corpus, const Scheme& scheme, const VocabularyConfig& config = {});
Vocabulary build_vocabulary(const SyllableCounter& counts, const Scheme& scheme,
                            const VocabularyConfig& config = {});
// Sub-word kinds: model inventory, <unk> when the base has none, <blk>, <sos/eos>.
Vocabulary build_vocabulary(const subword::SubwordModel& model);

// Number of classes before <blk> and <sos/eos> are appended.
std::size_t core_class_count(const Vocabulary& vocab);

// Text <-> token ids for one scheme. Construction resolves every id the scheme
// needs, so a Codec is cheap to reuse across lines. Sub-word kinds need the
// model the vocabulary was built from.
class Codec {
 public:
  Codec(Scheme scheme, const Vocabulary& vocab, const subword::SubwordModel* model = nullptr);

  // Throws UnencodableCharacter (jamo kinds).
  TokenSequence encode(std::string_view text) const;
  // <unk> renders as U+FFFD; <blk>, <sos/eos> and <nojong> render as
  // nothing. Throws UnknownTokenId.
  std::string decode(std::span<const TokenId> tokens) const;

  const Scheme& scheme() const noexcept { return scheme_; }
  const Vocabulary& vocabulary() const noexcept { return *vocab_; }

 private:
  enum class Role : std::uint8_t { plain, space, unknown, silent, jamo, byte, piece };

  void encode_char(char32_t c, std::size_t pos, TokenSequence& out) const;

  Scheme scheme_;
  const Vocabulary* vocab_;
  const subword::SubwordModel* model_;
  std::vector<std::u32string> symbols_longest_first_;
  std::vector<TokenId> symbol_ids_;
  std::optional<TokenId> space_, unknown_;
  std::vector<TokenId> cho_ids_, jung_ids_, jong_ids_;
  std::vector<TokenId> english_ids_;  // a..z, then apostrophe
  std::vector<TokenId> byte_ids_;
  std::unordered_map<char32_t, TokenId> syllable_ids_;
  std::vector<TokenId> piece_to_vocab_;  // sub-word inventory id -> vocabulary id
  std::vector<Role> roles_;              // per vocabulary id
  std::vector<std::int32_t> payload_;    // byte value or positional scalar, per id
};

// One-shot conveniences over Codec.
TokenSequence encode(std::string_view text, const Vocabulary& vocab, const Scheme& scheme,
                     const subword::SubwordModel* model = nullptr);
std::string decode(std::span<const TokenId> tokens, const Vocabulary& vocab, const Scheme& scheme,
                   const subword::SubwordModel* model = nullptr);

// Display form of a token, as printed in token listings: positional Jamo
// become compatibility glyphs, everything else is unchanged.
std::string display_token(std::string_view token);

}  // namespace kounit
