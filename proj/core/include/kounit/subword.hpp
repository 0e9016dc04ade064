#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kounit/vocabulary.hpp"

// Pair-merge sub-word units over syllable or Jamo base streams.
//
// Every space in a line becomes one word-marker unit (U+2581). The marker is
// an ordinary base unit that a merge may join to the word on its left or on
// its right, but no token ever holds content from two words: a token never
// has non-marker units on both sides of a marker.
namespace kounit::subword {

enum class Base { syllable, jamo };

std::string_view to_string(Base base) noexcept;
std::optional<Base> parse_base(std::string_view name) noexcept;

inline constexpr std::string_view kWordMarker = "▁";
inline constexpr char32_t kWordMarkerScalar = 0x2581;

struct Merge {
  std::string left;
  std::string right;
  friend bool operator==(const Merge&, const Merge&) = default;
};

// Splits a line into base units. Jamo base decomposes syllables into
// positional letters. Throws UnencodableCharacter on tab, CR, LF or a literal
// word marker.
std::vector<std::string> base_units(std::string_view text, Base base);

class SubwordModel {
 public:
  // Throws FormatError if the inventory is inconsistent with the merges.
  SubwordModel(Base base, std::size_t target_size, std::vector<Merge> merges, std::vector<std::string> inventory);

  Base base() const noexcept { return base_; }
  std::size_t target_size() const noexcept { return target_size_; }
  std::span<const Merge> merges() const noexcept { return merges_; }
  std::span<const std::string> inventory() const noexcept { return inventory_; }
  std::size_t size() const noexcept { return inventory_.size(); }
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const;  // throws UnknownTokenId

  // Replays the merges in order over the base-unit stream of `text`.
  // Unseen base units become <unk> under a syllable base; a Jamo base
  // throws UnencodableCharacter.
  TokenSequence apply(std::string_view text) const;
  std::vector<std::string> apply_pieces(std::string_view text) const;

  // Concatenates pieces, turns markers back into spaces and, for a Jamo
  // base, regroups letters into syllables. Throws UnknownTokenId.
  std::string detokenize(std::span<const TokenId> tokens) const;

  // Header "base=<syllable|jamo> size=<N>", then "left<TAB>right" per merge,
  // then one inventory token per line.
  void save(std::ostream& out) const;
  static SubwordModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static SubwordModel load_file(const std::string& path);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  struct Rule {
    std::size_t rank;
    TokenId result;
  };

  static std::uint64_t pair_key(TokenId a, TokenId b) noexcept {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  Base base_;
  std::size_t target_size_;
  std::vector<Merge> merges_;
  std::vector<std::string> inventory_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
  std::unordered_map<std::uint64_t, Rule> rules_;
  std::optional<TokenId> unknown_;
};

// Greedy pair-merge training. Pairs are merged by descending corpus
// frequency, ties broken by (left, right) in byte order, until the inventory
// reaches target_size or no admissible pair remains.
// Throws EmptyCorpus, TargetTooSmall.
SubwordModel train(std::span<const std::string> corpus, Base base, std::size_t target_size);

// Surface text of a piece sequence (the detokenize rule, usable without a model).
std::string join_pieces(std::span<const std::string> pieces, Base base);

}  // namespace kounit::subword
