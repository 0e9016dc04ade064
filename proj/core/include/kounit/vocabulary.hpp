#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kounit {

using TokenId = std::int32_t;
using TokenSequence = std::vector<TokenId>;

namespace tokens {
inline constexpr std::string_view kSpace = "<sp>";
inline constexpr std::string_view kUnknown = "<unk>";
inline constexpr std::string_view kBlank = "<blk>";
inline constexpr std::string_view kSosEos = "<sos/eos>";
// Placeholder for the empty jongseong in the positional Jamo inventory; never
// produced by encoding.
inline constexpr std::string_view kNoJongseong = "<nojong>";
}  // namespace tokens

// Ordered, immutable token <-> id map. Ids are dense 0..size()-1.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws FormatError on empty or duplicate tokens, or tokens containing
  // line breaks.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool contains(TokenId id) const noexcept { return id >= 0 && static_cast<std::size_t>(id) < tokens_.size(); }

  const std::string& token(TokenId id) const;  // throws UnknownTokenId
  std::optional<TokenId> find(std::string_view token) const;
  TokenId id_of(std::string_view token) const;  // throws FormatError when absent
  std::span<const std::string> tokens() const noexcept { return tokens_; }

  std::optional<TokenId> space_id() const { return find(tokens::kSpace); }
  std::optional<TokenId> unknown_id() const { return find(tokens::kUnknown); }
  TokenId blank_id() const { return id_of(tokens::kBlank); }
  TokenId sos_eos_id() const { return id_of(tokens::kSosEos); }

  // One token per line, line number = id.
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in);
  void save_file(const std::string& path) const;
  static Vocabulary load_file(const std::string& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
};

}  // namespace kounit
