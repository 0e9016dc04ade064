#include "kounit/unit_schemes.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "kounit/errors.hpp"
#include "kounit/hangul.hpp"
#include "kounit/utf8.hpp"

namespace kounit {

namespace {

using hangul::JamoKind;
using hangul::JamoLetter;

std::string positional(JamoKind kind, int index) {
  return utf8::encode(JamoLetter(kind, index).positional_scalar());
}

std::string byte_token(int b) {
  char buf[3];
  std::snprintf(buf, sizeof(buf), "%02x", b);
  return buf;
}

void append_symbols_and_english(std::vector<std::string>& tokens, const Scheme& scheme) {
  tokens.insert(tokens.end(), scheme.symbols.begin(), scheme.symbols.end());
  if (scheme.english == EnglishMode::characters) {
    auto en = english_classes();
    tokens.insert(tokens.end(), en.begin(), en.end());
  }
}

void append_decoder_tokens(std::vector<std::string>& tokens) {
  tokens.emplace_back(tokens::kBlank);
  tokens.emplace_back(tokens::kSosEos);
}

}  // namespace

std::string_view to_string(UnitKind kind) noexcept {
  switch (kind) {
    case UnitKind::syllable:
      return "syllable";
    case UnitKind::jamo:
      return "jamo";
    case UnitKind::byte:
      return "byte";
    case UnitKind::syllable_subword:
      return "syllable-subword";
    case UnitKind::jamo_subword:
      return "jamo-subword";
  }
  return "?";
}

std::string_view to_string(EnglishMode mode) noexcept {
  switch (mode) {
    case EnglishMode::none:
      return "none";
    case EnglishMode::characters:
      return "char";
    case EnglishMode::subword:
      return "subword";
  }
  return "?";
}

std::optional<UnitKind> parse_unit_kind(std::string_view name) noexcept {
  for (auto k : {UnitKind::syllable, UnitKind::jamo, UnitKind::byte, UnitKind::syllable_subword,
                 UnitKind::jamo_subword}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<EnglishMode> parse_english_mode(std::string_view name) noexcept {
  for (auto m : {EnglishMode::none, EnglishMode::characters, EnglishMode::subword}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

bool is_subword(UnitKind kind) noexcept {
  return kind == UnitKind::syllable_subword || kind == UnitKind::jamo_subword;
}

std::vector<std::string> default_symbol_set() {
  return {"#", "%", "&", "+", "-", "*", "/", "=", "@", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9"};
}

std::vector<std::string> english_classes() {
  std::vector<std::string> out;
  for (char c = 'a'; c <= 'z'; ++c) out.emplace_back(1, c);
  out.emplace_back("'");
  return out;
}

void Scheme::validate() const {
  switch (kind) {
    case UnitKind::byte:
      if (english != EnglishMode::none) throw InvalidConfig("byte units take no English mode");
      if (!symbols.empty()) throw InvalidConfig("byte units take no symbol set");
      return;
    case UnitKind::syllable:
    case UnitKind::jamo:
      if (english == EnglishMode::subword) {
        throw InvalidConfig("English sub-words need a sub-word unit kind");
      }
      break;
    case UnitKind::syllable_subword:
    case UnitKind::jamo_subword:
      if (english == EnglishMode::characters) {
        throw InvalidConfig("sub-word unit kinds learn English pieces; use --english subword or none");
      }
      return;
  }
  std::set<std::string> seen;
  const auto english = english_classes();
  for (const auto& s : symbols) {
    if (s.empty() || s.find_first_of(" \t\r\n") != std::string::npos) {
      throw InvalidConfig("symbol '" + s + "' must be non-empty and free of whitespace");
    }
    if (!seen.insert(s).second) throw InvalidConfig("duplicate symbol '" + s + "'");
    if (s.front() == '<' && s.back() == '>') throw InvalidConfig("symbol '" + s + "' collides with special tokens");
    if (this->english == EnglishMode::characters && std::find(english.begin(), english.end(), s) != english.end()) {
      throw InvalidConfig("symbol '" + s + "' collides with an English class");
    }
    for (char32_t c : utf8::decode(s)) {
      if (hangul::is_syllable(c)) throw InvalidConfig("symbol '" + s + "' contains Hangul");
    }
  }
}

// ---------------------------------------------------------------------------
// Vocabulary construction

void SyllableCounter::add_line(std::string_view line) {
  if (line.empty()) return;
  ++lines_;
  for (char32_t c : hangul::compose_conjoining(utf8::decode(line))) {
    if (hangul::is_syllable(c)) ++counts_[c];
  }
}

std::vector<char32_t> SyllableCounter::top(std::size_t k) const {
  std::vector<std::pair<char32_t, long long>> ranked(counts_.begin(), counts_.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  std::vector<char32_t> out;
  out.reserve(ranked.size());
  for (const auto& [c, n] : ranked) out.push_back(c);
  return out;
}

Vocabulary build_vocabulary(const SyllableCounter& counts, const Scheme& scheme, const VocabularyConfig& config) {
  scheme.validate();
  if (is_subword(scheme.kind)) {
    throw InvalidConfig("sub-word vocabularies are built from a trained sub-word model");
  }
  std::vector<std::string> tokens;
  switch (scheme.kind) {
    case UnitKind::syllable: {
      if (config.top_k_syllables <= 0) throw InvalidConfig("top_k_syllables must be positive");
      if (counts.lines() == 0) throw EmptyCorpus();
      for (char32_t c : counts.top(static_cast<std::size_t>(config.top_k_syllables))) {
        tokens.push_back(utf8::encode(c));
      }
      tokens.emplace_back(tokens::kSpace);
      tokens.emplace_back(tokens::kUnknown);
      append_symbols_and_english(tokens, scheme);
      break;
    }
    case UnitKind::jamo: {
      for (int i = 0; i < hangul::kChoseongCount; ++i) tokens.push_back(positional(JamoKind::choseong, i));
      for (int i = 0; i < hangul::kJungseongCount; ++i) tokens.push_back(positional(JamoKind::jungseong, i));
      tokens.emplace_back(tokens::kNoJongseong);
      for (int i = 1; i < hangul::kJongseongCount; ++i) tokens.push_back(positional(JamoKind::jongseong, i));
      tokens.emplace_back(tokens::kSpace);
      append_symbols_and_english(tokens, scheme);
      break;
    }
    case UnitKind::byte:
      for (int b = 0; b < 256; ++b) tokens.push_back(byte_token(b));
      break;
    default:
      break;
  }
  append_decoder_tokens(tokens);
  return Vocabulary(std::move(tokens));
}

Vocabulary build_vocabulary(std::span<const std::string> corpus, const Scheme& scheme,
                            const VocabularyConfig& config) {
  SyllableCounter counts;
  if (scheme.kind == UnitKind::syllable) {
    for (const auto& line : corpus) counts.add_line(line);
  }
  return build_vocabulary(counts, scheme, config);
}

Vocabulary build_vocabulary(std::istream& corpus, const Scheme& scheme, const VocabularyConfig& config) {
  SyllableCounter counts;
  if (scheme.kind == UnitKind::syllable) {
    std::string line;
    while (std::getline(corpus, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      counts.add_line(line);
    }
  }
  return build_vocabulary(counts, scheme, config);
}

Vocabulary build_vocabulary(const subword::SubwordModel& model) {
  std::vector<std::string> tokens(model.inventory().begin(), model.inventory().end());
  if (model.base() == subword::Base::syllable && !model.find(tokens::kUnknown)) {
    tokens.emplace_back(tokens::kUnknown);
  }
  append_decoder_tokens(tokens);
  return Vocabulary(std::move(tokens));
}

std::size_t core_class_count(const Vocabulary& vocab) {
  std::size_t n = vocab.size();
  if (vocab.find(tokens::kBlank)) --n;
  if (vocab.find(tokens::kSosEos)) --n;
  return n;
}

// ---------------------------------------------------------------------------
// Codec

Codec::Codec(Scheme scheme, const Vocabulary& vocab, const subword::SubwordModel* model)
    : scheme_(std::move(scheme)), vocab_(&vocab), model_(model) {
  scheme_.validate();
  roles_.assign(vocab.size(), Role::plain);
  payload_.assign(vocab.size(), 0);
  for (auto special : {tokens::kBlank, tokens::kSosEos, tokens::kNoJongseong}) {
    if (auto id = vocab.find(special)) roles_[*id] = Role::silent;
  }
  space_ = vocab.space_id();
  unknown_ = vocab.unknown_id();
  if (space_) roles_[*space_] = Role::space;
  if (unknown_) roles_[*unknown_] = Role::unknown;

  const bool subword_kind = is_subword(scheme_.kind);
  if (subword_kind) {
    if (model_ == nullptr) throw InvalidConfig("sub-word unit kinds need a sub-word model");
    const auto want = scheme_.kind == UnitKind::syllable_subword ? subword::Base::syllable : subword::Base::jamo;
    if (model_->base() != want) throw InvalidConfig("sub-word model base does not match the unit kind");
    piece_to_vocab_.reserve(model_->size());
    for (const auto& piece : model_->inventory()) {
      const TokenId id = vocab.id_of(piece);
      piece_to_vocab_.push_back(id);
      if (roles_[id] == Role::plain) roles_[id] = Role::piece;
    }
    return;
  }

  if (scheme_.kind == UnitKind::byte) {
    for (int b = 0; b < 256; ++b) {
      const TokenId id = vocab.id_of(byte_token(b));
      byte_ids_.push_back(id);
      roles_[id] = Role::byte;
      payload_[id] = b;
    }
    return;
  }

  if (!space_) throw FormatError("vocabulary lacks <sp>");
  for (const auto& s : scheme_.symbols) {
    symbols_longest_first_.push_back(utf8::decode(s));
  }
  std::stable_sort(symbols_longest_first_.begin(), symbols_longest_first_.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& s : symbols_longest_first_) symbol_ids_.push_back(vocab.id_of(utf8::encode(s)));
  if (scheme_.english == EnglishMode::characters) {
    for (const auto& e : english_classes()) english_ids_.push_back(vocab.id_of(e));
  }

  if (scheme_.kind == UnitKind::syllable) {
    if (!unknown_) throw FormatError("syllable vocabulary lacks <unk>");
    for (std::size_t id = 0; id < vocab.size(); ++id) {
      const std::u32string t = utf8::decode(vocab.tokens()[id]);
      if (t.size() == 1 && hangul::is_syllable(t.front())) syllable_ids_.emplace(t.front(), static_cast<TokenId>(id));
    }
    return;
  }

  // jamo
  auto letter_id = [&](JamoKind kind, int index) {
    const JamoLetter l(kind, index);
    const TokenId id = vocab.id_of(utf8::encode(l.positional_scalar()));
    roles_[id] = Role::jamo;
    payload_[id] = static_cast<std::int32_t>(l.positional_scalar());
    return id;
  };
  for (int i = 0; i < hangul::kChoseongCount; ++i) cho_ids_.push_back(letter_id(JamoKind::choseong, i));
  for (int i = 0; i < hangul::kJungseongCount; ++i) jung_ids_.push_back(letter_id(JamoKind::jungseong, i));
  jong_ids_.push_back(-1);
  for (int i = 1; i < hangul::kJongseongCount; ++i) jong_ids_.push_back(letter_id(JamoKind::jongseong, i));
}

void Codec::encode_char(char32_t c, std::size_t pos, TokenSequence& out) const {
  if (scheme_.english == EnglishMode::characters) {
    if (c >= 'A' && c <= 'Z') c = c - 'A' + 'a';
    if (c >= 'a' && c <= 'z') {
      out.push_back(english_ids_[c - 'a']);
      return;
    }
    if (c == '\'') {
      out.push_back(english_ids_.back());
      return;
    }
  }
  if (scheme_.kind == UnitKind::syllable) {
    auto it = syllable_ids_.find(c);
    out.push_back(it != syllable_ids_.end() ? it->second : *unknown_);
    return;
  }
  // jamo
  if (hangul::is_syllable(c)) {
    const hangul::JamoTriple t = hangul::decompose(c);
    out.push_back(cho_ids_[t.cho()]);
    out.push_back(jung_ids_[t.jung()]);
    if (t.has_jong()) out.push_back(jong_ids_[t.jong()]);
    return;
  }
  std::optional<JamoLetter> letter = JamoLetter::from_positional(c);
  if (!letter) letter = hangul::letter_from_display(c);
  if (letter) {
    switch (letter->kind()) {
      case JamoKind::choseong:
        out.push_back(cho_ids_[letter->index()]);
        return;
      case JamoKind::jungseong:
        out.push_back(jung_ids_[letter->index()]);
        return;
      case JamoKind::jongseong:
        out.push_back(jong_ids_[letter->index()]);
        return;
    }
  }
  throw UnencodableCharacter(c, pos);
}

TokenSequence Codec::encode(std::string_view text) const {
  TokenSequence out;
  if (is_subword(scheme_.kind)) {
    for (TokenId piece : model_->apply(text)) out.push_back(piece_to_vocab_[piece]);
    return out;
  }
  if (scheme_.kind == UnitKind::byte) {
    out.reserve(text.size());
    for (char b : text) out.push_back(byte_ids_[static_cast<unsigned char>(b)]);
    return out;
  }
  const std::u32string chars = hangul::compose_conjoining(utf8::decode(text));
  out.reserve(chars.size() * 2);
  std::size_t i = 0;
  while (i < chars.size()) {
    if (chars[i] == U' ') {
      out.push_back(*space_);
      ++i;
      continue;
    }
    bool matched = false;
    for (std::size_t s = 0; s < symbols_longest_first_.size(); ++s) {
      const auto& sym = symbols_longest_first_[s];
      if (chars.compare(i, sym.size(), sym) == 0) {
        out.push_back(symbol_ids_[s]);
        i += sym.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    encode_char(chars[i], i, out);
    ++i;
  }
  return out;
}

std::string Codec::decode(std::span<const TokenId> tokens) const {
  const Vocabulary& vocab = *vocab_;
  for (TokenId id : tokens) {
    if (!vocab.contains(id)) throw UnknownTokenId(id, vocab.size());
  }

  if (is_subword(scheme_.kind)) {
    std::vector<std::string> pieces;
    pieces.reserve(tokens.size());
    for (TokenId id : tokens) {
      if (roles_[id] == Role::silent) continue;
      pieces.push_back(vocab.token(id));
    }
    return subword::join_pieces(pieces, model_->base());
  }

  if (scheme_.kind == UnitKind::byte) {
    std::string bytes;
    for (TokenId id : tokens) {
      if (roles_[id] == Role::byte) bytes.push_back(static_cast<char>(payload_[id]));
    }
    return utf8::encode(utf8::decode(bytes));
  }

  std::vector<hangul::JamoSymbol> symbols;
  symbols.reserve(tokens.size());
  for (TokenId id : tokens) {
    switch (roles_[id]) {
      case Role::space:
        symbols.emplace_back(U' ');
        break;
      case Role::unknown:
        symbols.emplace_back(utf8::kReplacement);
        break;
      case Role::silent:
        break;
      case Role::jamo:
        symbols.emplace_back(*JamoLetter::from_positional(static_cast<char32_t>(payload_[id])));
        break;
      default:
        for (char32_t c : utf8::decode(vocab.token(id))) symbols.emplace_back(c);
        break;
    }
  }
  return hangul::jamo_to_utf8(symbols);
}

TokenSequence encode(std::string_view text, const Vocabulary& vocab, const Scheme& scheme,
                     const subword::SubwordModel* model) {
  return Codec(scheme, vocab, model).encode(text);
}

std::string decode(std::span<const TokenId> tokens, const Vocabulary& vocab, const Scheme& scheme,
                   const subword::SubwordModel* model) {
  return Codec(scheme, vocab, model).decode(tokens);
}

std::string display_token(std::string_view token) { return hangul::to_display(token); }

}  // namespace kounit
