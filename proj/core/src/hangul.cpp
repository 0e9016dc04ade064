#include "kounit/hangul.hpp"

#include <array>

#include "kounit/errors.hpp"
#include "kounit/utf8.hpp"

namespace kounit::hangul {

namespace {

constexpr char32_t kChoseongBase = 0x1100;
constexpr char32_t kJungseongBase = 0x1161;
constexpr char32_t kJongseongBase = 0x11A7;  // index 0 is "none"

constexpr std::array<char32_t, kChoseongCount> kChoseongDisplay = {
    0x3131, 0x3132, 0x3134, 0x3137, 0x3138, 0x3139, 0x3141, 0x3142, 0x3143, 0x3145,
    0x3146, 0x3147, 0x3148, 0x3149, 0x314A, 0x314B, 0x314C, 0x314D, 0x314E,
};

// Index 0 unused.
constexpr std::array<char32_t, kJongseongCount> kJongseongDisplay = {
    0,      0x3131, 0x3132, 0x3133, 0x3134, 0x3135, 0x3136, 0x3137, 0x3139, 0x313A,
    0x313B, 0x313C, 0x313D, 0x313E, 0x313F, 0x3140, 0x3141, 0x3142, 0x3144, 0x3145,
    0x3146, 0x3147, 0x3148, 0x314A, 0x314B, 0x314C, 0x314D, 0x314E,
};

constexpr char32_t kJungseongDisplayBase = 0x314F;

// Choseong index of a single-consonant jongseong, -1 for clusters.
constexpr std::array<int, kJongseongCount> kJongToCho = {
    -1, 0, 1, -1, 2, -1, -1, 3, 5, -1, -1, -1, -1, -1, -1, -1, 6, 7, -1, 9, 10, 11, 12, 14, 15, 16, 17, 18,
};

void check_range(int value, int count, const char* what) {
  if (value < 0 || value >= count) {
    throw IndexOutOfRange(std::string(what) + " index " + std::to_string(value) + " outside [0," +
                          std::to_string(count) + ")");
  }
}

const JamoLetter* as_letter(const JamoSymbol& s) { return std::get_if<JamoLetter>(&s); }

bool is_kind(const JamoSymbol& s, JamoKind kind) {
  const JamoLetter* l = as_letter(s);
  return l != nullptr && l->kind() == kind;
}

}  // namespace

JamoTriple::JamoTriple(int cho, int jung, int jong) {
  check_range(cho, kChoseongCount, "choseong");
  check_range(jung, kJungseongCount, "jungseong");
  check_range(jong, kJongseongCount, "jongseong");
  cho_ = static_cast<std::uint8_t>(cho);
  jung_ = static_cast<std::uint8_t>(jung);
  jong_ = static_cast<std::uint8_t>(jong);
}

JamoLetter::JamoLetter(JamoKind kind, int index) : kind_(kind) {
  switch (kind) {
    case JamoKind::choseong:
      check_range(index, kChoseongCount, "choseong");
      break;
    case JamoKind::jungseong:
      check_range(index, kJungseongCount, "jungseong");
      break;
    case JamoKind::jongseong:
      if (index == 0) throw IndexOutOfRange("the empty jongseong is not a stream letter");
      check_range(index, kJongseongCount, "jongseong");
      break;
  }
  index_ = static_cast<std::uint8_t>(index);
}

char32_t JamoLetter::positional_scalar() const noexcept {
  switch (kind_) {
    case JamoKind::choseong:
      return kChoseongBase + index_;
    case JamoKind::jungseong:
      return kJungseongBase + index_;
    case JamoKind::jongseong:
      return kJongseongBase + index_;
  }
  return 0;
}

char32_t JamoLetter::display_scalar() const noexcept {
  switch (kind_) {
    case JamoKind::choseong:
      return kChoseongDisplay[index_];
    case JamoKind::jungseong:
      return kJungseongDisplayBase + index_;
    case JamoKind::jongseong:
      return kJongseongDisplay[index_];
  }
  return 0;
}

std::optional<JamoLetter> JamoLetter::from_positional(char32_t c) noexcept {
  if (c >= kChoseongBase && c < kChoseongBase + kChoseongCount) {
    return JamoLetter(JamoKind::choseong, static_cast<int>(c - kChoseongBase));
  }
  if (c >= kJungseongBase && c < kJungseongBase + kJungseongCount) {
    return JamoLetter(JamoKind::jungseong, static_cast<int>(c - kJungseongBase));
  }
  if (c > kJongseongBase && c < kJongseongBase + kJongseongCount) {
    return JamoLetter(JamoKind::jongseong, static_cast<int>(c - kJongseongBase));
  }
  return std::nullopt;
}

JamoTriple decompose(char32_t syllable) {
  if (!is_syllable(syllable)) throw NotAHangulSyllable(syllable);
  const int offset = static_cast<int>(syllable - kSyllableFirst);
  const int jong = offset % kJongseongCount;
  const int jung = (offset / kJongseongCount) % kJungseongCount;
  const int cho = offset / (kJongseongCount * kJungseongCount);
  return JamoTriple(cho, jung, jong);
}

char32_t compose(const JamoTriple& t) noexcept {
  return kSyllableFirst +
         static_cast<char32_t>((t.cho() * kJungseongCount + t.jung()) * kJongseongCount + t.jong());
}

std::vector<JamoSymbol> text_to_jamo(std::u32string_view text) {
  std::vector<JamoSymbol> out;
  out.reserve(text.size() * 3);
  for (char32_t c : text) {
    if (!is_syllable(c)) {
      out.emplace_back(c);
      continue;
    }
    const JamoTriple t = decompose(c);
    out.emplace_back(JamoLetter(JamoKind::choseong, t.cho()));
    out.emplace_back(JamoLetter(JamoKind::jungseong, t.jung()));
    if (t.has_jong()) out.emplace_back(JamoLetter(JamoKind::jongseong, t.jong()));
  }
  return out;
}

std::vector<JamoSymbol> text_to_jamo(std::string_view utf8_text) {
  return text_to_jamo(std::u32string_view(utf8::decode(utf8_text)));
}

std::u32string jamo_to_text(std::span<const JamoSymbol> symbols, std::vector<JamoDiagnostic>* diagnostics) {
  std::u32string out;
  out.reserve(symbols.size());
  const std::size_t n = symbols.size();

  // Choseong reading of symbols[i], if it can start a block.
  auto as_initial = [&](std::size_t i) -> int {
    const JamoLetter* l = as_letter(symbols[i]);
    if (l == nullptr) return -1;
    if (l->kind() == JamoKind::choseong) return l->index();
    if (l->kind() == JamoKind::jongseong && i + 1 < n && is_kind(symbols[i + 1], JamoKind::jungseong)) {
      return kJongToCho[l->index()];
    }
    return -1;
  };

  std::size_t i = 0;
  while (i < n) {
    if (const char32_t* c = std::get_if<char32_t>(&symbols[i])) {
      out.push_back(*c);
      ++i;
      continue;
    }
    const int cho = as_initial(i);
    if (cho >= 0 && i + 1 < n && is_kind(symbols[i + 1], JamoKind::jungseong)) {
      const int jung = std::get<JamoLetter>(symbols[i + 1]).index();
      i += 2;
      int jong = 0;
      if (i < n && is_kind(symbols[i], JamoKind::jongseong)) {
        const int candidate = std::get<JamoLetter>(symbols[i]).index();
        const bool vowel_follows = i + 1 < n && is_kind(symbols[i + 1], JamoKind::jungseong);
        // Leave it for the next block when it can serve as that block's initial.
        if (!(vowel_follows && kJongToCho[candidate] >= 0)) {
          jong = candidate;
          ++i;
        }
      }
      out.push_back(compose(JamoTriple(cho, jung, jong)));
      continue;
    }
    const JamoLetter& lone = std::get<JamoLetter>(symbols[i]);
    if (diagnostics != nullptr) {
      diagnostics->push_back({i, "letter " + utf8::encode(lone.display_scalar()) + " does not form a syllable block"});
    }
    out.push_back(lone.display_scalar());
    ++i;
  }
  return out;
}

std::string jamo_to_utf8(std::span<const JamoSymbol> symbols, std::vector<JamoDiagnostic>* diagnostics) {
  return utf8::encode(jamo_to_text(symbols, diagnostics));
}

std::u32string compose_conjoining(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const std::size_t n = text.size();
  auto letter_at = [&](std::size_t i, JamoKind kind) -> std::optional<JamoLetter> {
    if (i >= n) return std::nullopt;
    auto l = JamoLetter::from_positional(text[i]);
    if (l && l->kind() == kind) return l;
    return std::nullopt;
  };
  std::size_t i = 0;
  while (i < n) {
    if (auto cho = letter_at(i, JamoKind::choseong)) {
      if (auto jung = letter_at(i + 1, JamoKind::jungseong)) {
        int jong = 0;
        std::size_t used = 2;
        if (auto t = letter_at(i + 2, JamoKind::jongseong)) {
          jong = t->index();
          used = 3;
        }
        out.push_back(compose(JamoTriple(cho->index(), jung->index(), jong)));
        i += used;
        continue;
      }
    }
    // Precomposed LV syllable followed by a trailing consonant.
    if (is_syllable(text[i]) && !decompose(text[i]).has_jong()) {
      if (auto t = letter_at(i + 1, JamoKind::jongseong)) {
        out.push_back(text[i] + static_cast<char32_t>(t->index()));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::optional<JamoLetter> letter_from_display(char32_t c) noexcept {
  for (int k = 0; k < kChoseongCount; ++k) {
    if (kChoseongDisplay[k] == c) return JamoLetter(JamoKind::choseong, k);
  }
  for (int k = 1; k < kJongseongCount; ++k) {
    if (kJongseongDisplay[k] == c) return JamoLetter(JamoKind::jongseong, k);
  }
  if (c >= kJungseongDisplayBase && c < kJungseongDisplayBase + kJungseongCount) {
    return JamoLetter(JamoKind::jungseong, static_cast<int>(c - kJungseongDisplayBase));
  }
  return std::nullopt;
}

std::string to_display(std::string_view utf8_token) {
  std::vector<JamoSymbol> symbols;
  for (char32_t c : utf8::decode(utf8_token)) {
    if (auto l = JamoLetter::from_positional(c)) {
      symbols.emplace_back(*l);
    } else {
      symbols.emplace_back(c);
    }
  }
  return jamo_to_utf8(symbols);
}

}  // namespace kounit::hangul
