#include "kounit/errors.hpp"

#include <cstdio>

namespace kounit {

namespace {

std::string hex_scalar(char32_t c) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(c));
  return buf;
}

}  // namespace

NotAHangulSyllable::NotAHangulSyllable(char32_t scalar)
    : Error(hex_scalar(scalar) + " is not a precomposed Hangul syllable"), scalar_(scalar) {}

UnencodableCharacter::UnencodableCharacter(char32_t ch, std::size_t position)
    : Error("character " + hex_scalar(ch) + " at position " + std::to_string(position) +
            " has no token in this scheme"),
      ch_(ch),
      position_(position) {}

UnknownTokenId::UnknownTokenId(long long id, std::size_t vocab_size)
    : Error("token id " + std::to_string(id) + " outside vocabulary of size " +
            std::to_string(vocab_size)) {}

TargetTooSmall::TargetTooSmall(std::size_t target, std::size_t base_size)
    : Error("target size " + std::to_string(target) + " must exceed base inventory size " +
                std::to_string(base_size),
            Category::usage) {}

LineCountMismatch::LineCountMismatch(std::size_t refs, std::size_t hyps)
    : Error("reference has " + std::to_string(refs) + " lines but hypothesis has " +
            std::to_string(hyps)) {}

}  // namespace kounit
