#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kounit {

// Base of every exception thrown by the library. Callers that only need to
// tell "bad input data" apart from "bad arguments" can use category().
class Error : public std::runtime_error {
 public:
  enum class Category { data, usage };

  explicit Error(const std::string& what, Category category = Category::data)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class NotAHangulSyllable : public Error {
 public:
  explicit NotAHangulSyllable(char32_t scalar);
  char32_t scalar() const noexcept { return scalar_; }

 private:
  char32_t scalar_;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus is empty") {}
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& what) : Error(what, Category::usage) {}
};

class UnencodableCharacter : public Error {
 public:
  UnencodableCharacter(char32_t ch, std::size_t position);
  char32_t character() const noexcept { return ch_; }
  std::size_t position() const noexcept { return position_; }

 private:
  char32_t ch_;
  std::size_t position_;
};

class UnknownTokenId : public Error {
 public:
  UnknownTokenId(long long id, std::size_t vocab_size);
};

class TargetTooSmall : public Error {
 public:
  TargetTooSmall(std::size_t target, std::size_t base_size);
};

class LineCountMismatch : public Error {
 public:
  LineCountMismatch(std::size_t refs, std::size_t hyps);
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (vocabulary, subword model, lattice, scorer table).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace kounit
