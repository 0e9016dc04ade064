#include "kounit/vocabulary.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "kounit/errors.hpp"

namespace kounit {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& t = tokens_[i];
    if (t.empty()) throw FormatError("vocabulary entry " + std::to_string(i) + " is empty");
    if (t.find_first_of("\r\n") != std::string::npos) {
      throw FormatError("vocabulary entry " + std::to_string(i) + " contains a line break");
    }
    if (!ids_.emplace(t, static_cast<TokenId>(i)).second) {
      throw FormatError("duplicate vocabulary token '" + t + "' at line " + std::to_string(i + 1));
    }
  }
}

const std::string& Vocabulary::token(TokenId id) const {
  if (!contains(id)) throw UnknownTokenId(id, tokens_.size());
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id_of(std::string_view token) const {
  if (auto id = find(token)) return *id;
  throw FormatError("vocabulary has no token '" + std::string(token) + "'");
}

void Vocabulary::save(std::ostream& out) const {
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return Vocabulary(std::move(tokens));
}

void Vocabulary::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocabulary file " + path);
  save(out);
}

Vocabulary Vocabulary::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read vocabulary file " + path);
  return load(in);
}

}  // namespace kounit
