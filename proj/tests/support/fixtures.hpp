#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "kounit/utf8.hpp"

#ifndef KOUNIT_FIXTURE_DIR
#error "KOUNIT_FIXTURE_DIR must be defined"
#endif

namespace kounit::testing {

inline std::string fixture_path(const std::string& name) { return std::string(KOUNIT_FIXTURE_DIR) + "/" + name; }

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> fixture_lines(const std::string& name) { return read_lines(fixture_path(name)); }

// Syllable number i (counting from U+AC00) occurs 3000 - i times, so the
// frequency ranking is known exactly.
inline std::vector<std::string> ranked_syllable_corpus() {
  std::vector<std::string> lines;
  for (int i = 0; i < 3000; ++i) {
    std::string line;
    const std::string syl = utf8::encode(static_cast<char32_t>(0xAC00 + i));
    for (int k = 0; k < 3000 - i; ++k) {
      line += syl;
      if (k % 16 == 15) line += ' ';
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

// Splits a comma-separated display row such as "학,교,에,<sp>,간,다".
inline std::vector<std::string> split_row(const std::string& row) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : row) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace kounit::testing
