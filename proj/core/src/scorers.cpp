#include "kounit/scorers.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kounit/errors.hpp"
#include "kounit/log_math.hpp"

namespace kounit::scorers {

namespace {

std::vector<double> uniform_row(std::size_t v) { return std::vector<double>(v, -std::log(static_cast<double>(v))); }

void check_row(const std::vector<double>& row, std::size_t v, const std::string& where) {
  if (row.size() != v) {
    throw FormatError(where + ": expected " + std::to_string(v) + " values, got " + std::to_string(row.size()));
  }
  if (std::abs(log_sum_exp(row)) > 1e-6) throw FormatError(where + ": distribution does not normalize");
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (true) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    double v = 0;
    auto [ptr, ec] = std::from_chars(p, end, v);
    if (ec == std::errc::result_out_of_range) {
      v = kLogZero;
    } else if (ec != std::errc()) {
      throw FormatError("unparsable number near '" + std::string(p, std::min<std::size_t>(end - p, 16)) + "'");
    }
    out.push_back(clamp_log(v));
    p = ptr;
  }
  return out;
}

TokenSequence parse_ids(std::string_view text, char sep) {
  TokenSequence out;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p < end) {
    while (p < end && (*p == sep || *p == ' ' || *p == '\r')) ++p;
    if (p == end) break;
    TokenId id = 0;
    auto [ptr, ec] = std::from_chars(p, end, id);
    if (ec != std::errc()) throw FormatError("unparsable token id in '" + std::string(text) + "'");
    out.push_back(id);
    p = ptr;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

UniformScorer::UniformScorer(std::size_t vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size == 0) throw InvalidConfig("scorer vocabulary must be non-empty");
}

std::vector<double> UniformScorer::score_next(std::span<const TokenId>) const { return uniform_row(vocab_size_); }

// ---------------------------------------------------------------------------

TableScorer::TableScorer(std::size_t vocab_size, std::map<TokenSequence, std::vector<double>> rows,
                         std::vector<double> fallback)
    : vocab_size_(vocab_size), rows_(std::move(rows)), fallback_(std::move(fallback)) {
  if (vocab_size == 0) throw InvalidConfig("scorer vocabulary must be non-empty");
  if (fallback_.empty()) fallback_ = uniform_row(vocab_size_);
  check_row(fallback_, vocab_size_, "fallback row");
  for (const auto& [prefix, row] : rows_) check_row(row, vocab_size_, "table row");
}

std::vector<double> TableScorer::score_next(std::span<const TokenId> prefix) const {
  auto it = rows_.find(TokenSequence(prefix.begin(), prefix.end()));
  return it == rows_.end() ? fallback_ : it->second;
}

TableScorer TableScorer::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("scorer table is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  long long v = 0;
  if (line.rfind("V=", 0) != 0) throw FormatError("scorer table must start with V=<int>");
  auto [ptr, ec] = std::from_chars(line.data() + 2, line.data() + line.size(), v);
  if (ec != std::errc() || ptr != line.data() + line.size() || v <= 0) throw FormatError("bad scorer header '" + line + "'");
  std::map<TokenSequence, std::vector<double>> rows;
  std::vector<double> fallback;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("scorer table line " + std::to_string(line_no) + " lacks a TAB");
    const std::string key = line.substr(0, tab);
    std::vector<double> row = parse_doubles(std::string_view(line).substr(tab + 1));
    if (key == "*") {
      fallback = std::move(row);
    } else if (key == "-") {
      rows[{}] = std::move(row);
    } else {
      rows[parse_ids(key, ',')] = std::move(row);
    }
  }
  return TableScorer(static_cast<std::size_t>(v), std::move(rows), std::move(fallback));
}

TableScorer TableScorer::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read scorer table " + path);
  return load(in);
}

void TableScorer::save(std::ostream& out) const {
  auto write_row = [&](const std::vector<double>& row) {
    char buf[64];
    for (std::size_t i = 0; i < row.size(); ++i) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), row[i]);
      if (i > 0) out << ' ';
      out.write(buf, p - buf);
    }
    out << '\n';
  };
  out << "V=" << vocab_size_ << '\n';
  out << "*\t";
  write_row(fallback_);
  for (const auto& [prefix, row] : rows_) {
    if (prefix.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < prefix.size(); ++i) out << (i ? "," : "") << prefix[i];
    }
    out << '\t';
    write_row(row);
  }
}

// ---------------------------------------------------------------------------

NgramScorer::NgramScorer(std::size_t vocab_size, TokenId sos_eos, int order, double add_k,
                         std::span<const TokenSequence> training)
    : vocab_size_(vocab_size), sos_eos_(sos_eos), order_(order), add_k_(add_k) {
  if (vocab_size == 0) throw InvalidConfig("scorer vocabulary must be non-empty");
  if (order < 1) throw InvalidConfig("n-gram order must be at least 1");
  if (!(add_k > 0.0)) throw InvalidConfig("add-k smoothing constant must be positive");
  if (sos_eos < 0 || static_cast<std::size_t>(sos_eos) >= vocab_size) {
    throw InvalidConfig("<sos/eos> id outside the scorer vocabulary");
  }
  for (const auto& seq : training) {
    TokenSequence prefix;
    for (std::size_t i = 0; i <= seq.size(); ++i) {
      const TokenId next = i < seq.size() ? seq[i] : sos_eos_;
      if (next < 0 || static_cast<std::size_t>(next) >= vocab_size_) {
        throw InvalidConfig("training token id " + std::to_string(next) + " outside the scorer vocabulary");
      }
      auto& row = counts_[history(prefix)];
      if (row.empty()) row.assign(vocab_size_, 0.0);
      row[static_cast<std::size_t>(next)] += 1.0;
      prefix.push_back(next);
    }
  }
}

TokenSequence NgramScorer::history(std::span<const TokenId> prefix) const {
  const std::size_t n = static_cast<std::size_t>(order_ - 1);
  TokenSequence h(n, sos_eos_);
  const std::size_t take = std::min(n, prefix.size());
  std::copy(prefix.end() - static_cast<std::ptrdiff_t>(take), prefix.end(), h.end() - static_cast<std::ptrdiff_t>(take));
  return h;
}

std::vector<double> NgramScorer::score_next(std::span<const TokenId> prefix) const {
  auto it = counts_.find(history(prefix));
  if (it == counts_.end()) return uniform_row(vocab_size_);
  double total = 0.0;
  for (double c : it->second) total += c;
  const double denom = std::log(total + add_k_ * static_cast<double>(vocab_size_));
  std::vector<double> out(vocab_size_);
  for (std::size_t v = 0; v < vocab_size_; ++v) out[v] = std::log(it->second[v] + add_k_) - denom;
  return out;
}

NgramScorer NgramScorer::load(std::istream& in, std::size_t vocab_size, TokenId sos_eos) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("n-gram scorer file is empty");
  std::istringstream header(line);
  std::string of, kf;
  header >> of >> kf;
  int order = 0;
  double add_k = 0;
  bool ok = of.rfind("order=", 0) == 0 && kf.rfind("add_k=", 0) == 0;
  if (ok) {
    auto r1 = std::from_chars(of.data() + 6, of.data() + of.size(), order);
    auto r2 = std::from_chars(kf.data() + 6, kf.data() + kf.size(), add_k);
    ok = r1.ec == std::errc() && r2.ec == std::errc() && r1.ptr == of.data() + of.size() &&
         r2.ptr == kf.data() + kf.size();
  }
  if (!ok) throw FormatError("bad n-gram scorer header '" + line + "'");
  std::vector<TokenSequence> training;
  while (std::getline(in, line)) training.push_back(parse_ids(line, ' '));
  return NgramScorer(vocab_size, sos_eos, order, add_k, training);
}

NgramScorer NgramScorer::load_file(const std::string& path, std::size_t vocab_size, TokenId sos_eos) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read n-gram scorer " + path);
  return load(in, vocab_size, sos_eos);
}

}  // namespace kounit::scorers
