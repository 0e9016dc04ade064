#include "kounit/lattice.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kounit/errors.hpp"
#include "kounit/log_math.hpp"

namespace kounit {

namespace {

bool parse_field(const std::string& field, const char* key, long long& value) {
  const std::string prefix = std::string(key) + "=";
  if (field.rfind(prefix, 0) != 0) return false;
  const char* first = field.data() + prefix.size();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

LogProbLattice::LogProbLattice(std::size_t frames, std::size_t vocab_size, std::vector<double> values, TokenId blank)
    : frames_(frames), vocab_size_(vocab_size), blank_(blank), values_(std::move(values)) {
  if (frames_ == 0 || vocab_size_ == 0) throw DimensionMismatch("lattice needs T >= 1 and V >= 1");
  if (values_.size() != frames_ * vocab_size_) {
    throw DimensionMismatch("lattice holds " + std::to_string(values_.size()) + " values, expected " +
                            std::to_string(frames_ * vocab_size_));
  }
  if (blank_ < 0 || static_cast<std::size_t>(blank_) >= vocab_size_) {
    throw DimensionMismatch("blank id " + std::to_string(blank_) + " outside vocabulary of size " +
                            std::to_string(vocab_size_));
  }
  for (double& v : values_) {
    if (std::isnan(v)) throw FormatError("lattice contains NaN");
    v = clamp_log(v);
  }
  for (std::size_t t = 0; t < frames_; ++t) {
    const double z = log_sum_exp(row(t));
    if (!(std::abs(z) <= kRowTolerance)) {
      throw FormatError("lattice row " + std::to_string(t) + " does not normalize (logsumexp = " +
                        std::to_string(z) + ")");
    }
  }
}

LogProbLattice LogProbLattice::from_logits(std::size_t frames, std::size_t vocab_size, std::span<const double> logits,
                                           TokenId blank) {
  if (logits.size() != frames * vocab_size) throw DimensionMismatch("logit matrix has the wrong size");
  std::vector<double> values(logits.begin(), logits.end());
  for (std::size_t t = 0; t < frames; ++t) {
    const std::span<double> r(values.data() + t * vocab_size, vocab_size);
    const double z = log_sum_exp(r);
    for (double& v : r) v -= z;
  }
  return LogProbLattice(frames, vocab_size, std::move(values), blank);
}

void LogProbLattice::save(std::ostream& out) const {
  out << "T=" << frames_ << " V=" << vocab_size_ << " blank=" << blank_ << '\n';
  char buf[64];
  for (std::size_t t = 0; t < frames_; ++t) {
    for (std::size_t v = 0; v < vocab_size_; ++v) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), values_[t * vocab_size_ + v]);
      if (v > 0) out << ' ';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

LogProbLattice LogProbLattice::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("lattice file is empty");
  std::istringstream header(line);
  std::string tf, vf, bf;
  header >> tf >> vf >> bf;
  long long frames = 0, vocab = 0, blank = 0;
  if (!parse_field(tf, "T", frames) || !parse_field(vf, "V", vocab) || !parse_field(bf, "blank", blank) ||
      frames <= 0 || vocab <= 0) {
    throw FormatError("bad lattice header: '" + line + "'");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(frames * vocab));
  for (long long t = 0; t < frames; ++t) {
    if (!std::getline(in, line)) {
      throw FormatError("lattice ends after " + std::to_string(t) + " of " + std::to_string(frames) + " rows");
    }
    const char* p = line.data();
    const char* end = line.data() + line.size();
    long long count = 0;
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      double v = 0;
      auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() && ec != std::errc::result_out_of_range) {
        throw FormatError("unparsable value in lattice row " + std::to_string(t));
      }
      if (ec == std::errc::result_out_of_range) v = kLogZero;
      values.push_back(v);
      ++count;
      p = ptr;
    }
    if (count != vocab) {
      throw FormatError("lattice row " + std::to_string(t) + " has " + std::to_string(count) + " values, expected " +
                        std::to_string(vocab));
    }
  }
  return LogProbLattice(static_cast<std::size_t>(frames), static_cast<std::size_t>(vocab), std::move(values),
                        static_cast<TokenId>(blank));
}

void LogProbLattice::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write lattice " + path);
  save(out);
}

LogProbLattice LogProbLattice::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read lattice " + path);
  return load(in);
}

}  // namespace kounit
