#include "kounit/subword.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

#include "kounit/errors.hpp"
#include "kounit/hangul.hpp"
#include "kounit/utf8.hpp"

namespace kounit::subword {

namespace {

using hangul::JamoKind;
using hangul::JamoLetter;

std::uint64_t make_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

bool starts_with_marker(std::string_view s) { return s.substr(0, kWordMarker.size()) == kWordMarker; }

bool ends_with_marker(std::string_view s) {
  return s.size() >= kWordMarker.size() && s.substr(s.size() - kWordMarker.size()) == kWordMarker;
}

bool only_markers(std::string_view s) {
  while (starts_with_marker(s)) s.remove_prefix(kWordMarker.size());
  return s.empty();
}

// Shape of a token relative to word markers; enough to decide whether the
// concatenation of two tokens keeps words apart.
struct Shape {
  bool content;  // holds at least one non-marker unit
  bool leading_marker;
  bool trailing_marker;

  static Shape of(std::string_view s) {
    return {!only_markers(s), starts_with_marker(s), ends_with_marker(s)};
  }
};

bool admissible(const Shape& a, const Shape& b) {
  return !(a.content && b.content && (a.trailing_marker || b.leading_marker));
}

std::vector<std::string> base_inventory(Base base, const std::vector<char32_t>& other_chars) {
  std::vector<std::string> inv;
  inv.emplace_back(kWordMarker);
  if (base == Base::syllable) {
    inv.emplace_back(tokens::kUnknown);
  } else {
    for (int i = 0; i < hangul::kChoseongCount; ++i)
      inv.push_back(utf8::encode(JamoLetter(JamoKind::choseong, i).positional_scalar()));
    for (int i = 0; i < hangul::kJungseongCount; ++i)
      inv.push_back(utf8::encode(JamoLetter(JamoKind::jungseong, i).positional_scalar()));
    for (int i = 1; i < hangul::kJongseongCount; ++i)
      inv.push_back(utf8::encode(JamoLetter(JamoKind::jongseong, i).positional_scalar()));
  }
  for (char32_t c : other_chars) inv.push_back(utf8::encode(c));
  return inv;
}

}  // namespace

std::string_view to_string(Base base) noexcept { return base == Base::syllable ? "syllable" : "jamo"; }

std::optional<Base> parse_base(std::string_view name) noexcept {
  if (name == "syllable") return Base::syllable;
  if (name == "jamo") return Base::jamo;
  return std::nullopt;
}

std::vector<std::string> base_units(std::string_view text, Base base) {
  const std::u32string chars = hangul::compose_conjoining(utf8::decode(text));
  std::vector<std::string> units;
  units.reserve(chars.size() * (base == Base::jamo ? 3 : 1));
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const char32_t c = chars[i];
    if (c == '\t' || c == '\r' || c == '\n' || c == kWordMarkerScalar) throw UnencodableCharacter(c, i);
    if (c == ' ') {
      units.emplace_back(kWordMarker);
    } else if (base == Base::jamo && hangul::is_syllable(c)) {
      const hangul::JamoTriple t = hangul::decompose(c);
      units.push_back(utf8::encode(JamoLetter(JamoKind::choseong, t.cho()).positional_scalar()));
      units.push_back(utf8::encode(JamoLetter(JamoKind::jungseong, t.jung()).positional_scalar()));
      if (t.has_jong()) units.push_back(utf8::encode(JamoLetter(JamoKind::jongseong, t.jong()).positional_scalar()));
    } else {
      units.push_back(utf8::encode(c));
    }
  }
  return units;
}

std::string join_pieces(std::span<const std::string> pieces, Base base) {
  std::u32string joined;
  for (const auto& p : pieces) {
    if (p == tokens::kUnknown) {
      joined.push_back(utf8::kReplacement);
      continue;
    }
    for (char32_t c : utf8::decode(p)) joined.push_back(c == kWordMarkerScalar ? U' ' : c);
  }
  if (base == Base::syllable) return utf8::encode(joined);
  std::vector<hangul::JamoSymbol> symbols;
  symbols.reserve(joined.size());
  for (char32_t c : joined) {
    if (auto l = JamoLetter::from_positional(c)) {
      symbols.emplace_back(*l);
    } else {
      symbols.emplace_back(c);
    }
  }
  return hangul::jamo_to_utf8(symbols);
}

// ---------------------------------------------------------------------------
// SubwordModel

SubwordModel::SubwordModel(Base base, std::size_t target_size, std::vector<Merge> merges,
                           std::vector<std::string> inventory)
    : base_(base), target_size_(target_size), merges_(std::move(merges)), inventory_(std::move(inventory)) {
  for (std::size_t i = 0; i < inventory_.size(); ++i) {
    if (inventory_[i].empty()) throw FormatError("empty sub-word token at " + std::to_string(i));
    if (!ids_.emplace(inventory_[i], static_cast<TokenId>(i)).second) {
      throw FormatError("duplicate sub-word token '" + inventory_[i] + "'");
    }
  }
  if (inventory_.size() > target_size_) {
    throw FormatError("inventory of " + std::to_string(inventory_.size()) + " exceeds target size " +
                      std::to_string(target_size_));
  }
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    const Merge& m = merges_[r];
    auto l = find(m.left);
    auto rt = find(m.right);
    auto res = find(m.left + m.right);
    if (!l || !rt || !res) {
      throw FormatError("merge " + std::to_string(r + 1) + " ('" + m.left + "', '" + m.right +
                        "') refers to tokens missing from the inventory");
    }
    // First occurrence wins; later duplicates of the same pair are inert.
    rules_.emplace(pair_key(*l, *rt), Rule{r, *res});
  }
  if (base_ == Base::syllable) unknown_ = find(tokens::kUnknown);
}

std::optional<TokenId> SubwordModel::find(std::string_view token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& SubwordModel::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= inventory_.size()) throw UnknownTokenId(id, inventory_.size());
  return inventory_[static_cast<std::size_t>(id)];
}

TokenSequence SubwordModel::apply(std::string_view text) const {
  const std::vector<std::string> units = base_units(text, base_);
  TokenSequence seq;
  seq.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (auto id = find(units[i])) {
      seq.push_back(*id);
    } else if (unknown_) {
      seq.push_back(*unknown_);
    } else {
      throw UnencodableCharacter(utf8::decode(units[i]).front(), i);
    }
  }

  // Repeatedly apply the lowest-ranked merge present, all of its
  // non-overlapping occurrences left to right.
  while (seq.size() > 1) {
    std::size_t best_rank = merges_.size();
    TokenId best_left = -1, best_right = -1, best_result = -1;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      auto it = rules_.find(pair_key(seq[i], seq[i + 1]));
      if (it != rules_.end() && it->second.rank < best_rank) {
        best_rank = it->second.rank;
        best_left = seq[i];
        best_right = seq[i + 1];
        best_result = it->second.result;
      }
    }
    if (best_result < 0) break;
    TokenSequence next;
    next.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i + 1 < seq.size() && seq[i] == best_left && seq[i + 1] == best_right) {
        next.push_back(best_result);
        ++i;
      } else {
        next.push_back(seq[i]);
      }
    }
    seq = std::move(next);
  }
  return seq;
}

std::vector<std::string> SubwordModel::apply_pieces(std::string_view text) const {
  std::vector<std::string> pieces;
  for (TokenId id : apply(text)) pieces.push_back(token(id));
  return pieces;
}

std::string SubwordModel::detokenize(std::span<const TokenId> tokens) const {
  std::vector<std::string> pieces;
  pieces.reserve(tokens.size());
  for (TokenId id : tokens) pieces.push_back(token(id));
  return join_pieces(pieces, base_);
}

void SubwordModel::save(std::ostream& out) const {
  out << "base=" << to_string(base_) << " size=" << target_size_ << '\n';
  for (const auto& m : merges_) out << m.left << '\t' << m.right << '\n';
  for (const auto& t : inventory_) out << t << '\n';
}

SubwordModel SubwordModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("sub-word model file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream header(line);
  std::string base_field, size_field;
  header >> base_field >> size_field;
  std::optional<Base> base;
  if (base_field.rfind("base=", 0) == 0) base = parse_base(std::string_view(base_field).substr(5));
  std::size_t size = 0;
  bool size_ok = false;
  if (size_field.rfind("size=", 0) == 0) {
    try {
      std::size_t used = 0;
      size = std::stoul(size_field.substr(5), &used);
      size_ok = used == size_field.size() - 5;
    } catch (const std::exception&) {
      size_ok = false;
    }
  }
  if (!base || !size_ok) throw FormatError("bad sub-word model header: '" + line + "'");

  std::vector<Merge> merges;
  std::vector<std::string> inventory;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab != std::string::npos) {
      if (!inventory.empty()) throw FormatError("merge after inventory at line " + std::to_string(line_no));
      if (line.find('\t', tab + 1) != std::string::npos || tab == 0 || tab + 1 == line.size()) {
        throw FormatError("malformed merge at line " + std::to_string(line_no));
      }
      merges.push_back({line.substr(0, tab), line.substr(tab + 1)});
    } else {
      inventory.push_back(line);
    }
  }
  return SubwordModel(*base, size, std::move(merges), std::move(inventory));
}

void SubwordModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write sub-word model " + path);
  save(out);
}

SubwordModel SubwordModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read sub-word model " + path);
  return load(in);
}

// ---------------------------------------------------------------------------
// Training

namespace {

class Trainer {
 public:
  Trainer(Base base, std::size_t target_size) : base_(base), target_size_(target_size) {}

  SubwordModel run(std::span<const std::string> corpus) {
    // Identical lines are merged identically; keep one copy with a weight.
    std::map<std::vector<std::string>, long long> lines;
    std::vector<char32_t> other_chars;
    for (const auto& line : corpus) {
      std::vector<std::string> units = base_units(line, base_);
      for (const auto& u : units) {
        if (u == kWordMarker) continue;
        const std::u32string c = utf8::decode(u);
        if (base_ == Base::jamo && JamoLetter::from_positional(c.front())) continue;
        other_chars.push_back(c.front());
      }
      ++lines[std::move(units)];
    }
    std::sort(other_chars.begin(), other_chars.end());
    other_chars.erase(std::unique(other_chars.begin(), other_chars.end()), other_chars.end());

    for (auto& t : base_inventory(base_, other_chars)) intern(t);
    inventory_ = symbols_;
    if (target_size_ <= inventory_.size()) throw TargetTooSmall(target_size_, inventory_.size());

    for (const auto& [units, weight] : lines) {
      if (units.empty()) continue;
      const int first = static_cast<int>(sym_.size());
      for (std::size_t i = 0; i < units.size(); ++i) {
        sym_.push_back(intern(units[i]));
        prev_.push_back(i == 0 ? -1 : static_cast<int>(sym_.size()) - 2);
        next_.push_back(-1);
        weight_.push_back(weight);
        if (i > 0) next_[sym_.size() - 2] = static_cast<int>(sym_.size()) - 1;
      }
      for (int n = first; n + 1 < static_cast<int>(sym_.size()); ++n) add_pair(n, weight_[n]);
    }
    for (const auto& [key, count] : counts_) push(key, count);

    std::vector<Merge> merges;
    while (inventory_.size() < target_size_ && !heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      auto it = counts_.find(top.key);
      const long long current = it == counts_.end() ? 0 : it->second;
      if (current <= 0) continue;
      if (current != top.count) {
        push(top.key, current);
        continue;
      }
      const int a = static_cast<int>(top.key >> 32);
      const int b = static_cast<int>(top.key & 0xFFFFFFFFu);
      merges.push_back({symbols_[a], symbols_[b]});
      const bool known = index_.count(symbols_[a] + symbols_[b]) != 0;
      const int c = intern(symbols_[a] + symbols_[b]);
      if (!known) inventory_.push_back(symbols_[c]);
      apply_merge(top.key, a, b, c);
    }
    return SubwordModel(base_, target_size_, std::move(merges), std::move(inventory_));
  }

 private:
  struct Entry {
    long long count;
    std::uint64_t key;
  };
  struct Worse {
    const Trainer* self;
    // True when x ranks below y: lower count, or equal count and a
    // lexicographically larger pair.
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.count != y.count) return x.count < y.count;
      const auto& s = self->symbols_;
      const int xa = static_cast<int>(x.key >> 32), xb = static_cast<int>(x.key & 0xFFFFFFFFu);
      const int ya = static_cast<int>(y.key >> 32), yb = static_cast<int>(y.key & 0xFFFFFFFFu);
      if (s[xa] != s[ya]) return s[xa] > s[ya];
      return s[xb] > s[yb];
    }
  };

  int intern(const std::string& token) {
    auto [it, inserted] = index_.emplace(token, static_cast<int>(symbols_.size()));
    if (inserted) {
      symbols_.push_back(token);
      shapes_.push_back(Shape::of(token));
    }
    return it->second;
  }

  bool pair_allowed(int a, int b) const {
    if (!admissible(shapes_[a], shapes_[b])) return false;
    // The merged string must not impersonate the unknown token.
    return symbols_[a].size() + symbols_[b].size() != tokens::kUnknown.size() ||
           symbols_[a] + symbols_[b] != tokens::kUnknown;
  }

  void add_pair(int node, long long weight) {
    const int nx = next_[node];
    if (nx < 0) return;
    const int a = sym_[node], b = sym_[nx];
    if (!pair_allowed(a, b)) return;
    const std::uint64_t key = make_key(a, b);
    counts_[key] += weight;
    where_[key].push_back(node);
  }

  void remove_pair(int node, long long weight) {
    const int nx = next_[node];
    if (nx < 0) return;
    const int a = sym_[node], b = sym_[nx];
    if (!pair_allowed(a, b)) return;
    counts_[make_key(a, b)] -= weight;
  }

  void push(std::uint64_t key, long long count) { heap_.push({count, key}); }

  void apply_merge(std::uint64_t key, int a, int b, int c) {
    std::vector<int> nodes = std::move(where_[key]);
    where_.erase(key);
    std::sort(nodes.begin(), nodes.end());
    std::vector<std::uint64_t> touched;
    for (int x : nodes) {
      if (sym_[x] != a) continue;  // stale: node already rewritten or removed
      const int y = next_[x];
      if (y < 0 || sym_[y] != b) continue;
      const long long w = weight_[x];
      const int p = prev_[x];
      if (p >= 0) remove_pair(p, w);
      remove_pair(y, w);
      counts_[key] -= w;

      sym_[x] = c;
      next_[x] = next_[y];
      if (next_[y] >= 0) prev_[next_[y]] = x;
      sym_[y] = -1;
      next_[y] = prev_[y] = -1;

      if (p >= 0) {
        add_pair(p, w);
        if (pair_allowed(sym_[p], c)) touched.push_back(make_key(sym_[p], c));
      }
      add_pair(x, w);
      if (next_[x] >= 0 && pair_allowed(c, sym_[next_[x]])) touched.push_back(make_key(c, sym_[next_[x]]));
    }
    counts_.erase(key);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (auto k : touched) {
      auto it = counts_.find(k);
      if (it != counts_.end() && it->second > 0) push(k, it->second);
    }
  }

  Base base_;
  std::size_t target_size_;

  std::vector<std::string> symbols_;
  std::vector<Shape> shapes_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> inventory_;

  // Doubly linked node lists, one per distinct line.
  std::vector<int> sym_, prev_, next_;
  std::vector<long long> weight_;

  std::unordered_map<std::uint64_t, long long> counts_;
  std::unordered_map<std::uint64_t, std::vector<int>> where_;
  std::priority_queue<Entry, std::vector<Entry>, Worse> heap_{Worse{this}};
};

}  // namespace

SubwordModel train(std::span<const std::string> corpus, Base base, std::size_t target_size) {
  if (std::all_of(corpus.begin(), corpus.end(), [](const std::string& line) { return line.empty(); })) {
    throw EmptyCorpus();
  }
  return Trainer(base, target_size).run(corpus);
}

}  // namespace kounit::subword
