#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "kounit/beam_search.hpp"
#include "kounit/errors.hpp"
#include "kounit/lattice.hpp"
#include "kounit/metrics.hpp"
#include "kounit/scorers.hpp"
#include "kounit/subword.hpp"
#include "kounit/unit_schemes.hpp"
#include "kounit/vocabulary.hpp"

namespace kounit::cli {

namespace {

// "-" means stdin / stdout.
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot open " + path);
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot write " + path);
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

[[noreturn]] void rethrow_at(const Error& e, std::size_t line_no) {
  throw Error("line " + std::to_string(line_no) + ": " + e.what(), e.category());
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

Scheme make_scheme(const SchemeOptions& opt) {
  const auto kind = parse_unit_kind(opt.units);
  if (!kind) throw InvalidConfig("unknown unit kind '" + opt.units + "'");
  const auto english = parse_english_mode(opt.english);
  if (!english) throw InvalidConfig("unknown English mode '" + opt.english + "'");
  if (*kind == UnitKind::byte) {
    if (*english != EnglishMode::none) throw InvalidConfig("byte units take no English mode");
    return Scheme::byte();
  }
  Scheme s{*kind, *english, {}};
  if (!is_subword(*kind)) s.symbols = opt.symbols.empty() ? default_symbol_set() : split(opt.symbols, ',');
  s.validate();
  return s;
}

std::optional<subword::SubwordModel> load_model(const Scheme& scheme, const SchemeOptions& opt) {
  if (!is_subword(scheme.kind)) {
    if (!opt.subword_model.empty()) throw InvalidConfig("--subword-model only applies to sub-word unit kinds");
    return std::nullopt;
  }
  if (opt.subword_model.empty()) throw InvalidConfig("sub-word unit kinds need --subword-model");
  return subword::SubwordModel::load_file(opt.subword_model);
}

// Explicit --vocab wins. Otherwise the vocabulary is rebuilt where it does not
// depend on a corpus.
Vocabulary load_vocabulary(const std::string& path, const Scheme& scheme, const subword::SubwordModel* model) {
  if (!path.empty()) return Vocabulary::load_file(path);
  if (model != nullptr) return build_vocabulary(*model);
  if (scheme.kind == UnitKind::syllable) throw InvalidConfig("syllable units need --vocab");
  return build_vocabulary(std::vector<std::string>{}, scheme);
}

std::string token_line(const TokenSequence& ids, const Vocabulary& vocab, const std::string& format) {
  std::string out;
  for (TokenId id : ids) {
    if (!out.empty()) out += ' ';
    if (format == "ids") {
      out += std::to_string(id);
    } else if (format == "display") {
      out += display_token(vocab.token(id));
    } else {
      out += vocab.token(id);
    }
  }
  return out;
}

TokenSequence parse_token_line(const std::string& line, const Vocabulary& vocab, const std::string& format) {
  TokenSequence ids;
  for (const auto& piece : split(line, ' ')) {
    if (format == "ids") {
      std::size_t used = 0;
      long long id = 0;
      try {
        id = std::stoll(piece, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != piece.size()) throw FormatError("'" + piece + "' is not a token id");
      if (id < 0 || static_cast<std::size_t>(id) >= vocab.size()) throw UnknownTokenId(id, vocab.size());
      ids.push_back(static_cast<TokenId>(id));
    } else {
      ids.push_back(vocab.id_of(piece));
    }
  }
  return ids;
}

void check_format(const std::string& format, bool allow_display) {
  if (format == "tokens" || format == "ids" || (allow_display && format == "display")) return;
  throw InvalidConfig("unknown token format '" + format + "'");
}

std::unique_ptr<AttentionScorer> make_scorer(const std::string& spec, const Vocabulary& vocab) {
  if (spec == "uniform") return std::make_unique<scorers::UniformScorer>(vocab.size());
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const std::string path = spec.substr(colon + 1);
    if (kind == "table") {
      auto s = std::make_unique<scorers::TableScorer>(scorers::TableScorer::load_file(path));
      if (s->vocab_size() != vocab.size()) {
        throw DimensionMismatch("scorer table has V=" + std::to_string(s->vocab_size()) + " but the vocabulary has " +
                                std::to_string(vocab.size()) + " entries");
      }
      return s;
    }
    if (kind == "ngram") {
      return std::make_unique<scorers::NgramScorer>(
          scorers::NgramScorer::load_file(path, vocab.size(), vocab.sos_eos_id()));
    }
  }
  throw InvalidConfig("scorer must be 'uniform', 'table:FILE' or 'ngram:FILE', got '" + spec + "'");
}

}  // namespace

void vocab_build(const VocabBuildOptions& opt, std::ostream& log) {
  const Scheme scheme = make_scheme(opt.scheme);
  const auto model = load_model(scheme, opt.scheme);
  Vocabulary vocab = [&] {
    if (model) return build_vocabulary(*model);
    if (opt.top_k <= 0) throw InvalidConfig("--top-k must be positive");
    VocabularyConfig cfg;
    cfg.top_k_syllables = opt.top_k;
    if (scheme.kind != UnitKind::syllable) return build_vocabulary(std::vector<std::string>{}, scheme, cfg);
    Input in(opt.corpus);
    return build_vocabulary(in.get(), scheme, cfg);
  }();
  Output out(opt.output);
  vocab.save(out.get());
  log << "vocab-build: units=" << to_string(scheme.kind) << " core classes=" << core_class_count(vocab)
      << " total=" << vocab.size() << '\n';
}

void subword_train(const SubwordTrainOptions& opt, std::ostream& log) {
  const auto base = subword::parse_base(opt.base);
  if (!base) throw InvalidConfig("unknown sub-word base '" + opt.base + "'");
  if (opt.size == 0) throw InvalidConfig("--size is required");
  std::vector<std::string> corpus;
  {
    Input in(opt.corpus);
    std::string line;
    while (next_line(in.get(), line)) corpus.push_back(line);
  }
  const auto model = subword::train(corpus, *base, opt.size);
  Output out(opt.output);
  model.save(out.get());
  log << "subword-train: base=" << subword::to_string(*base) << " inventory=" << model.size()
      << " merges=" << model.merges().size() << '\n';
}

void tokenize(const TokenizeOptions& opt) {
  check_format(opt.format, true);
  const Scheme scheme = make_scheme(opt.scheme);
  const auto model = load_model(scheme, opt.scheme);
  const Vocabulary vocab = load_vocabulary(opt.vocab, scheme, model ? &*model : nullptr);
  const Codec codec(scheme, vocab, model ? &*model : nullptr);
  Input in(opt.input);
  Output out(opt.output);
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in.get(), line)) {
    ++line_no;
    try {
      out.get() << token_line(codec.encode(line), vocab, opt.format) << '\n';
    } catch (const Error& e) {
      rethrow_at(e, line_no);
    }
  }
}

void detokenize(const TokenizeOptions& opt) {
  check_format(opt.format, false);
  const Scheme scheme = make_scheme(opt.scheme);
  const auto model = load_model(scheme, opt.scheme);
  const Vocabulary vocab = load_vocabulary(opt.vocab, scheme, model ? &*model : nullptr);
  const Codec codec(scheme, vocab, model ? &*model : nullptr);
  Input in(opt.input);
  Output out(opt.output);
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in.get(), line)) {
    ++line_no;
    try {
      out.get() << codec.decode(parse_token_line(line, vocab, opt.format)) << '\n';
    } catch (const Error& e) {
      rethrow_at(e, line_no);
    }
  }
}

void decode(const DecodeOptions& opt, std::ostream& log) {
  if (opt.lattices.empty()) throw InvalidConfig("at least one --lattice is required");
  const MtlWeight lambda(opt.lambda);
  if (opt.beam == 0) throw InvalidConfig("--beam must be at least 1");
  const Scheme scheme = make_scheme(opt.scheme);
  const auto model = load_model(scheme, opt.scheme);
  const Vocabulary vocab = load_vocabulary(opt.vocab, scheme, model ? &*model : nullptr);
  const Codec codec(scheme, vocab, model ? &*model : nullptr);
  const auto scorer = make_scorer(opt.scorer, vocab);

  log << "decode: lambda=" << lambda.value() << " beam=" << opt.beam << " max_len=" << opt.max_len
      << " scorer=" << opt.scorer << '\n';

  BeamSearchOptions search;
  search.lambda = lambda;
  search.beam = opt.beam;
  search.max_len = opt.max_len;
  search.sos_eos = vocab.sos_eos_id();

  Output out(opt.output);
  std::optional<Output> nbest;
  if (!opt.nbest.empty()) {
    nbest.emplace(opt.nbest);
    nbest->get().precision(10);
    nbest->get() << "# lattice\trank\tcombined\tctc\tatt\tfinished\ttokens\n";
  }
  for (const auto& path : opt.lattices) {
    const LogProbLattice lattice = LogProbLattice::load_file(path);
    if (lattice.vocab_size() != vocab.size()) {
      throw DimensionMismatch(path + ": lattice has V=" + std::to_string(lattice.vocab_size()) +
                              " but the vocabulary has " + std::to_string(vocab.size()) + " entries");
    }
    if (lattice.blank() != vocab.blank_id()) {
      throw DimensionMismatch(path + ": lattice blank=" + std::to_string(lattice.blank()) +
                              " but the vocabulary puts <blk> at " + std::to_string(vocab.blank_id()));
    }
    const BeamSearchResult result = joint_beam_search(lattice, *scorer, search);
    if (!result.finished) log << "decode: " << path << ": no hypothesis ended within max_len\n";
    out.get() << codec.decode(result.hypotheses.front().labels) << '\n';
    if (nbest) {
      const std::size_t n = std::min(opt.nbest_size, result.hypotheses.size());
      for (std::size_t k = 0; k < n; ++k) {
        const Hypothesis& h = result.hypotheses[k];
        nbest->get() << path << '\t' << k + 1 << '\t' << h.combined_logp << '\t' << h.ctc_logp << '\t' << h.att_logp
                     << '\t' << (h.finished ? 1 : 0) << '\t' << token_line(h.labels, vocab, "tokens") << '\n';
      }
    }
  }
}

void score(const ScoreOptions& opt) {
  metrics::CharMode mode{};
  if (!metrics::parse_char_mode(opt.mode, mode)) throw InvalidConfig("unknown mode '" + opt.mode + "'");
  if (opt.format != "text" && opt.format != "kv") throw InvalidConfig("unknown report format '" + opt.format + "'");
  if (opt.ref.empty() || opt.hyp.empty()) throw InvalidConfig("--ref and --hyp are required");
  if (opt.ref == "-" && opt.hyp == "-") throw InvalidConfig("--ref and --hyp cannot both read stdin");
  Input ref(opt.ref);
  Input hyp(opt.hyp);
  metrics::Evaluator eval(mode);
  std::string r, h;
  std::size_t refs = 0, hyps = 0;
  while (true) {
    const bool got_r = next_line(ref.get(), r);
    const bool got_h = next_line(hyp.get(), h);
    refs += got_r;
    hyps += got_h;
    if (!got_r || !got_h) {
      // Count what is left on the longer side for the diagnostic.
      while (got_r && next_line(ref.get(), r)) ++refs;
      while (got_h && next_line(hyp.get(), h)) ++hyps;
      break;
    }
    eval.add(r, h);
  }
  if (refs != hyps) throw LineCountMismatch(refs, hyps);
  const auto report = eval.report();
  Output out(opt.output);
  out.get() << (opt.format == "kv" ? metrics::format_kv(report) : metrics::format_text(report));
}

}  // namespace kounit::cli
