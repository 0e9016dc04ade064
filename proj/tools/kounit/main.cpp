// kounit: build unit inventories, train sub-word models, tokenize text,
// decode CTC lattices and score hypotheses.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "kounit/errors.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

void add_scheme_options(CLI::App* cmd, kounit::cli::SchemeOptions& s) {
  cmd->add_option("--units", s.units, "syllable, jamo, byte, syllable-subword or jamo-subword")
      ->capture_default_str();
  cmd->add_option("--english", s.english, "none, char or subword")->capture_default_str();
  cmd->add_option("--symbols", s.symbols, "comma-separated symbol classes (default: # % & + - * / = @ 0-9)");
  cmd->add_option("--subword-model", s.subword_model, "sub-word model file (sub-word unit kinds)");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = kounit::cli;

  CLI::App app{"Korean acoustic-modeling unit toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file supplying option defaults");
  app.allow_windows_style_options(false);

  cli::VocabBuildOptions vb;
  auto* vocab_cmd = app.add_subcommand("vocab-build", "Build a unit vocabulary");
  add_scheme_options(vocab_cmd, vb.scheme);
  vocab_cmd->add_option("--corpus", vb.corpus, "training text, one utterance per line ('-' for stdin)")
      ->capture_default_str();
  vocab_cmd->add_option("--output", vb.output, "vocabulary file ('-' for stdout)")->capture_default_str();
  vocab_cmd->add_option("--top-k", vb.top_k, "syllable classes kept, most frequent first")->capture_default_str();

  cli::SubwordTrainOptions st;
  auto* train_cmd = app.add_subcommand("subword-train", "Train a pair-merge sub-word model");
  train_cmd->add_option("--corpus", st.corpus, "training text ('-' for stdin)")->capture_default_str();
  train_cmd->add_option("--output", st.output, "model file ('-' for stdout)")->capture_default_str();
  train_cmd->add_option("--base", st.base, "syllable or jamo")->capture_default_str();
  train_cmd->add_option("--size", st.size, "target inventory size")->required();

  cli::TokenizeOptions tk;
  auto* tok_cmd = app.add_subcommand("tokenize", "Text to tokens, one line per line");
  add_scheme_options(tok_cmd, tk.scheme);
  tok_cmd->add_option("--vocab", tk.vocab, "vocabulary file");
  tok_cmd->add_option("--input", tk.input, "text ('-' for stdin)")->capture_default_str();
  tok_cmd->add_option("--output", tk.output, "tokens ('-' for stdout)")->capture_default_str();
  tok_cmd->add_option("--format", tk.format, "tokens, ids or display")->capture_default_str();

  cli::TokenizeOptions dt;
  auto* detok_cmd = app.add_subcommand("detokenize", "Tokens back to text");
  add_scheme_options(detok_cmd, dt.scheme);
  detok_cmd->add_option("--vocab", dt.vocab, "vocabulary file");
  detok_cmd->add_option("--input", dt.input, "tokens ('-' for stdin)")->capture_default_str();
  detok_cmd->add_option("--output", dt.output, "text ('-' for stdout)")->capture_default_str();
  detok_cmd->add_option("--format", dt.format, "tokens or ids")->capture_default_str();

  cli::DecodeOptions dc;
  auto* dec_cmd = app.add_subcommand("decode", "Joint CTC/attention beam search over lattice files");
  add_scheme_options(dec_cmd, dc.scheme);
  dec_cmd->add_option("--vocab", dc.vocab, "vocabulary file");
  dec_cmd->add_option("--lattice", dc.lattices, "lattice file; repeat for several utterances")->required();
  dec_cmd->add_option("--scorer", dc.scorer, "uniform, table:FILE or ngram:FILE")->capture_default_str();
  dec_cmd->add_option("--lambda", dc.lambda, "CTC weight in [0, 1]")->capture_default_str();
  dec_cmd->add_option("--beam", dc.beam, "beam width")->capture_default_str();
  dec_cmd->add_option("--max-len", dc.max_len, "longest hypothesis; 0 means the frame count")->capture_default_str();
  dec_cmd->add_option("--output", dc.output, "top-1 text per lattice ('-' for stdout)")->capture_default_str();
  dec_cmd->add_option("--nbest", dc.nbest, "n-best file with combined, CTC and attention scores");
  dec_cmd->add_option("--nbest-size", dc.nbest_size, "hypotheses per lattice in the n-best file")
      ->capture_default_str();

  cli::ScoreOptions sc;
  auto* score_cmd = app.add_subcommand("score", "CER / WER / SER of hypotheses against references");
  score_cmd->add_option("--ref", sc.ref, "reference text")->required();
  score_cmd->add_option("--hyp", sc.hyp, "hypothesis text, line-parallel to --ref")->required();
  score_cmd->add_option("--mode", sc.mode, "surface, raw, jamo or token")->capture_default_str();
  score_cmd->add_option("--format", sc.format, "text or kv")->capture_default_str();
  score_cmd->add_option("--output", sc.output, "report ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*vocab_cmd) cli::vocab_build(vb, std::cerr);
    if (*train_cmd) cli::subword_train(st, std::cerr);
    if (*tok_cmd) cli::tokenize(tk);
    if (*detok_cmd) cli::detokenize(dt);
    if (*dec_cmd) cli::decode(dc, std::cerr);
    if (*score_cmd) cli::score(sc);
  } catch (const kounit::Error& e) {
    std::cerr << "kounit: " << e.what() << '\n';
    return e.category() == kounit::Error::Category::usage ? kUsageError : kDataError;
  } catch (const std::exception& e) {
    std::cerr << "kounit: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
