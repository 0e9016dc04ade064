#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

// Subcommands of the kounit tool. Each one reads its inputs, writes its
// outputs and throws kounit::Error on failure; main() maps exceptions to
// exit codes.

namespace kounit::cli {

// Unit scheme flags shared by vocab-build, tokenize, detokenize and decode.
struct SchemeOptions {
  std::string units = "syllable";
  std::string english = "none";
  std::string symbols;  // comma-separated; empty means the default set
  std::string subword_model;
};

struct VocabBuildOptions {
  SchemeOptions scheme;
  std::string corpus = "-";
  std::string output = "-";
  int top_k = 2350;
};

struct SubwordTrainOptions {
  std::string corpus = "-";
  std::string output = "-";
  std::string base = "syllable";
  std::size_t size = 0;
};

struct TokenizeOptions {
  SchemeOptions scheme;
  std::string vocab;
  std::string input = "-";
  std::string output = "-";
  std::string format = "tokens";  // tokens | ids | display
};

struct DecodeOptions {
  SchemeOptions scheme;
  std::string vocab;
  std::vector<std::string> lattices;
  std::string scorer = "uniform";
  double lambda = 0.2;
  std::size_t beam = 30;
  std::size_t max_len = 0;
  std::size_t nbest_size = 10;
  std::string output = "-";
  std::string nbest;
};

struct ScoreOptions {
  std::string ref;
  std::string hyp;
  std::string mode = "surface";
  std::string format = "text";  // text | kv
  std::string output = "-";
};

void vocab_build(const VocabBuildOptions& opt, std::ostream& log);
void subword_train(const SubwordTrainOptions& opt, std::ostream& log);
void tokenize(const TokenizeOptions& opt);
void detokenize(const TokenizeOptions& opt);
void decode(const DecodeOptions& opt, std::ostream& log);
void score(const ScoreOptions& opt);

}  // namespace kounit::cli
