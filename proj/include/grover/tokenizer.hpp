#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grover/errors.hpp"

namespace grover::tok {

using Token = std::string;

// Quantum-native tokenization of one logical line. Rule cascade:
//   1. gate definitions  -> ["gate", name, params..., qubits..., "{"]
//   2. operations        -> [name, ("(", params..., ")")?, targets...]
//   3. "}"               -> ["}"]
//   4. empty             -> []
//   5. register decls    -> [decl, name]           e.g. ["qubit[2]", "q"]
//   6. measurements      -> [clbit, "=", "measure", qubit]
// Tokens matching ^(_gate_q_|unitary_|mcx_vchain_)\d+$ have the numeric
// suffix stripped unless preserve_indices is set. Anything else raises
// SyntaxError ("Unrecognized command").
std::vector<Token> tokenize_line(const std::string& line, bool preserve_indices = false);

std::vector<Token> tokenize_program(const std::string& text, bool preserve_indices = false);

// KetGPT-style reference tokenizer: one token per stripped non-empty line.
std::vector<Token> line_level_tokenize(const std::string& text);

// Stand-in for a subword baseline: number of non-whitespace characters.
std::size_t char_count_baseline(const std::string& text);

class Vocabulary {
 public:
  int add(const Token& token);  // returns existing id if already present
  std::optional<int> id_of(const Token& token) const;
  const Token& token_of(int id) const;
  std::size_t size() const { return id_to_token_.size(); }

  std::vector<int> encode(const std::vector<Token>& tokens) const;  // throws UnknownGate on OOV
  std::vector<Token> decode(const std::vector<int>& ids) const;

  std::string to_json() const;  // {"token": id, ...} in insertion order
  static Vocabulary from_json(const std::string& text);

 private:
  std::vector<Token> id_to_token_;
  std::map<Token, int> token_to_id_;
};

Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& corpus);

struct CorpusStatsRow {
  int n = 0;
  double compression_ratio = 0.0;
  double sequence_reduction_ratio = 0.0;
  std::size_t vocab_quantum = 0;
  std::size_t vocab_line = 0;
  std::size_t programs = 0;
};

using BaseCounter = std::function<std::size_t(const std::string&)>;

// Per-n means of L_base/L_quantum and (L_base - L_quantum)/L_base, plus
// per-n vocabulary sizes for the quantum-native and line-level tokenizers.
std::vector<CorpusStatsRow> corpus_stats(const std::map<int, std::vector<std::string>>& corpus_by_n,
                                         const BaseCounter& base_counter = {});

std::string stats_csv(const std::vector<CorpusStatsRow>& rows);

}  // namespace grover::tok
