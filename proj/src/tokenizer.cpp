#include "grover/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace grover::tok {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

const std::regex kGateDefRe(R"(gate\s+(\w+)(?:\s*\((.*?)\))?\s+([^{]+)\s*\{)");
const std::regex kOpRe(R"((\w+)(?:\((.*?)\))?\s+([^;]+);)");
const std::regex kSuffixRe(R"(^(_gate_q_|unitary_|mcx_vchain_)\d+$)");
const std::regex kDeclRe(R"((qubit\[\d+\]|bit\[\d+\])\s+(\w+);)");
const std::regex kMeasureRe(R"((\w+\[\d+\])\s*=\s*measure\s+(\w+\[\d+\]);)");

std::vector<std::string> split_strip_commas(const std::string& s, bool drop_empty) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const std::string piece = strip(cur);
    if (!piece.empty() || !drop_empty) out.push_back(piece);
    cur.clear();
  };
  for (char c : s) {
    if (c == ',')
      flush();
    else
      cur.push_back(c);
  }
  flush();
  return out;
}

void strip_suffixes(std::vector<Token>& tokens, bool preserve_indices) {
  if (preserve_indices) return;
  for (Token& t : tokens) t = std::regex_replace(t, kSuffixRe, "$1");
}

}  // namespace

std::vector<Token> tokenize_line(const std::string& raw, bool preserve_indices) {
  const std::string command = strip(raw);
  if (command.empty()) return {};

  std::smatch m;

  if (command.rfind("gate", 0) == 0) {
    if (!std::regex_search(command, m, kGateDefRe, std::regex_constants::match_continuous))
      throw SyntaxError(1, 1, "Invalid gate definition: " + command);
    std::vector<Token> tokens = {"gate", m[1]};
    for (const std::string& p : split_strip_commas(m[2], true)) tokens.push_back(p);
    for (const std::string& q : split_strip_commas(m[3], true)) tokens.push_back(q);
    tokens.push_back("{");
    strip_suffixes(tokens, preserve_indices);
    return tokens;
  }

  if (std::regex_search(command, m, kOpRe, std::regex_constants::match_continuous)) {
    std::vector<Token> tokens = {m[1]};
    if (m[2].matched && m[2].length() > 0) {
      tokens.push_back("(");
      for (const std::string& p : split_strip_commas(m[2], false)) tokens.push_back(p);
      tokens.push_back(")");
    }
    for (const std::string& t : split_strip_commas(m[3], false)) tokens.push_back(t);
    std::erase_if(tokens, [](const Token& t) { return t.empty(); });
    strip_suffixes(tokens, preserve_indices);
    return tokens;
  }

  if (command == "}") return {"}"};

  // Register declarations and measurements fall through the rules above;
  // they appear in every full-mode program, so two extra cascade steps
  // accept them. Everything else stays an error.
  if (std::regex_match(command, m, kDeclRe)) {
    std::vector<Token> tokens = {m[1], m[2]};
    strip_suffixes(tokens, preserve_indices);
    return tokens;
  }
  if (std::regex_match(command, m, kMeasureRe)) {
    std::vector<Token> tokens = {m[1], "=", "measure", m[2]};
    strip_suffixes(tokens, preserve_indices);
    return tokens;
  }

  throw SyntaxError(1, 1, "Unrecognized command: " + command);
}

std::vector<Token> tokenize_program(const std::string& text, bool preserve_indices) {
  std::vector<Token> out;
  const std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      std::vector<Token> toks = tokenize_line(lines[i], preserve_indices);
      out.insert(out.end(), std::make_move_iterator(toks.begin()),
                 std::make_move_iterator(toks.end()));
    } catch (const SyntaxError& e) {
      throw SyntaxError(static_cast<int>(i + 1), e.column(),
                        std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
  }
  return out;
}

std::vector<Token> line_level_tokenize(const std::string& text) {
  std::vector<Token> out;
  for (const std::string& line : split_lines(text)) {
    const std::string stripped = strip(line);
    if (!stripped.empty()) out.push_back(stripped);
  }
  return out;
}

std::size_t char_count_baseline(const std::string& text) {
  std::size_t count = 0;
  for (unsigned char c : text)
    if (!std::isspace(c)) ++count;
  return count;
}

int Vocabulary::add(const Token& token) {
  const auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  const int id = static_cast<int>(id_to_token_.size());
  id_to_token_.push_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

std::optional<int> Vocabulary::id_of(const Token& token) const {
  const auto it = token_to_id_.find(token);
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

const Token& Vocabulary::token_of(int id) const {
  if (id < 0 || id >= static_cast<int>(id_to_token_.size()))
    throw DomainError("token id out of range: " + std::to_string(id));
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<Token>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const Token& t : tokens) {
    const auto id = id_of(t);
    if (!id) throw UnknownGate("token not in vocabulary: '" + t + "'");
    ids.push_back(*id);
  }
  return ids;
}

std::vector<Token> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<Token> tokens;
  tokens.reserve(ids.size());
  for (int id : ids) tokens.push_back(token_of(id));
  return tokens;
}

std::string Vocabulary::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) j[id_to_token_[i]] = i;
  return j.dump(2) + "\n";
}

Vocabulary Vocabulary::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<std::pair<int, Token>> pairs;
  for (const auto& [token, id] : j.items()) pairs.emplace_back(id.get<int>(), token);
  std::sort(pairs.begin(), pairs.end());
  Vocabulary v;
  for (const auto& [id, token] : pairs) {
    if (v.add(token) != id) throw DomainError("vocabulary ids are not dense from 0");
  }
  return v;
}

Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& corpus) {
  Vocabulary v;
  for (const auto& tokens : corpus)
    for (const Token& t : tokens) v.add(t);
  return v;
}

std::vector<CorpusStatsRow> corpus_stats(const std::map<int, std::vector<std::string>>& corpus_by_n,
                                         const BaseCounter& base_counter) {
  const BaseCounter base = base_counter ? base_counter : BaseCounter(char_count_baseline);
  std::vector<CorpusStatsRow> rows;
  for (const auto& [n, programs] : corpus_by_n) {
    CorpusStatsRow row;
    row.n = n;
    row.programs = programs.size();
    Vocabulary vq, vl;
    double cr_sum = 0.0, srr_sum = 0.0;
    for (const std::string& text : programs) {
      const std::vector<Token> quantum = tokenize_program(text);
      const std::vector<Token> lines = line_level_tokenize(text);
      const double l_base = static_cast<double>(base(text));
      const double l_quantum = static_cast<double>(quantum.size());
      if (l_quantum == 0.0) throw DomainError("program tokenizes to zero tokens");
      cr_sum += l_base / l_quantum;
      srr_sum += (l_base - l_quantum) / l_base;
      for (const Token& t : quantum) vq.add(t);
      for (const Token& t : lines) vl.add(t);
    }
    if (!programs.empty()) {
      cr_sum /= static_cast<double>(programs.size());
      srr_sum /= static_cast<double>(programs.size());
    }
    row.compression_ratio = cr_sum;
    row.sequence_reduction_ratio = srr_sum;
    row.vocab_quantum = vq.size();
    row.vocab_line = vl.size();
    rows.push_back(row);
  }
  return rows;
}

std::string stats_csv(const std::vector<CorpusStatsRow>& rows) {
  std::ostringstream out;
  out << "n,compression_ratio,sequence_reduction_ratio,vocab_quantum,vocab_line\n";
  char buf[128];
  for (const CorpusStatsRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%zu,%zu\n", r.n, r.compression_ratio,
                  r.sequence_reduction_ratio, r.vocab_quantum, r.vocab_line);
    out << buf;
  }
  return out.str();
}

}  // namespace grover::tok
