#include "grover/qasm.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace grover::qasm {

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

std::string drop_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (!in_string && line[i] == '/' && line[i + 1] == '/') return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = strip(cur);
  if (!last.empty() || !parts.empty()) parts.push_back(last);
  return parts;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

const std::regex kVersionRe(R"(^OPENQASM\s+([0-9.]+);$)");
const std::regex kIncludeRe(R"re(^include\s+"([^"]+)";$)re");
const std::regex kGateOpenRe(R"(^gate\s+(\w+)\s+([^{;]+?)\s*\{$)");
const std::regex kQubitDeclRe(R"(^qubit\[(\d+)\]\s+(\w+);$)");
const std::regex kBitDeclRe(R"(^bit\[(\d+)\]\s+(\w+);$)");
const std::regex kMeasureRe(R"(^(\w+)\[(\d+)\]\s*=\s*measure\s+(\w+)\[(\d+)\];$)");
const std::regex kCallRe(R"(^(\w+)\s*(?:\(([^)]*)\))?\s+([^;]+);$)");
const std::regex kIndexedRefRe(R"(^(\w+)\[(\d+)\]$)");
const std::regex kNameRe(R"(^\w+$)");

class Parser {
 public:
  explicit Parser(const std::string& text) : lines_(split_lines(text)) {}

  QasmProgram run() {
    bool saw_version = false;

    for (line_no_ = 1; line_no_ <= static_cast<int>(lines_.size()); ++line_no_) {
      const std::string raw = drop_comment(lines_[line_no_ - 1]);
      const std::string line = strip(raw);
      if (line.empty()) continue;

      if (!saw_version) {
        std::smatch m;
        if (!std::regex_match(line, m, kVersionRe))
          fail("expected version header 'OPENQASM <version>;'");
        program_.version = m[1];
        saw_version = true;
        continue;
      }

      if (in_def_) {
        parse_body_line(line);
        continue;
      }

      std::smatch m;
      if (std::regex_match(line, m, kIncludeRe)) {
        program_.includes.push_back(m[1]);
      } else if (std::regex_match(line, m, kGateOpenRe)) {
        open_gate(m[1], m[2]);
      } else if (std::regex_match(line, m, kQubitDeclRe)) {
        if (program_.qubit_decl) fail("duplicate qubit declaration");
        program_.qubit_decl = RegisterDecl{m[2], std::stoi(m[1])};
      } else if (std::regex_match(line, m, kBitDeclRe)) {
        if (program_.clbit_decl) fail("duplicate bit declaration");
        program_.clbit_decl = RegisterDecl{m[2], std::stoi(m[1])};
      } else if (std::regex_match(line, m, kMeasureRe)) {
        program_.statements.push_back(parse_measure(m));
      } else if (std::regex_match(line, m, kCallRe)) {
        program_.statements.push_back(parse_call(m, nullptr));
      } else {
        fail("unrecognized statement '" + line + "'");
      }
    }

    if (in_def_) fail("unterminated gate definition '" + def_.name + "'");
    return program_;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int column = 1) const {
    throw SyntaxError(line_no_, column, msg);
  }

  // Definitions may shadow primitives (the 2-qubit circuits define a `mcmt`
  // wrapper around cz); calls resolve to the definition from then on.
  void open_gate(const std::string& name, const std::string& formals_text) {
    if (program_.find_def(name)) fail("redefinition of gate '" + name + "'");
    def_ = GateDef{};
    def_.name = name;
    for (const std::string& f : split_commas(formals_text)) {
      if (!std::regex_match(f, kNameRe)) fail("bad formal qubit name '" + f + "'");
      if (std::count(def_.formal_qubits.begin(), def_.formal_qubits.end(), f) > 0)
        fail("duplicate formal qubit '" + f + "'");
      def_.formal_qubits.push_back(f);
    }
    if (def_.formal_qubits.empty()) fail("gate definition with no qubits");
    in_def_ = true;
  }

  void parse_body_line(const std::string& line) {
    if (line == "}") {
      program_.gate_defs.push_back(def_);
      in_def_ = false;
      return;
    }
    std::smatch m;
    if (std::regex_match(line, m, kMeasureRe)) fail("measurement inside a gate body");
    if (!std::regex_match(line, m, kCallRe)) fail("unrecognized statement '" + line + "'");
    def_.body.push_back(parse_call(m, &def_));
  }

  Statement parse_measure(const std::smatch& m) {
    if (!program_.clbit_decl) fail("measurement before bit declaration");
    if (!program_.qubit_decl) fail("measurement before qubit declaration");
    const std::string cname = m[1], qname = m[3];
    const int ci = std::stoi(m[2]), qi = std::stoi(m[4]);
    if (cname != program_.clbit_decl->name) fail("unknown bit register '" + cname + "'");
    if (qname != program_.qubit_decl->name) fail("unknown qubit register '" + qname + "'");
    if (ci < 0 || ci >= program_.clbit_decl->size) fail("bit index out of range");
    if (qi < 0 || qi >= program_.qubit_decl->size) fail("qubit index out of range");
    Measure mst;
    mst.clbit = QubitArg{cname + "[" + std::to_string(ci) + "]", ci};
    mst.qubit = QubitArg{qname + "[" + std::to_string(qi) + "]", qi};
    return mst;
  }

  // def == nullptr at top level; inside a body, operands are formal names.
  Statement parse_call(const std::smatch& m, const GateDef* def) {
    GateCall call;
    call.name = m[1];
    if (m[2].matched) {
      for (const std::string& p : split_commas(m[2])) {
        try {
          std::size_t used = 0;
          call.params.push_back(std::stod(p, &used));
          if (used != p.size()) fail("bad parameter '" + p + "'");
        } catch (const std::logic_error&) {
          fail("bad parameter '" + p + "'");
        }
      }
    }
    for (const std::string& ref : split_commas(m[3])) {
      call.qubits.push_back(parse_ref(ref, def));
    }
    check_call(call, def);
    return call;
  }

  QubitArg parse_ref(const std::string& ref, const GateDef* def) {
    std::smatch m;
    if (def) {
      if (!std::regex_match(ref, kNameRe)) fail("bad qubit reference '" + ref + "' in gate body");
      const auto it = std::find(def->formal_qubits.begin(), def->formal_qubits.end(), ref);
      if (it == def->formal_qubits.end())
        fail("body references undeclared formal qubit '" + ref + "'");
      return QubitArg{ref, static_cast<int>(it - def->formal_qubits.begin())};
    }
    if (!std::regex_match(ref, m, kIndexedRefRe)) fail("bad qubit reference '" + ref + "'");
    if (!program_.qubit_decl) fail("statement before qubit declaration");
    if (m[1] != program_.qubit_decl->name) fail("unknown qubit register '" + std::string(m[1]) + "'");
    const int idx = std::stoi(m[2]);
    if (idx < 0 || idx >= program_.qubit_decl->size) fail("qubit index out of range");
    return QubitArg{ref, idx};
  }

  void check_call(const GateCall& call, const GateDef* enclosing) {
    std::set<int> seen;
    for (const QubitArg& q : call.qubits) {
      if (!seen.insert(q.index).second)
        fail("repeated qubit operand in call to '" + call.name + "'");
    }

    // Definitions shadow primitives from their point of definition onward;
    // inside a body only earlier definitions are visible (DAG by construction).
    const GateDef* target = nullptr;
    for (const GateDef& d : program_.gate_defs) {
      if (d.name == call.name) target = &d;
    }
    (void)enclosing;
    if (target) {
      if (!call.params.empty())
        throw ArityMismatch("line " + std::to_string(line_no_) + ": gate '" + call.name +
                            "' takes no parameters");
      if (call.qubits.size() != target->formal_qubits.size())
        throw ArityMismatch("line " + std::to_string(line_no_) + ": gate '" + call.name +
                            "' expects " + std::to_string(target->formal_qubits.size()) +
                            " qubits, got " + std::to_string(call.qubits.size()));
      return;
    }
    const auto sig = primitive_signature(call.name);
    if (!sig)
      throw UnknownGate("line " + std::to_string(line_no_) + ": unknown gate '" + call.name + "'");
    const int nq = static_cast<int>(call.qubits.size());
    if (nq < sig->min_qubits || (sig->max_qubits >= 0 && nq > sig->max_qubits))
      throw ArityMismatch("line " + std::to_string(line_no_) + ": gate '" + call.name +
                          "' applied to " + std::to_string(nq) + " qubits");
    if (static_cast<int>(call.params.size()) != sig->params)
      throw ArityMismatch("line " + std::to_string(line_no_) + ": gate '" + call.name +
                          "' expects " + std::to_string(sig->params) + " parameter(s)");
  }

  std::vector<std::string> lines_;
  int line_no_ = 0;
  QasmProgram program_;
  GateDef def_;
  bool in_def_ = false;
};

void print_statement(std::ostringstream& out, const Statement& stmt, const char* indent) {
  out << indent << format_statement(stmt) << "\n";
}

struct Expander {
  const QasmProgram& program;
  std::map<std::string, const GateDef*> defs;
  std::set<std::string> in_progress;
  std::vector<Statement> out;

  explicit Expander(const QasmProgram& p) : program(p) {
    for (const GateDef& d : p.gate_defs) defs[d.name] = &d;
  }

  // bindings: formal slot -> concrete qubit index. Null at top level.
  void expand_statement(const Statement& stmt, const std::vector<int>* bindings) {
    const auto* call = std::get_if<GateCall>(&stmt);
    if (!call) return;  // measures and barriers are dropped

    GateCall concrete = *call;
    for (QubitArg& q : concrete.qubits) {
      if (bindings) q.index = (*bindings)[q.index];
      q.text = "q[" + std::to_string(q.index) + "]";
    }

    const auto it = defs.find(concrete.name);
    if (it == defs.end()) {
      if (!primitive_signature(concrete.name))
        throw UnknownGate("unknown gate '" + concrete.name + "'");
      out.push_back(concrete);
      return;
    }

    const GateDef& def = *it->second;
    if (!in_progress.insert(def.name).second)
      throw RecursionDetected("recursive gate definition '" + def.name + "'");
    std::vector<int> inner(def.formal_qubits.size());
    for (std::size_t i = 0; i < inner.size(); ++i) inner[i] = concrete.qubits[i].index;
    for (const Statement& s : def.body) expand_statement(s, &inner);
    in_progress.erase(def.name);
  }
};

}  // namespace

const GateDef* QasmProgram::find_def(const std::string& name) const {
  for (const GateDef& d : gate_defs)
    if (d.name == name) return &d;
  return nullptr;
}

std::optional<PrimitiveSig> primitive_signature(const std::string& name) {
  if (name == "h" || name == "x" || name == "z") return PrimitiveSig{1, 1, 0};
  if (name == "cx" || name == "cz") return PrimitiveSig{2, 2, 0};
  if (name == "mcmt") return PrimitiveSig{1, -1, 0};
  if (name == "mcx") return PrimitiveSig{2, -1, 0};
  if (name == "rz") return PrimitiveSig{1, 1, 1};
  return std::nullopt;
}

QasmProgram parse_program(const std::string& text) { return Parser(text).run(); }

std::string format_statement(const Statement& stmt) {
  std::ostringstream out;
  if (const auto* call = std::get_if<GateCall>(&stmt)) {
    out << call->name;
    if (!call->params.empty()) {
      out << "(";
      for (std::size_t i = 0; i < call->params.size(); ++i) {
        if (i) out << ", ";
        out << format_double(call->params[i]);
      }
      out << ")";
    }
    out << " ";
    for (std::size_t i = 0; i < call->qubits.size(); ++i) {
      if (i) out << ", ";
      out << call->qubits[i].text;
    }
    out << ";";
  } else if (const auto* m = std::get_if<Measure>(&stmt)) {
    out << m->clbit.text << " = measure " << m->qubit.text << ";";
  } else {
    out << std::get<BarrierLike>(stmt).text << ";";
  }
  return out.str();
}

std::string print_program(const QasmProgram& program) {
  std::ostringstream out;
  out << "OPENQASM " << program.version << ";\n";
  for (const std::string& inc : program.includes) out << "include \"" << inc << "\";\n";
  out << "\n";
  for (const GateDef& def : program.gate_defs) {
    out << "gate " << def.name << " ";
    for (std::size_t i = 0; i < def.formal_qubits.size(); ++i) {
      if (i) out << ", ";
      out << def.formal_qubits[i];
    }
    out << " {\n";
    for (const Statement& s : def.body) print_statement(out, s, "  ");
    out << "}\n";
  }
  if (program.clbit_decl)
    out << "bit[" << program.clbit_decl->size << "] " << program.clbit_decl->name << ";\n";
  if (program.qubit_decl)
    out << "qubit[" << program.qubit_decl->size << "] " << program.qubit_decl->name << ";\n";
  for (const Statement& s : program.statements) print_statement(out, s, "");
  return out.str();
}

std::vector<Statement> expand_gate_calls(const QasmProgram& program) {
  Expander ex(program);
  for (const Statement& s : program.statements) ex.expand_statement(s, nullptr);
  return std::move(ex.out);
}

QasmProgram strip_measurements(const QasmProgram& program) {
  QasmProgram out = program;
  out.statements.clear();
  for (const Statement& s : program.statements)
    if (!std::holds_alternative<Measure>(s)) out.statements.push_back(s);
  return out;
}

}  // namespace grover::qasm
