#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grover/errors.hpp"

namespace grover::qasm {

// One qubit operand of a statement. At top level `index` is the concrete
// qubit index and `text` is "q[3]"; inside a gate body `index` is the formal
// slot and `text` the formal name ("_gate_q_3").
struct QubitArg {
  std::string text;
  int index = -1;

  bool operator==(const QubitArg&) const = default;
};

struct GateCall {
  std::string name;
  std::vector<double> params;
  std::vector<QubitArg> qubits;

  bool operator==(const GateCall&) const = default;
};

struct Measure {
  QubitArg qubit;
  QubitArg clbit;

  bool operator==(const Measure&) const = default;
};

struct BarrierLike {
  std::string text;

  bool operator==(const BarrierLike&) const = default;
};

using Statement = std::variant<GateCall, Measure, BarrierLike>;

struct GateDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> formal_qubits;
  std::vector<Statement> body;

  bool operator==(const GateDef&) const = default;
};

struct RegisterDecl {
  std::string name;
  int size = 0;

  bool operator==(const RegisterDecl&) const = default;
};

struct QasmProgram {
  std::string version = "3.0";
  std::vector<std::string> includes;
  std::vector<GateDef> gate_defs;
  std::optional<RegisterDecl> qubit_decl;
  std::optional<RegisterDecl> clbit_decl;
  std::vector<Statement> statements;

  bool operator==(const QasmProgram&) const = default;

  const GateDef* find_def(const std::string& name) const;
};

struct PrimitiveSig {
  int min_qubits;
  int max_qubits;  // -1 = unbounded
  int params;
};

// Primitive gates: h, x, z, cx, cz, mcmt (multi-controlled Z over all
// arguments), mcx (last argument is the target), rz(angle).
std::optional<PrimitiveSig> primitive_signature(const std::string& name);

QasmProgram parse_program(const std::string& text);

std::string print_program(const QasmProgram& program);

// Formats a single statement the way print_program does, without the
// trailing newline ("h q[0];", "cz _gate_q_0, _gate_q_1;", ...).
std::string format_statement(const Statement& stmt);

// Inlines all gate definitions; the result contains only primitive GateCall
// statements on concrete qubit indices. Measure/BarrierLike are dropped.
std::vector<Statement> expand_gate_calls(const QasmProgram& program);

QasmProgram strip_measurements(const QasmProgram& program);

}  // namespace grover::qasm
