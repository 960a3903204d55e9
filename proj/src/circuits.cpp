#include "grover/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "grover/rng.hpp"

namespace grover::circuits {

namespace {

std::string formal_name(int i) { return "_gate_q_" + std::to_string(i); }

qasm::QubitArg formal_arg(int i) { return {formal_name(i), i}; }

qasm::QubitArg register_arg(int i) { return {"q[" + std::to_string(i) + "]", i}; }

qasm::GateCall call_on_formals(const std::string& name, const std::vector<int>& qubits) {
  qasm::GateCall c;
  c.name = name;
  for (int q : qubits) c.qubits.push_back(formal_arg(q));
  return c;
}

qasm::GateCall call_on_register(const std::string& name, int n) {
  qasm::GateCall c;
  c.name = name;
  for (int i = 0; i < n; ++i) c.qubits.push_back(register_arg(i));
  return c;
}

// The 2-qubit circuits wrap the primitive in a named definition so the
// emitted text matches the canonical listing; larger circuits call the
// primitive directly.
qasm::GateDef mcmt_wrapper_def() {
  qasm::GateDef def;
  def.name = "mcmt";
  def.formal_qubits = {formal_name(0), formal_name(1)};
  def.body.push_back(call_on_formals("cz", {0, 1}));
  return def;
}

}  // namespace

Mode mode_from_string(const std::string& s) {
  if (s == "full") return Mode::full;
  if (s == "oracle_only" || s == "oracle-only") return Mode::oracle_only;
  throw DomainError("unknown mode '" + s + "'");
}

std::string to_string(Mode mode) { return mode == Mode::full ? "full" : "oracle_only"; }

void validate_spec(const GroverSpec& spec) {
  if (spec.n < 2) throw DomainError("qubit count must be at least 2");
  if (spec.n > 62) throw DomainError("qubit count too large");
  if (spec.k < 0) throw DomainError("iteration count must be non-negative");
  const std::uint64_t N = 1ULL << spec.n;
  if (spec.marked.empty()) throw InvalidMarkedState("marked set is empty");
  if (spec.marked.size() >= N) throw InvalidMarkedState("marked set covers every basis state");
  std::set<std::string> seen;
  for (const std::string& s : spec.marked) {
    if (static_cast<int>(s.size()) != spec.n)
      throw InvalidMarkedState("marked state '" + s + "' does not have length " +
                               std::to_string(spec.n));
    for (char c : s)
      if (c != '0' && c != '1')
        throw InvalidMarkedState("marked state '" + s + "' is not a bitstring");
    if (!seen.insert(s).second) throw InvalidMarkedState("duplicate marked state '" + s + "'");
  }
}

std::string bitstring_of(std::uint64_t value, int n) {
  std::string bits(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (value >> i & 1ULL) bits[static_cast<std::size_t>(n - 1 - i)] = '1';
  return bits;
}

std::uint64_t value_of(const std::string& bits) {
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

qasm::GateDef create_oracle(int n, const std::vector<std::string>& marked) {
  GroverSpec probe{n, marked, 0};
  validate_spec(probe);

  qasm::GateDef def;
  def.name = "Oracle";
  for (int i = 0; i < n; ++i) def.formal_qubits.push_back(formal_name(i));

  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;

  for (const std::string& target : marked) {
    std::string reversed(target.rbegin(), target.rend());
    std::vector<int> zero_inds;
    for (int i = 0; i < n; ++i)
      if (reversed[static_cast<std::size_t>(i)] == '0') zero_inds.push_back(i);

    for (int q : zero_inds) def.body.push_back(call_on_formals("x", {q}));
    def.body.push_back(call_on_formals("mcmt", all));
    for (int q : zero_inds) def.body.push_back(call_on_formals("x", {q}));
  }
  return def;
}

qasm::GateDef create_diffuser(int n) {
  if (n < 2) throw DomainError("diffuser needs at least 2 qubits");

  qasm::GateDef def;
  def.name = "Diffuser";
  for (int i = 0; i < n; ++i) def.formal_qubits.push_back(formal_name(i));

  for (int i = 0; i < n; ++i) def.body.push_back(call_on_formals("h", {i}));
  for (int i = 0; i < n; ++i) def.body.push_back(call_on_formals("x", {i}));
  def.body.push_back(call_on_formals("h", {n - 1}));
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  def.body.push_back(call_on_formals(n == 2 ? "cx" : "mcx", all));
  def.body.push_back(call_on_formals("h", {n - 1}));
  for (int i = 0; i < n; ++i) def.body.push_back(call_on_formals("x", {i}));
  for (int i = 0; i < n; ++i) def.body.push_back(call_on_formals("h", {i}));
  return def;
}

int optimal_iterations(int n, int t) {
  if (n < 1 || n > 62) throw DomainError("qubit count out of range");
  const std::uint64_t N = 1ULL << n;
  if (t < 1 || static_cast<std::uint64_t>(t) >= N)
    throw DomainError("marked count must satisfy 1 <= t < 2^n");
  const double ratio = static_cast<double>(N) / static_cast<double>(t);
  return static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(ratio)));
}

qasm::QasmProgram build_grover(const GroverSpec& spec, Mode mode) {
  validate_spec(spec);

  qasm::QasmProgram program;
  program.version = "3.0";
  program.includes = {"stdgates.inc"};

  if (spec.n == 2) program.gate_defs.push_back(mcmt_wrapper_def());
  program.gate_defs.push_back(create_oracle(spec.n, spec.marked));

  if (mode == Mode::oracle_only) return program;

  program.gate_defs.push_back(create_diffuser(spec.n));
  program.clbit_decl = qasm::RegisterDecl{"c", spec.n};
  program.qubit_decl = qasm::RegisterDecl{"q", spec.n};

  for (int i = 0; i < spec.n; ++i) {
    qasm::GateCall h;
    h.name = "h";
    h.qubits.push_back(register_arg(i));
    program.statements.push_back(h);
  }
  for (int rep = 0; rep < spec.k; ++rep) {
    program.statements.push_back(call_on_register("Oracle", spec.n));
    program.statements.push_back(call_on_register("Diffuser", spec.n));
  }
  for (int i = 0; i < spec.n; ++i) {
    qasm::Measure m;
    m.clbit = {"c[" + std::to_string(i) + "]", i};
    m.qubit = register_arg(i);
    program.statements.push_back(m);
  }
  return program;
}

std::uint64_t subset_count(int n, int t) {
  if (n < 1 || n > 62 || t < 0) throw DomainError("bad subset parameters");
  const std::uint64_t N = 1ULL << n;
  if (static_cast<std::uint64_t>(t) > N) return 0;
  // C(N, t) for t <= 3 stays far below 2^64 for n <= 62 only when t is
  // small; saturate on overflow to keep the comparison meaningful.
  long double acc = 1.0L;
  for (int i = 0; i < t; ++i)
    acc = acc * static_cast<long double>(N - static_cast<std::uint64_t>(i)) /
          static_cast<long double>(i + 1);
  if (acc >= static_cast<long double>(UINT64_MAX)) return UINT64_MAX;
  return static_cast<std::uint64_t>(acc);
}

std::vector<GroverSpec> sample_specs(int n, int t, std::size_t count, std::uint64_t seed,
                                     std::optional<int> t_cap) {
  if (n < 2) throw DomainError("qubit count must be at least 2");
  const int cap = t_cap.value_or(std::min(n, 3));
  if (t < 1 || t > cap)
    throw DomainError("marked count " + std::to_string(t) + " exceeds the cap " +
                      std::to_string(cap));
  const std::uint64_t N = 1ULL << n;
  if (static_cast<std::uint64_t>(t) >= N) throw DomainError("marked count must be below 2^n");
  const std::uint64_t total = subset_count(n, t);
  if (count > total)
    throw DomainError("requested " + std::to_string(count) + " samples but only " +
                      std::to_string(total) + " distinct marked sets exist");

  rng::Prng prng(seed);
  const int k = optimal_iterations(n, t);

  std::set<std::vector<std::uint64_t>> seen;
  std::vector<GroverSpec> specs;
  specs.reserve(count);
  while (specs.size() < count) {
    // Floyd's algorithm: uniform t-subset of [0, N).
    std::set<std::uint64_t> subset;
    for (std::uint64_t j = N - static_cast<std::uint64_t>(t); j < N; ++j) {
      const std::uint64_t r = prng.uniform_below(j + 1);
      if (!subset.insert(r).second) subset.insert(j);
    }
    std::vector<std::uint64_t> values(subset.begin(), subset.end());
    if (!seen.insert(values).second) continue;

    GroverSpec spec;
    spec.n = n;
    spec.k = k;
    for (std::uint64_t v : values) spec.marked.push_back(bitstring_of(v, n));
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace grover::circuits
