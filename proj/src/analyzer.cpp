#include "grover/analyzer.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "grover/metrics.hpp"
#include "json.hpp"

namespace grover::analyzer {

namespace {

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", round_half_even(p, 4));
  return buf;
}

const qasm::GateCall& as_call(const qasm::Statement& s, const char* where) {
  const auto* call = std::get_if<qasm::GateCall>(&s);
  if (!call) throw MalformedOracle(std::string("non-gate statement inside ") + where);
  return *call;
}

}  // namespace

double round_half_even(double value, int digits) {
  static constexpr double kScales[] = {1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};
  const double scale = digits >= 0 && digits <= 9 ? kScales[digits] : std::pow(10.0, digits);
  const int prev = std::fegetround();
  if (prev == FE_TONEAREST) return std::nearbyint(value * scale) / scale;
  std::fesetround(FE_TONEAREST);
  const double rounded = std::nearbyint(value * scale) / scale;
  std::fesetround(prev);
  return rounded;
}

OracleEntity extract_oracle(const qasm::QasmProgram& program) {
  const qasm::GateDef* def = program.find_def("Oracle");
  if (!def && program.gate_defs.size() == 1) def = &program.gate_defs.front();
  if (!def) throw OracleNotFound("no gate definition named 'Oracle'");

  for (const qasm::Statement& s : def->body) {
    const qasm::GateCall& call = as_call(s, "the oracle body");
    if (call.name != "x" && call.name != "mcmt")
      throw MalformedOracle("oracle body contains gate '" + call.name + "'");
  }
  const bool has_mcmt = std::any_of(def->body.begin(), def->body.end(), [](const auto& s) {
    return std::get<qasm::GateCall>(s).name == "mcmt";
  });
  if (!has_mcmt) throw MalformedOracle("oracle body contains no mcmt");

  OracleEntity entity;
  entity.n = static_cast<int>(def->formal_qubits.size());
  entity.statements = def->body;
  return entity;
}

std::vector<MarkBlock> segment_blocks(const OracleEntity& oracle) {
  const int n = oracle.n;
  std::vector<MarkBlock> blocks;

  std::set<int> pre;
  std::vector<std::string> lines;
  std::size_t i = 0;
  const std::size_t size = oracle.statements.size();

  while (i < size) {
    // Collect the pre-X set up to the next mcmt.
    pre.clear();
    lines.clear();
    while (i < size) {
      const qasm::GateCall& call = as_call(oracle.statements[i], "the oracle body");
      if (call.name == "mcmt") break;
      if (call.name != "x" || call.qubits.size() != 1)
        throw MalformedOracle("oracle body contains gate '" + call.name + "'");
      const int q = call.qubits[0].index;
      if (!pre.insert(q).second)
        throw MalformedOracle("qubit " + std::to_string(q) + " flipped twice before mcmt");
      lines.push_back(qasm::format_statement(oracle.statements[i]));
      ++i;
    }
    if (i == size) {
      if (!pre.empty()) throw MalformedOracle("trailing x statements after the last block");
      break;
    }

    MarkBlock block;
    block.pre_x = pre;

    const qasm::GateCall& mcmt = as_call(oracle.statements[i], "the oracle body");
    if (static_cast<int>(mcmt.qubits.size()) != n)
      throw MalformedOracle("mcmt must cover all " + std::to_string(n) + " qubits");
    for (int q = 0; q < n; ++q) {
      if (mcmt.qubits[static_cast<std::size_t>(q)].index != q)
        throw MalformedOracle("mcmt arguments out of order");
      block.mcmt_args.push_back(q);
    }
    lines.push_back(qasm::format_statement(oracle.statements[i]));
    ++i;

    // The mirror x statements must replay pre_x exactly.
    std::set<int> need = block.pre_x;
    while (!need.empty()) {
      if (i >= size) throw MalformedOracle("oracle block is missing mirror x statements");
      const qasm::GateCall& call = as_call(oracle.statements[i], "the oracle body");
      if (call.name != "x" || call.qubits.size() != 1)
        throw MalformedOracle("expected mirror x statement, got '" + call.name + "'");
      const int q = call.qubits[0].index;
      if (need.erase(q) == 0)
        throw MalformedOracle("mirror x on qubit " + std::to_string(q) +
                              " does not match the block's pre-x set");
      block.post_x.insert(q);
      lines.push_back(qasm::format_statement(oracle.statements[i]));
      ++i;
    }
    block.op_lines = lines;
    blocks.push_back(std::move(block));
  }

  if (blocks.empty()) throw MalformedOracle("oracle contains no blocks");
  return blocks;
}

std::vector<QubitStep> construct_steps(const MarkBlock& block, int n) {
  std::vector<QubitStep> steps;
  std::string acc;
  for (int i = 0; i < n; ++i) {
    QubitStep step;
    step.qubit = i;
    step.x_present = block.pre_x.count(i) > 0;
    step.bit = step.x_present ? '0' : '1';
    acc.insert(acc.begin(), step.bit);
    step.acc = acc;
    steps.push_back(std::move(step));
  }
  return steps;
}

std::string infer_marked_state(const MarkBlock& block, int n) {
  const std::vector<QubitStep> steps = construct_steps(block, n);
  return steps.back().acc;
}

double grover_angle(int n, int t) {
  if (n < 1 || n > 62) throw DomainError("qubit count out of range");
  const double N = std::pow(2.0, n);
  if (t < 1 || static_cast<double>(t) >= N)
    throw DomainError("marked count must satisfy 1 <= t < 2^n");
  return std::asin(std::sqrt(static_cast<double>(t) / N));
}

AnalyticParams analytic_params(int n, int t, int k) {
  if (k < 0) throw DomainError("iteration count must be non-negative");
  AnalyticParams params;
  params.theta = grover_angle(n, t);
  params.k = k;
  const double amp = std::sin(static_cast<double>(2 * k + 1) * params.theta);
  params.p_marked_total = amp * amp;
  params.p_marked_each = params.p_marked_total / static_cast<double>(t);
  const double N = std::pow(2.0, n);
  params.p_unmarked_each = (1.0 - params.p_marked_total) / (N - static_cast<double>(t));
  return params;
}

sim::Distribution analytic_distribution(int n, const std::vector<std::string>& marked, int k) {
  circuits::GroverSpec spec{n, marked, k};
  circuits::validate_spec(spec);
  const AnalyticParams params = analytic_params(n, static_cast<int>(marked.size()), k);

  const std::uint64_t N = 1ULL << n;
  std::set<std::uint64_t> marked_values;
  for (const std::string& m : marked) marked_values.insert(circuits::value_of(m));

  sim::Distribution dist;
  dist.n = n;
  dist.entries.reserve(N);
  for (std::uint64_t v = 0; v < N; ++v) {
    const double p = marked_values.count(v) ? params.p_marked_each : params.p_unmarked_each;
    dist.entries.push_back({circuits::bitstring_of(v, n), p});
  }
  sim::canonical_sort(dist);
  return dist;
}

ReasoningTrace analyze(const qasm::QasmProgram& program, circuits::Mode mode) {
  ReasoningTrace trace;

  OracleEntity oracle = extract_oracle(program);
  trace.n = oracle.n;
  if (mode == circuits::Mode::full) {
    if (!program.qubit_decl) throw MalformedOracle("full-mode program has no qubit declaration");
    if (program.qubit_decl->size != oracle.n)
      throw MalformedOracle("oracle arity does not match the qubit register");
    trace.n = program.qubit_decl->size;
  }

  for (const qasm::Statement& s : oracle.statements)
    trace.oracle_lines.push_back(qasm::format_statement(s));

  const std::vector<MarkBlock> blocks = segment_blocks(oracle);
  trace.t = static_cast<int>(blocks.size());

  std::set<std::string> seen;
  for (const MarkBlock& block : blocks) {
    BlockTrace bt;
    bt.op_lines = block.op_lines;
    bt.steps = construct_steps(block, trace.n);
    bt.final_state = bt.steps.back().acc;
    if (!seen.insert(bt.final_state).second)
      throw DuplicateMarkedState("marked state '" + bt.final_state +
                                 "' encoded by more than one block");
    trace.marked_states.push_back(bt.final_state);
    trace.blocks.push_back(std::move(bt));
  }

  if (mode == circuits::Mode::full) {
    // k is read off the circuit: top-level Oracle calls immediately followed
    // by Diffuser. Any unpaired Oracle/Diffuser call is rejected.
    int k = 0;
    const auto& stmts = program.statements;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      const auto* call = std::get_if<qasm::GateCall>(&stmts[i]);
      if (!call) continue;
      if (call->name == "Oracle") {
        const auto* next =
            i + 1 < stmts.size() ? std::get_if<qasm::GateCall>(&stmts[i + 1]) : nullptr;
        if (!next || next->name != "Diffuser")
          throw MalformedOracle("Oracle call not followed by Diffuser");
        ++k;
        ++i;
      } else if (call->name == "Diffuser") {
        throw MalformedOracle("Diffuser call without a preceding Oracle");
      }
    }
    trace.k = k;
  } else {
    trace.k = circuits::optimal_iterations(trace.n, trace.t);
  }

  trace.params = analytic_params(trace.n, trace.t, trace.k);

  sim::Distribution full = analytic_distribution(trace.n, trace.marked_states, trace.k);
  for (sim::DistEntry& e : full.entries) e.p = round_half_even(e.p, 4);
  trace.results = metrics::truncate_topk(full, 30);
  return trace;
}

std::string render_results(const sim::Distribution& results) {
  std::ostringstream out;
  out << "{\n";
  for (const sim::DistEntry& e : results.entries)
    out << " '" << e.bits << "': " << format_prob(e.p) << ",\n";
  if (results.truncated) out << "...\n";
  out << "}";
  return out.str();
}

std::string render_trace(const ReasoningTrace& trace) {
  std::ostringstream out;
  out << "=== Analysis ===\n\n";
  out << "The Oracle entity is extracted below:\n";
  for (const std::string& line : trace.oracle_lines) out << "  " << line << "\n";
  out << "\n";

  for (std::size_t b = 0; b < trace.blocks.size(); ++b) {
    const BlockTrace& block = trace.blocks[b];
    out << "=== Block " << (b + 1) << " ===\n";
    out << "Operation sequence:\n";
    for (const std::string& line : block.op_lines) out << line << "\n";
    out << "State construction:\n";
    for (const QubitStep& step : block.steps) {
      out << "x _gate_q_" << step.qubit << ": " << (step.x_present ? "Present" : "Absent")
          << " → " << step.bit << ", then → " << step.acc << "\n";
    }
    out << "Final state: " << block.final_state << "\n\n";
  }

  out << "=== Final Marked States ===\n";
  for (const std::string& state : trace.marked_states) out << state << "\n";
  out << "\n";

  out << "=== Results ===\n";
  out << render_results(trace.results) << "\n";
  return out.str();
}

std::string trace_to_json(const ReasoningTrace& trace) {
  nlohmann::ordered_json j;
  j["n"] = trace.n;
  j["t"] = trace.t;
  j["k"] = trace.k;
  j["theta"] = trace.params.theta;
  j["oracle"] = trace.oracle_lines;
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const BlockTrace& block : trace.blocks) {
    nlohmann::ordered_json bj;
    bj["ops"] = block.op_lines;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const QubitStep& s : block.steps) {
      steps.push_back({{"qubit", s.qubit},
                       {"present", s.x_present},
                       {"bit", std::string(1, s.bit)},
                       {"acc", s.acc}});
    }
    bj["steps"] = steps;
    bj["final"] = block.final_state;
    blocks.push_back(bj);
  }
  j["blocks"] = blocks;
  j["marked"] = trace.marked_states;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  for (const sim::DistEntry& e : trace.results.entries) results[e.bits] = e.p;
  j["results"] = results;
  j["truncated"] = trace.results.truncated;
  return j.dump(2) + "\n";
}

}  // namespace grover::analyzer
