#pragma once

#include <set>
#include <string>
#include <vector>

#include "grover/circuits.hpp"
#include "grover/qasm.hpp"
#include "grover/simulator.hpp"

namespace grover::analyzer {

// Body of the Oracle definition, formal-qubit form. Only x and mcmt are
// allowed; n is the formal-qubit count.
struct OracleEntity {
  int n = 0;
  std::vector<qasm::Statement> statements;
};

// One (pre-X set, mcmt, post-X set) segment encoding a single marked state.
struct MarkBlock {
  std::set<int> pre_x;
  std::vector<int> mcmt_args;
  std::set<int> post_x;
  std::vector<std::string> op_lines;
};

struct QubitStep {
  int qubit = 0;
  bool x_present = false;
  char bit = '1';
  std::string acc;  // accumulated bitstring after prepending this bit
};

struct AnalyticParams {
  double theta = 0.0;
  int k = 0;
  double p_marked_total = 0.0;
  double p_marked_each = 0.0;
  double p_unmarked_each = 0.0;
};

struct BlockTrace {
  std::vector<std::string> op_lines;
  std::vector<QubitStep> steps;
  std::string final_state;
};

struct ReasoningTrace {
  int n = 0;
  int t = 0;
  int k = 0;
  std::vector<std::string> oracle_lines;
  std::vector<BlockTrace> blocks;
  std::vector<std::string> marked_states;
  AnalyticParams params;
  sim::Distribution results;  // rounded to 4 decimals, sorted, top 30
};

// Finds the definition named "Oracle", or falls back to the sole definition
// of an oracle-only program. MalformedOracle if the body contains anything
// but x/mcmt calls.
OracleEntity extract_oracle(const qasm::QasmProgram& program);

// Splits at each mcmt; the x statements since the previous block form pre_x
// and must be mirrored exactly after the mcmt.
std::vector<MarkBlock> segment_blocks(const OracleEntity& oracle);

// Qubit i gets '0' if i is in pre_x else '1'; bits are prepended, so qubit
// n-1 ends up leftmost.
std::string infer_marked_state(const MarkBlock& block, int n);
std::vector<QubitStep> construct_steps(const MarkBlock& block, int n);

// arcsin(sqrt(t / 2^n))
double grover_angle(int n, int t);

// Each marked state gets sin^2((2k+1)theta)/t, each unmarked
// cos^2((2k+1)theta)/(N-t). Full, unrounded.
sim::Distribution analytic_distribution(int n, const std::vector<std::string>& marked, int k);

AnalyticParams analytic_params(int n, int t, int k);

ReasoningTrace analyze(const qasm::QasmProgram& program, circuits::Mode mode);

// Canonical plain-text rendering of the trace (UTF-8, LF endings).
std::string render_trace(const ReasoningTrace& trace);

std::string trace_to_json(const ReasoningTrace& trace);

double round_half_even(double value, int digits);

// Renders the "=== Results ===" dictionary body alone ({, entries, }).
std::string render_results(const sim::Distribution& results);

}  // namespace grover::analyzer
