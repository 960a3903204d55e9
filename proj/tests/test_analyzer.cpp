#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "grover/analyzer.hpp"
#include "grover/circuits.hpp"
#include "grover/qasm.hpp"
#include "grover/simulator.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace grover;
using circuits::GroverSpec;
using circuits::Mode;

namespace {

const std::string kTrace4 = R"(=== Analysis ===

The Oracle entity is extracted below:
  x _gate_q_3;
  mcmt _gate_q_0, _gate_q_1, _gate_q_2, _gate_q_3;
  x _gate_q_3;
  x _gate_q_1;
  mcmt _gate_q_0, _gate_q_1, _gate_q_2, _gate_q_3;
  x _gate_q_1;

=== Block 1 ===
Operation sequence:
x _gate_q_3;
mcmt _gate_q_0, _gate_q_1, _gate_q_2, _gate_q_3;
x _gate_q_3;
State construction:
x _gate_q_0: Absent → 1, then → 1
x _gate_q_1: Absent → 1, then → 11
x _gate_q_2: Absent → 1, then → 111
x _gate_q_3: Present → 0, then → 0111
Final state: 0111

=== Block 2 ===
Operation sequence:
x _gate_q_1;
mcmt _gate_q_0, _gate_q_1, _gate_q_2, _gate_q_3;
x _gate_q_1;
State construction:
x _gate_q_0: Absent → 1, then → 1
x _gate_q_1: Present → 0, then → 01
x _gate_q_2: Absent → 1, then → 101
x _gate_q_3: Absent → 1, then → 1101
Final state: 1101

=== Final Marked States ===
0111
1101

=== Results ===
{
 '0111': 0.4727,
 '1101': 0.4727,
 '0000': 0.0039,
 '0001': 0.0039,
 '0010': 0.0039,
 '0011': 0.0039,
 '0100': 0.0039,
 '0101': 0.0039,
 '0110': 0.0039,
 '1000': 0.0039,
 '1001': 0.0039,
 '1010': 0.0039,
 '1011': 0.0039,
 '1100': 0.0039,
 '1110': 0.0039,
 '1111': 0.0039,
}
)";

qasm::QasmProgram oracle_only_program(const GroverSpec& spec) {
  return circuits::build_grover(spec, Mode::oracle_only);
}

analyzer::OracleEntity entity_of(const qasm::QasmProgram& p) {
  return analyzer::extract_oracle(p);
}

}  // namespace

TEST_CASE("reference four-qubit trace renders byte for byte") {
  const GroverSpec spec{4, {"0111", "1101"}, 2};
  const auto program = circuits::build_grover(spec, Mode::full);
  const auto trace = analyzer::analyze(program, Mode::full);
  CHECK(analyzer::render_trace(trace) == kTrace4);
  CHECK(analyzer::render_trace(trace) == analyzer::render_trace(trace));
}

TEST_CASE("analysis recovers the spec from the full circuit") {
  const GroverSpec spec{4, {"0111", "1101"}, 2};
  const auto program = circuits::build_grover(spec, Mode::full);
  const auto trace = analyzer::analyze(program, Mode::full);
  CHECK(trace.n == 4);
  CHECK(trace.t == 2);
  CHECK(trace.k == 2);
  CHECK(trace.marked_states == std::vector<std::string>{"0111", "1101"});
  CHECK(trace.blocks.size() == 2);
  CHECK(trace.blocks[0].final_state == "0111");
  CHECK(trace.blocks[1].final_state == "1101");
  CHECK(trace.params.p_marked_each == doctest::Approx(0.47265625).epsilon(1e-12));
  CHECK(trace.params.p_unmarked_each == doctest::Approx(0.00390625).epsilon(1e-12));
}

TEST_CASE("oracle-only analysis uses the analytically optimal iteration count") {
  const GroverSpec spec{3, {"110"}, circuits::optimal_iterations(3, 1)};
  const auto program = oracle_only_program(spec);
  const auto trace = analyzer::analyze(program, Mode::oracle_only);
  CHECK(trace.n == 3);
  CHECK(trace.k == 2);
  CHECK(trace.marked_states == std::vector<std::string>{"110"});
  CHECK(trace.params.p_marked_total == doctest::Approx(0.9453125).epsilon(1e-12));
}

TEST_CASE("grover angle matches the closed form") {
  CHECK(analyzer::grover_angle(2, 1) == doctest::Approx(std::numbers::pi / 6).epsilon(1e-15));
  CHECK(analyzer::grover_angle(2, 2) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(analyzer::grover_angle(4, 2) == doctest::Approx(0.3613671239067838).epsilon(1e-12));
  CHECK_THROWS_AS(analyzer::grover_angle(2, 0), DomainError);
  CHECK_THROWS_AS(analyzer::grover_angle(2, 5), DomainError);
}

TEST_CASE("analytic distribution reproduces the frozen reference values") {
  const auto d21 = analyzer::analytic_distribution(2, {"00"}, 1);
  CHECK(d21.prob_of("00") == doctest::Approx(1.0).epsilon(1e-15));

  const auto d31 = analyzer::analytic_distribution(3, {"101"}, 2);
  CHECK(d31.prob_of("101") == doctest::Approx(0.9453125).epsilon(1e-12));

  const auto d42 = analyzer::analytic_distribution(4, {"0111", "1101"}, 2);
  CHECK(d42.prob_of("0111") == doctest::Approx(0.47265625).epsilon(1e-12));
  CHECK(d42.prob_of("0000") == doctest::Approx(0.00390625).epsilon(1e-12));
  CHECK(d42.entries.size() == 16);
  CHECK(d42.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic distribution equals state-vector simulation") {
  for (int n = 2; n <= 6; ++n) {
    for (int t = 1; t <= std::min(n, 3); ++t) {
      const auto count = std::min<std::uint64_t>(3, circuits::subset_count(n, t));
      for (const auto& spec : circuits::sample_specs(n, t, count, 50 * n + t)) {
        const auto program = circuits::build_grover(spec, Mode::full);
        const auto sv = sim::sv_simulate(program).second;
        const auto an = analyzer::analytic_distribution(spec.n, spec.marked, spec.k);
        CHECK(sim::total_variation(sv, an) < 1e-9);
      }
    }
  }
}

TEST_CASE("analytic parameters flag degenerate configurations") {
  const auto p22 = analyzer::analytic_params(2, 2, 1);
  CHECK(p22.p_marked_each == doctest::Approx(0.25).epsilon(1e-12));
  const auto p33 = analyzer::analytic_params(3, 3, 1);
  CHECK(p33.p_marked_each == doctest::Approx(0.28125).epsilon(1e-12));
  const auto p21 = analyzer::analytic_params(2, 1, 1);
  CHECK(p21.p_marked_each == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle extraction finds the Oracle definition") {
  const auto program = qasm::parse_program(testutil::kGolden2);
  const auto oracle = entity_of(program);
  CHECK(oracle.n == 2);
  CHECK(oracle.statements.size() == 5);
}

TEST_CASE("oracle extraction falls back to a sole definition") {
  qasm::QasmProgram p;
  auto def = circuits::create_oracle(3, {"010"});
  def.name = "Mystery";
  p.gate_defs.push_back(def);
  const auto oracle = entity_of(p);
  CHECK(oracle.n == 3);

  qasm::QasmProgram empty;
  CHECK_THROWS_AS(entity_of(empty), OracleNotFound);
}

TEST_CASE("block segmentation splits at each mcmt") {
  const auto program = oracle_only_program(GroverSpec{4, {"0111", "1101"}, 2});
  const auto blocks = analyzer::segment_blocks(entity_of(program));
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].pre_x == std::set<int>{3});
  CHECK(blocks[1].pre_x == std::set<int>{1});
  CHECK(blocks[0].mcmt_args == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("bare mcmt forms a block with empty x sets") {
  const auto program = oracle_only_program(GroverSpec{3, {"111"}, 1});
  const auto blocks = analyzer::segment_blocks(entity_of(program));
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].pre_x.empty());
  CHECK(analyzer::infer_marked_state(blocks[0], 3) == "111");
}

TEST_CASE("marked-state inference prepends bits qubit by qubit") {
  analyzer::MarkBlock block;
  block.pre_x = {3};
  CHECK(analyzer::infer_marked_state(block, 4) == "0111");
  block.pre_x = {1};
  CHECK(analyzer::infer_marked_state(block, 4) == "1101");

  const auto steps = analyzer::construct_steps(block, 4);
  REQUIRE(steps.size() == 4);
  CHECK(steps[0].acc == "1");
  CHECK(steps[1].acc == "01");
  CHECK(steps[1].x_present);
  CHECK(steps[3].acc == "1101");
}

TEST_CASE("malformed oracles are rejected") {
  auto reject = [](std::vector<qasm::Statement> body, int n) {
    analyzer::OracleEntity oracle{n, std::move(body)};
    CHECK_THROWS_AS(analyzer::segment_blocks(oracle), MalformedOracle);
  };
  auto x = [](int i) {
    return qasm::GateCall{"x", {}, {{"_gate_q_" + std::to_string(i), i}}};
  };
  auto mcmt = [](int n) {
    qasm::GateCall call{"mcmt", {}, {}};
    for (int i = 0; i < n; ++i) call.qubits.push_back({"_gate_q_" + std::to_string(i), i});
    return call;
  };

  reject({x(0), mcmt(2), x(1)}, 2);           // mirror mismatch
  reject({x(0), mcmt(2)}, 2);                 // missing mirror
  reject({mcmt(2), x(0), x(0)}, 2);           // trailing x
  reject({x(0), x(0), mcmt(2), x(0), x(0)}, 2);  // double flip
  reject({}, 2);                              // empty body
  reject({x(0)}, 2);                          // no mcmt at all

  // mcmt must cover all qubits in ascending order.
  qasm::GateCall partial{"mcmt", {}, {{"_gate_q_0", 0}}};
  analyzer::OracleEntity oracle{2, {partial}};
  CHECK_THROWS_AS(analyzer::segment_blocks(oracle), MalformedOracle);
}

TEST_CASE("non x/mcmt statements in an oracle body are malformed") {
  qasm::QasmProgram p;
  qasm::GateDef def{"Oracle", {}, {"_gate_q_0", "_gate_q_1"}, {}};
  def.body.push_back(qasm::GateCall{"h", {}, {{"_gate_q_0", 0}}});
  p.gate_defs.push_back(def);
  CHECK_THROWS_AS(analyzer::extract_oracle(p), MalformedOracle);
}

TEST_CASE("duplicate marked states across blocks are rejected") {
  qasm::QasmProgram p;
  auto def = circuits::create_oracle(2, {"01"});
  // Repeat the same block twice: same marked state inferred twice.
  auto body = def.body;
  def.body.insert(def.body.end(), body.begin(), body.end());
  p.gate_defs.push_back(def);
  CHECK_THROWS_AS(analyzer::analyze(p, Mode::oracle_only), DuplicateMarkedState);
}

TEST_CASE("full-mode analysis counts oracle-diffuser pairs") {
  const GroverSpec spec{3, {"100"}, 2};
  auto program = circuits::build_grover(spec, Mode::full);
  auto trace = analyzer::analyze(program, Mode::full);
  CHECK(trace.k == 2);

  // An oracle call with no following diffuser breaks the iteration shape.
  program.statements.push_back(program.statements[3]);  // stray Oracle call
  CHECK_THROWS_AS(analyzer::analyze(program, Mode::full), MalformedOracle);
}

TEST_CASE("rounding is half-even at four decimals") {
  CHECK(analyzer::round_half_even(2.5, 0) == doctest::Approx(2.0));
  CHECK(analyzer::round_half_even(3.5, 0) == doctest::Approx(4.0));
  CHECK(analyzer::round_half_even(0.125, 2) == doctest::Approx(0.12));
  CHECK(analyzer::round_half_even(0.375, 2) == doctest::Approx(0.38));
  CHECK(analyzer::round_half_even(0.47265625, 4) == doctest::Approx(0.4727));
  CHECK(analyzer::round_half_even(0.00390625, 4) == doctest::Approx(0.0039));
}

TEST_CASE("results are truncated to the top thirty entries") {
  const GroverSpec spec{6, {"000111"}, circuits::optimal_iterations(6, 1)};
  const auto trace = analyzer::analyze(oracle_only_program(spec), Mode::oracle_only);
  CHECK(trace.results.entries.size() == 30);
  CHECK(trace.results.truncated);
  const std::string text = analyzer::render_trace(trace);
  CHECK(text.find("...\n}") != std::string::npos);

  const GroverSpec small{4, {"0001"}, circuits::optimal_iterations(4, 1)};
  const auto trace4 = analyzer::analyze(oracle_only_program(small), Mode::oracle_only);
  CHECK(trace4.results.entries.size() == 16);
  CHECK(!trace4.results.truncated);
}

TEST_CASE("trace JSON carries the full structure") {
  const GroverSpec spec{4, {"0111", "1101"}, 2};
  const auto program = circuits::build_grover(spec, Mode::full);
  const auto trace = analyzer::analyze(program, Mode::full);
  const auto j = nlohmann::json::parse(analyzer::trace_to_json(trace));
  CHECK(j.at("n") == 4);
  CHECK(j.at("t") == 2);
  CHECK(j.at("k") == 2);
  CHECK(j.at("marked") == std::vector<std::string>{"0111", "1101"});
  CHECK(j.at("blocks").size() == 2);
  CHECK(j.at("blocks")[0].at("steps").size() == 4);
  CHECK(j.at("results").size() == 16);
}

TEST_CASE("full-mode analysis demands a consistent register") {
  const GroverSpec spec{3, {"010"}, 1};
  auto program = circuits::build_grover(spec, Mode::full);
  program.qubit_decl->size = 4;  // register wider than the oracle
  CHECK_THROWS_AS(analyzer::analyze(program, Mode::full), MalformedOracle);
}

TEST_CASE("every generator output analyzes back to its own spec") {
  for (int n = 2; n <= 5; ++n) {
    for (int t = 1; t <= std::min(n, 2); ++t) {
      const auto count = std::min<std::uint64_t>(4, circuits::subset_count(n, t));
      for (const auto& spec : circuits::sample_specs(n, t, count, 99 * n + t)) {
        for (const auto mode : {Mode::full, Mode::oracle_only}) {
          const auto program = circuits::build_grover(spec, mode);
          const auto trace = analyzer::analyze(program, mode);
          CHECK(trace.marked_states == spec.marked);
          CHECK(trace.k == spec.k);
        }
      }
    }
  }
}
