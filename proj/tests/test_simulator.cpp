#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "grover/analyzer.hpp"
#include "grover/circuits.hpp"
#include "grover/qasm.hpp"
#include "grover/simulator.hpp"
#include "helpers.hpp"

using namespace grover;

namespace {

qasm::QasmProgram parse(const std::string& body, int n) {
  return qasm::parse_program("OPENQASM 3.0;\nqubit[" + std::to_string(n) + "] q;\n" + body);
}

// Program that applies the oracle for `marked` once to the computational
// basis, for inspecting its unitary.
qasm::QasmProgram oracle_program(int n, const std::vector<std::string>& marked) {
  qasm::QasmProgram p;
  p.gate_defs.push_back(circuits::create_oracle(n, marked));
  p.qubit_decl = qasm::RegisterDecl{"q", n};
  qasm::GateCall call{"Oracle", {}, {}};
  for (int i = 0; i < n; ++i) call.qubits.push_back({"q[" + std::to_string(i) + "]", i});
  p.statements.push_back(call);
  return p;
}

}  // namespace

TEST_CASE("bit order puts qubit n-1 leftmost") {
  const auto [state, dist] = sim::sv_simulate(parse("x q[0];\n", 2));
  REQUIRE(!dist.entries.empty());
  CHECK(dist.entries[0].bits == "01");
  CHECK(dist.entries[0].p == doctest::Approx(1.0));

  const auto [state1, dist1] = sim::sv_simulate(parse("x q[1];\n", 2));
  CHECK(dist1.entries[0].bits == "10");
}

TEST_CASE("bell pair splits mass between 00 and 11") {
  const auto [state, dist] = sim::sv_simulate(parse("h q[0];\ncx q[0], q[1];\n", 2));
  CHECK(dist.prob_of("00") == doctest::Approx(0.5));
  CHECK(dist.prob_of("11") == doctest::Approx(0.5));
  CHECK(dist.prob_of("01") == doctest::Approx(0.0));
  CHECK(dist.sum() == doctest::Approx(1.0));
}

TEST_CASE("h z h equals x, h rz(pi) h equals x up to phase") {
  const auto [s1, d1] = sim::sv_simulate(parse("h q[0];\nz q[0];\nh q[0];\n", 1));
  CHECK(d1.prob_of("1") == doctest::Approx(1.0));

  const auto [s2, d2] = sim::sv_simulate(parse("h q[0];\nrz(3.141592653589793) q[0];\nh q[0];\n", 1));
  CHECK(d2.prob_of("1") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("golden circuit concentrates all mass on the marked state") {
  const auto program = qasm::parse_program(testutil::kGolden2);
  const auto [state, dist] = sim::sv_simulate(program);
  CHECK(dist.entries[0].bits == "00");
  CHECK(dist.entries[0].p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurements do not affect the simulated distribution") {
  const auto program = qasm::parse_program(testutil::kGolden2);
  const auto bare = qasm::strip_measurements(program);
  const auto a = sim::sv_simulate(program).second;
  const auto b = sim::sv_simulate(bare).second;
  CHECK(sim::total_variation(a, b) == doctest::Approx(0.0));
}

TEST_CASE("reference two-marked four-qubit distribution") {
  const circuits::GroverSpec spec{4, {"0111", "1101"}, 2};
  const auto program = circuits::build_grover(spec, circuits::Mode::full);
  const auto dist = sim::sv_simulate(program).second;
  CHECK(dist.prob_of("0111") == doctest::Approx(0.47265625).epsilon(1e-12));
  CHECK(dist.prob_of("1101") == doctest::Approx(0.47265625).epsilon(1e-12));
  CHECK(dist.prob_of("0000") == doctest::Approx(0.00390625).epsilon(1e-12));
  CHECK(dist.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle unitary is the expected diagonal sign flip") {
  const std::vector<std::string> marked{"101", "010"};
  const Eigen::MatrixXcd u = sim::circuit_unitary(oracle_program(3, marked));
  for (int c = 0; c < 8; ++c) {
    for (int r = 0; r < 8; ++r) {
      if (r != c) {
        CHECK(std::abs(u(r, c)) < 1e-12);
        continue;
      }
      const std::string bits = circuits::bitstring_of(c, 3);
      const double expect = (bits == "101" || bits == "010") ? -1.0 : 1.0;
      CHECK(std::abs(u(c, c) - expect) < 1e-12);
    }
  }
}

TEST_CASE("diffuser unitary reflects about the uniform state up to global phase") {
  qasm::QasmProgram p;
  p.gate_defs.push_back(circuits::create_diffuser(3));
  p.qubit_decl = qasm::RegisterDecl{"q", 3};
  qasm::GateCall call{"Diffuser", {}, {}};
  for (int i = 0; i < 3; ++i) call.qubits.push_back({"q[" + std::to_string(i) + "]", i});
  p.statements.push_back(call);

  const Eigen::MatrixXcd u = sim::circuit_unitary(p);
  Eigen::MatrixXcd reflect = Eigen::MatrixXcd::Constant(8, 8, 2.0 / 8.0);
  reflect -= Eigen::MatrixXcd::Identity(8, 8);
  const double plus = (u - reflect).cwiseAbs().maxCoeff();
  const double minus = (u + reflect).cwiseAbs().maxCoeff();
  CHECK(std::min(plus, minus) < 1e-12);
}

TEST_CASE("circuit unitaries are unitary") {
  const circuits::GroverSpec spec{3, {"011"}, 2};
  const auto program = circuits::build_grover(spec, circuits::Mode::full);
  const Eigen::MatrixXcd u = sim::circuit_unitary(program);
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  CHECK((gram - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("sv, unitary, and dm methods agree pairwise") {
  for (int n = 2; n <= 6; ++n) {
    const int t = std::min(n, 3);
    const auto specs = circuits::sample_specs(n, t, 2, 1000 + n);
    for (const auto& spec : specs) {
      const auto program = circuits::build_grover(spec, circuits::Mode::full);
      const auto sv = sim::sv_simulate(program).second;
      const auto un = sim::unitary_simulate(program);
      const auto dm = sim::dm_simulate(program);
      CHECK(sim::total_variation(sv, un) < 1e-9);
      CHECK(sim::total_variation(sv, dm) < 1e-9);
    }
  }
}

TEST_CASE("density-matrix evolution preserves trace and hermiticity invariants") {
  const circuits::GroverSpec spec{4, {"0110"}, 3};
  const auto program = circuits::build_grover(spec, circuits::Mode::full);
  const auto dist = sim::dm_simulate(program);
  CHECK(dist.sum() == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& e : dist.entries) CHECK(e.p >= 0.0);
}

TEST_CASE("size limits guard the dense methods") {
  const circuits::GroverSpec spec{4, {"0011"}, 1};
  const auto program = circuits::build_grover(spec, circuits::Mode::full);
  sim::SimOptions tight;
  tight.unitary_max_qubits = 3;
  tight.dm_max_qubits = 3;
  CHECK_THROWS_AS(sim::unitary_simulate(program, tight), SizeLimit);
  CHECK_THROWS_AS(sim::dm_simulate(program, tight), SizeLimit);
  CHECK_THROWS_AS(sim::circuit_unitary(program, tight), SizeLimit);
}

TEST_CASE("simulating without a qubit declaration is a domain error") {
  const circuits::GroverSpec spec{3, {"001"}, 1};
  const auto program = circuits::build_grover(spec, circuits::Mode::oracle_only);
  CHECK_THROWS_AS(sim::sv_simulate(program), DomainError);
}

TEST_CASE("unsupported primitives are reported") {
  qasm::QasmProgram p;
  p.qubit_decl = qasm::RegisterDecl{"q", 1};
  p.statements.push_back(qasm::GateCall{"sx", {}, {{"q[0]", 0}}});
  CHECK_THROWS_AS(sim::sv_simulate(p), UnsupportedGate);
}

TEST_CASE("distribution entries keep the canonical order") {
  const auto dist = sim::sv_simulate(parse("h q[0];\nh q[1];\n", 2)).second;
  REQUIRE(dist.entries.size() == 4);
  for (std::size_t i = 1; i < dist.entries.size(); ++i) {
    const auto& prev = dist.entries[i - 1];
    const auto& cur = dist.entries[i];
    const bool ordered = prev.p > cur.p || (prev.p == cur.p && circuits::value_of(prev.bits) <
                                                                   circuits::value_of(cur.bits));
    CHECK(ordered);
  }
}

TEST_CASE("distribution JSON round trips") {
  const auto dist = sim::sv_simulate(parse("h q[0];\ncx q[0], q[1];\n", 2)).second;
  const auto again = sim::distribution_from_json(sim::distribution_to_json(dist));
  CHECK(again.n == dist.n);
  CHECK(again.truncated == dist.truncated);
  REQUIRE(again.entries.size() == dist.entries.size());
  for (std::size_t i = 0; i < dist.entries.size(); ++i) {
    CHECK(again.entries[i].bits == dist.entries[i].bits);
    CHECK(again.entries[i].p == doctest::Approx(dist.entries[i].p).epsilon(1e-15));
  }
}

TEST_CASE("total variation distance behaves like a metric on simple cases") {
  sim::Distribution a{1, false, {{"0", 1.0}}};
  sim::Distribution b{1, false, {{"1", 1.0}}};
  CHECK(sim::total_variation(a, a) == doctest::Approx(0.0));
  CHECK(sim::total_variation(a, b) == doctest::Approx(1.0));
}
