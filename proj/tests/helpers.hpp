#pragma once

#include <string>

namespace testutil {

// 2-qubit Grover circuit, marked state "00", one iteration. The reference
// output format every emitter is held to.
inline const std::string kGolden2 = R"(OPENQASM 3.0;
include "stdgates.inc";

gate mcmt _gate_q_0, _gate_q_1 {
  cz _gate_q_0, _gate_q_1;
}
gate Oracle _gate_q_0, _gate_q_1 {
  x _gate_q_0;
  x _gate_q_1;
  mcmt _gate_q_0, _gate_q_1;
  x _gate_q_0;
  x _gate_q_1;
}
gate Diffuser _gate_q_0, _gate_q_1 {
  h _gate_q_0;
  h _gate_q_1;
  x _gate_q_0;
  x _gate_q_1;
  h _gate_q_1;
  cx _gate_q_0, _gate_q_1;
  h _gate_q_1;
  x _gate_q_0;
  x _gate_q_1;
  h _gate_q_0;
  h _gate_q_1;
}
bit[2] c;
qubit[2] q;
h q[0];
h q[1];
Oracle q[0], q[1];
Diffuser q[0], q[1];
c[0] = measure q[0];
c[1] = measure q[1];
)";

}  // namespace testutil
