#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "grover/qasm.hpp"

namespace grover::sim {

struct StateVector {
  int n = 0;
  Eigen::VectorXcd amps;
};

struct DistEntry {
  std::string bits;
  double p = 0.0;

  bool operator==(const DistEntry&) const = default;
};

// Probability mass over basis bitstrings. Entries are kept in the canonical
// reporting order: probability descending, ties by ascending integer value.
struct Distribution {
  int n = 0;
  bool truncated = false;
  std::vector<DistEntry> entries;

  double sum() const;
  double prob_of(const std::string& bits) const;  // 0 when absent
};

struct SimOptions {
  int unitary_max_qubits = 12;
  int dm_max_qubits = 10;
};

// Sorts into the canonical order (probability desc, integer value asc).
void canonical_sort(Distribution& dist);

Distribution distribution_from_amplitudes(int n, const Eigen::VectorXcd& amps);

// State-vector simulation: strided in-place gate application, O(G * 2^n).
// Measurements are stripped before simulation.
std::pair<StateVector, Distribution> sv_simulate(const qasm::QasmProgram& program);

// Composes the full dense 2^n x 2^n circuit unitary, then applies it to
// |0...0>. Throws SizeLimit above options.unitary_max_qubits.
Distribution unitary_simulate(const qasm::QasmProgram& program, const SimOptions& options = {});

// Exposed for property tests (unitarity, reflection identities).
Eigen::MatrixXcd circuit_unitary(const qasm::QasmProgram& program, const SimOptions& options = {});

// Evolves rho = |0><0| by rho -> G rho G^dagger per gate; probabilities are
// the real diagonal. Throws SizeLimit above options.dm_max_qubits.
Distribution dm_simulate(const qasm::QasmProgram& program, const SimOptions& options = {});

double total_variation(const Distribution& a, const Distribution& b);

std::string distribution_to_json(const Distribution& dist);
Distribution distribution_from_json(const std::string& text);

}  // namespace grover::sim
