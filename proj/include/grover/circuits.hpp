#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grover/qasm.hpp"

namespace grover::circuits {

enum class Mode { full, oracle_only };

Mode mode_from_string(const std::string& s);
std::string to_string(Mode mode);

struct GroverSpec {
  int n = 0;
  std::vector<std::string> marked;
  int k = 0;
};

// Throws InvalidMarkedState / DomainError when the spec invariants are broken.
void validate_spec(const GroverSpec& spec);

// Bitstring convention shared by every module: the leftmost character is the
// bit of qubit n-1, so a bitstring reads as the MSB-first binary of `value`.
std::string bitstring_of(std::uint64_t value, int n);
std::uint64_t value_of(const std::string& bits);

// Phase oracle flipping the sign of each marked basis state: per marked
// string, X on the zero positions of the reversed string, mcmt over all
// qubits, X again.
qasm::GateDef create_oracle(int n, const std::vector<std::string>& marked);

// Inversion about the mean: h all, x all, h on q_{n-1}, multi-controlled X
// onto q_{n-1} (plain cx when n=2), h on q_{n-1}, x all, h all. Equals
// 2|s><s| - I up to global phase.
qasm::GateDef create_diffuser(int n);

// floor((pi/4) * sqrt(2^n / t))
int optimal_iterations(int n, int t);

qasm::QasmProgram build_grover(const GroverSpec& spec, Mode mode);

// Number of t-subsets of the 2^n basis states, saturating at UINT64_MAX.
std::uint64_t subset_count(int n, int t);

// Uniform distinct t-subsets of basis states, marked sets in ascending value
// order, k = optimal_iterations(n, t). Deterministic in (seed).
// t must not exceed the cap (default min(n, 3)); count must not exceed
// subset_count(n, t).
std::vector<GroverSpec> sample_specs(int n, int t, std::size_t count, std::uint64_t seed,
                                     std::optional<int> t_cap = std::nullopt);

}  // namespace grover::circuits
