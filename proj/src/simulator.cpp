#include "grover/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "grover/circuits.hpp"
#include "json.hpp"

namespace grover::sim {

namespace {

using cd = std::complex<double>;
using Index = Eigen::Index;

constexpr double kInvSqrt2 = 0.70710678118654752440;

enum class GateKind { hadamard, x_like, phase_flip, rz };

// Normal form of one primitive: x/cx/mcx collapse to x_like (controls mask +
// target bit), z/cz/mcmt to phase_flip (all-ones mask).
struct Gate {
  GateKind kind;
  std::uint64_t mask = 0;  // controls for x_like, full mask for phase_flip
  int target = 0;
  double angle = 0.0;
};

Gate lower(const qasm::GateCall& call, int n) {
  for (const qasm::QubitArg& q : call.qubits)
    if (q.index < 0 || q.index >= n) throw DomainError("qubit index out of range in simulation");
  auto bit = [](const qasm::QubitArg& q) { return static_cast<std::uint64_t>(1) << q.index; };

  if (call.name == "h") return {GateKind::hadamard, 0, call.qubits[0].index, 0.0};
  if (call.name == "x") return {GateKind::x_like, 0, call.qubits[0].index, 0.0};
  if (call.name == "rz") return {GateKind::rz, 0, call.qubits[0].index, call.params[0]};
  if (call.name == "z") return {GateKind::phase_flip, bit(call.qubits[0]), 0, 0.0};
  if (call.name == "cz" || call.name == "mcmt") {
    std::uint64_t mask = 0;
    for (const qasm::QubitArg& q : call.qubits) mask |= bit(q);
    return {GateKind::phase_flip, mask, 0, 0.0};
  }
  if (call.name == "cx" || call.name == "mcx") {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i + 1 < call.qubits.size(); ++i) mask |= bit(call.qubits[i]);
    return {GateKind::x_like, mask, call.qubits.back().index, 0.0};
  }
  throw UnsupportedGate("gate '" + call.name + "' is not simulable");
}

// Applies the gate to every column of m (each column treated as a state
// vector); this is the left-multiplication G * m.
template <class Mat>
void apply_rows(Mat& m, const Gate& g) {
  const Index N = m.rows();
  switch (g.kind) {
    case GateKind::hadamard: {
      const Index step = Index(1) << g.target;
      for (Index c = 0; c < m.cols(); ++c) {
        for (Index base = 0; base < N; base += 2 * step) {
          for (Index i = base; i < base + step; ++i) {
            const cd a0 = m(i, c);
            const cd a1 = m(i + step, c);
            m(i, c) = (a0 + a1) * kInvSqrt2;
            m(i + step, c) = (a0 - a1) * kInvSqrt2;
          }
        }
      }
      return;
    }
    case GateKind::x_like: {
      const Index step = Index(1) << g.target;
      const auto controls = static_cast<Index>(g.mask);
      for (Index c = 0; c < m.cols(); ++c) {
        for (Index base = 0; base < N; base += 2 * step) {
          for (Index i = base; i < base + step; ++i) {
            if ((i & controls) == controls) std::swap(m(i, c), m(i + step, c));
          }
        }
      }
      return;
    }
    case GateKind::phase_flip: {
      const auto mask = static_cast<Index>(g.mask);
      for (Index c = 0; c < m.cols(); ++c) {
        for (Index i = 0; i < N; ++i) {
          if ((i & mask) == mask) m(i, c) = -m(i, c);
        }
      }
      return;
    }
    case GateKind::rz: {
      const Index step = Index(1) << g.target;
      const cd lo = std::exp(cd(0.0, -g.angle / 2.0));
      const cd hi = std::exp(cd(0.0, g.angle / 2.0));
      for (Index c = 0; c < m.cols(); ++c) {
        for (Index i = 0; i < N; ++i) m(i, c) *= (i & step) ? hi : lo;
      }
      return;
    }
  }
}

// Right-multiplication m * G^dagger: mixes whole columns with conjugated
// coefficients. Together with apply_rows this evolves a density matrix.
void apply_cols_conj(Eigen::MatrixXcd& m, const Gate& g) {
  const Index N = m.cols();
  switch (g.kind) {
    case GateKind::hadamard: {
      const Index step = Index(1) << g.target;
      Eigen::VectorXcd tmp(m.rows());
      for (Index base = 0; base < N; base += 2 * step) {
        for (Index c = base; c < base + step; ++c) {
          tmp = m.col(c);
          m.col(c) = (tmp + m.col(c + step)) * kInvSqrt2;
          m.col(c + step) = (tmp - m.col(c + step)) * kInvSqrt2;
        }
      }
      return;
    }
    case GateKind::x_like: {
      const Index step = Index(1) << g.target;
      const auto controls = static_cast<Index>(g.mask);
      for (Index base = 0; base < N; base += 2 * step) {
        for (Index c = base; c < base + step; ++c) {
          if ((c & controls) == controls) m.col(c).swap(m.col(c + step));
        }
      }
      return;
    }
    case GateKind::phase_flip: {
      const auto mask = static_cast<Index>(g.mask);
      for (Index c = 0; c < N; ++c) {
        if ((c & mask) == mask) m.col(c) = -m.col(c);
      }
      return;
    }
    case GateKind::rz: {
      const Index step = Index(1) << g.target;
      const cd lo = std::exp(cd(0.0, g.angle / 2.0));   // conj of e^{-i a/2}
      const cd hi = std::exp(cd(0.0, -g.angle / 2.0));  // conj of e^{+i a/2}
      for (Index c = 0; c < N; ++c) m.col(c) *= (c & step) ? hi : lo;
      return;
    }
  }
}

struct Lowered {
  int n = 0;
  std::vector<Gate> gates;
};

Lowered lower_program(const qasm::QasmProgram& program) {
  if (!program.qubit_decl) throw DomainError("program has no qubit declaration to simulate");
  Lowered out;
  out.n = program.qubit_decl->size;
  if (out.n < 1) throw DomainError("empty qubit register");
  std::vector<qasm::Statement> flat;
  try {
    flat = qasm::expand_gate_calls(program);
  } catch (const UnknownGate& e) {
    // Names foreign to both the definitions and the primitive set are not
    // simulable, whatever they would mean elsewhere.
    throw UnsupportedGate(e.what());
  }
  for (const qasm::Statement& s : flat) {
    out.gates.push_back(lower(std::get<qasm::GateCall>(s), out.n));
  }
  return out;
}

}  // namespace

double Distribution::sum() const {
  double s = 0.0;
  for (const DistEntry& e : entries) s += e.p;
  return s;
}

double Distribution::prob_of(const std::string& bits) const {
  for (const DistEntry& e : entries)
    if (e.bits == bits) return e.p;
  return 0.0;
}

void canonical_sort(Distribution& dist) {
  struct Keyed {
    double p;
    std::uint64_t value;
    std::size_t index;
  };
  std::vector<Keyed> keys;
  keys.reserve(dist.entries.size());
  for (std::size_t i = 0; i < dist.entries.size(); ++i)
    keys.push_back({dist.entries[i].p, circuits::value_of(dist.entries[i].bits), i});
  std::stable_sort(keys.begin(), keys.end(), [](const Keyed& a, const Keyed& b) {
    if (a.p != b.p) return a.p > b.p;
    return a.value < b.value;
  });
  std::vector<DistEntry> ordered;
  ordered.reserve(dist.entries.size());
  for (const Keyed& k : keys) ordered.push_back(std::move(dist.entries[k.index]));
  dist.entries = std::move(ordered);
}

Distribution distribution_from_amplitudes(int n, const Eigen::VectorXcd& amps) {
  Distribution dist;
  dist.n = n;
  dist.entries.reserve(static_cast<std::size_t>(amps.size()));
  for (Index i = 0; i < amps.size(); ++i) {
    dist.entries.push_back(
        {circuits::bitstring_of(static_cast<std::uint64_t>(i), n), std::norm(amps(i))});
  }
  canonical_sort(dist);
  return dist;
}

std::pair<StateVector, Distribution> sv_simulate(const qasm::QasmProgram& program) {
  const Lowered lowered = lower_program(program);
  const Index N = Index(1) << lowered.n;

  StateVector sv;
  sv.n = lowered.n;
  sv.amps = Eigen::VectorXcd::Zero(N);
  sv.amps(0) = cd(1.0, 0.0);

  for (const Gate& g : lowered.gates) apply_rows(sv.amps, g);

  return {sv, distribution_from_amplitudes(lowered.n, sv.amps)};
}

Eigen::MatrixXcd circuit_unitary(const qasm::QasmProgram& program, const SimOptions& options) {
  const Lowered lowered = lower_program(program);
  if (lowered.n > options.unitary_max_qubits)
    throw SizeLimit("unitary simulation capped at " + std::to_string(options.unitary_max_qubits) +
                    " qubits, got " + std::to_string(lowered.n));
  const Index N = Index(1) << lowered.n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(N, N);
  for (const Gate& g : lowered.gates) apply_rows(u, g);
  return u;
}

Distribution unitary_simulate(const qasm::QasmProgram& program, const SimOptions& options) {
  const Eigen::MatrixXcd u = circuit_unitary(program, options);
  const int n = program.qubit_decl->size;
  // |psi> = U |0...0> is the first column.
  return distribution_from_amplitudes(n, u.col(0));
}

Distribution dm_simulate(const qasm::QasmProgram& program, const SimOptions& options) {
  const Lowered lowered = lower_program(program);
  if (lowered.n > options.dm_max_qubits)
    throw SizeLimit("density-matrix simulation capped at " + std::to_string(options.dm_max_qubits) +
                    " qubits, got " + std::to_string(lowered.n));
  const Index N = Index(1) << lowered.n;

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(N, N);
  rho(0, 0) = cd(1.0, 0.0);

  for (const Gate& g : lowered.gates) {
    apply_rows(rho, g);
    apply_cols_conj(rho, g);
  }

  Distribution dist;
  dist.n = lowered.n;
  dist.entries.reserve(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) {
    const double p = std::max(0.0, rho(i, i).real());
    dist.entries.push_back({circuits::bitstring_of(static_cast<std::uint64_t>(i), lowered.n), p});
  }
  canonical_sort(dist);
  return dist;
}

double total_variation(const Distribution& a, const Distribution& b) {
  if (a.n != b.n) throw DimensionMismatch("distributions over different qubit counts");
  std::unordered_map<std::string, double> diff;
  for (const DistEntry& e : a.entries) diff[e.bits] += e.p;
  for (const DistEntry& e : b.entries) diff[e.bits] -= e.p;
  double tv = 0.0;
  for (const auto& [bits, d] : diff) tv += std::abs(d);
  return tv / 2.0;
}

std::string distribution_to_json(const Distribution& dist) {
  nlohmann::ordered_json j;
  j["n"] = dist.n;
  nlohmann::ordered_json probs = nlohmann::ordered_json::object();
  for (const DistEntry& e : dist.entries) probs[e.bits] = e.p;
  j["probs"] = probs;
  j["truncated"] = dist.truncated;
  return j.dump(2) + "\n";
}

Distribution distribution_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Distribution dist;
  dist.n = j.at("n").get<int>();
  dist.truncated = j.value("truncated", false);
  const auto& probs = j.at("probs");
  for (const auto& [bits, p] : probs.items()) dist.entries.push_back({bits, p.get<double>()});
  canonical_sort(dist);
  return dist;
}

}  // namespace grover::sim
