#pragma once

#include "qdb/gates.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace qdb {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultQubitCap = 24;

/// Dense statevector over n qubits, little-endian: qubit 0 is the least
/// significant bit of the basis-state index. Starts in |0...0>.
struct StateVector {
    int n_qubits = 0;
    std::vector<Amplitude> amps;

    explicit StateVector(int n, int qubit_cap = kDefaultQubitCap);

    std::uint64_t dim() const { return amps.size(); }

    double norm_sqr() const;

    /// Probability of basis state x.
    double probability(std::uint64_t x) const { return std::norm(amps[x]); }

    /// Squared fidelity |<this|other>|^2; both sides need not be phase-aligned.
    double fidelity(const StateVector& other) const;
};

/// Applies the gate's unitary in place. Multi-controlled gates act directly
/// on the statevector; no decomposition is performed.
void apply_gate(StateVector& state, const GateInstance& gate);

/// Same without operand validation; for gates already validated by
/// Circuit::append. The simulator's inner loops use this.
void apply_gate_unchecked(StateVector& state, const GateInstance& gate);

/// Direct Pauli application used by the stochastic fault injector.
/// pauli: 1 = X, 2 = Y, 3 = Z.
void apply_pauli(StateVector& state, int qubit, int pauli);

} // namespace qdb
