#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qdb {

/// Gate vocabulary of the simulator. Multi-controlled gates carry their
/// control list (with per-control polarity) in the instruction itself and
/// are applied natively, without decomposition into two-qubit gates.
enum class GateKind : std::uint8_t {
    H,
    X,
    Z,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    CSWAP,
    MCX,
    MCZ,
    SWAP,
};

const char* gate_kind_name(GateKind kind);
bool gate_has_angle(GateKind kind);

/// Role tag used by the cost accounting: gates emitted by the classical
/// value loader are charged to data transfer, not to circuit compute time.
enum class GateRole : std::uint8_t { Compute, Load };

struct ControlBit {
    int qubit = 0;
    bool positive = true; // false: fires when the control qubit is |0>

    friend bool operator==(const ControlBit&, const ControlBit&) = default;
};

struct GateInstance {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    std::vector<ControlBit> controls;
    double theta = 0.0;
    GateRole role = GateRole::Compute;

    /// All qubits the gate touches (targets followed by controls).
    std::vector<int> operand_qubits() const;

    GateInstance inverse() const;

    // Factories for the common shapes; they keep call sites terse and make
    // the arity of each kind explicit.
    static GateInstance h(int q);
    static GateInstance x(int q);
    static GateInstance z(int q);
    static GateInstance rx(int q, double theta);
    static GateInstance ry(int q, double theta);
    static GateInstance rz(int q, double theta);
    static GateInstance cnot(int control, int target);
    static GateInstance cz(int a, int b);
    static GateInstance swap(int a, int b);
    static GateInstance cswap(int control, int a, int b);
    static GateInstance mcx(std::vector<ControlBit> controls, int target);
    static GateInstance mcz(std::vector<ControlBit> controls);
};

/// Throws IndexOutOfRange / OverlappingOperands / InvalidCounts when the
/// instruction is malformed for an n_qubits-wide register file.
void validate_gate(const GateInstance& gate, int n_qubits);

struct Circuit {
    int n_qubits = 0;
    std::vector<GateInstance> gates;
    std::vector<int> measured_qubits;

    Circuit() = default;
    explicit Circuit(int n) : n_qubits(n) {}

    Circuit& append(GateInstance gate); // validates against n_qubits
    Circuit& append(const Circuit& other);

    /// Adjoint circuit: gates reversed, rotation angles negated.
    Circuit inverse() const;

    std::size_t size() const { return gates.size(); }

    /// Line-oriented debug text, one gate per line:
    ///   KIND q<i>[,q<j>...] [ctrl=q<k>+|-]... [theta=<radians>]
    std::string dump() const;
};

/// Controlled phase diag(1,1,1,e^{i theta}) between two qubits, expanded
/// into RZ/CNOT (exact up to global phase). Needed by the Fourier blocks.
void append_cphase(Circuit& circuit, int control, int target, double theta);

/// Copy of `inner` acting on qubits [offset, offset + inner.n_qubits) of a
/// total_qubits-wide circuit.
Circuit embedded(const Circuit& inner, int offset, int total_qubits);

} // namespace qdb
