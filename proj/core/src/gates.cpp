#include "qdb/gates.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <sstream>

namespace qdb {

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::CSWAP: return "CSWAP";
        case GateKind::MCX: return "MCX";
        case GateKind::MCZ: return "MCZ";
        case GateKind::SWAP: return "SWAP";
    }
    return "?";
}

bool gate_has_angle(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

std::vector<int> GateInstance::operand_qubits() const {
    std::vector<int> out = targets;
    out.reserve(targets.size() + controls.size());
    for (const auto& c : controls) {
        out.push_back(c.qubit);
    }
    return out;
}

GateInstance GateInstance::inverse() const {
    GateInstance inv = *this;
    if (gate_has_angle(kind)) {
        inv.theta = -theta;
    }
    // Everything else in the vocabulary is self-inverse.
    return inv;
}

GateInstance GateInstance::h(int q) { return {GateKind::H, {q}, {}, 0.0}; }
GateInstance GateInstance::x(int q) { return {GateKind::X, {q}, {}, 0.0}; }
GateInstance GateInstance::z(int q) { return {GateKind::Z, {q}, {}, 0.0}; }
GateInstance GateInstance::rx(int q, double theta) { return {GateKind::RX, {q}, {}, theta}; }
GateInstance GateInstance::ry(int q, double theta) { return {GateKind::RY, {q}, {}, theta}; }
GateInstance GateInstance::rz(int q, double theta) { return {GateKind::RZ, {q}, {}, theta}; }

GateInstance GateInstance::cnot(int control, int target) {
    return {GateKind::CNOT, {target}, {{control, true}}, 0.0};
}

GateInstance GateInstance::cz(int a, int b) { return {GateKind::CZ, {a, b}, {}, 0.0}; }
GateInstance GateInstance::swap(int a, int b) { return {GateKind::SWAP, {a, b}, {}, 0.0}; }

GateInstance GateInstance::cswap(int control, int a, int b) {
    return {GateKind::CSWAP, {a, b}, {{control, true}}, 0.0};
}

GateInstance GateInstance::mcx(std::vector<ControlBit> controls, int target) {
    return {GateKind::MCX, {target}, std::move(controls), 0.0};
}

GateInstance GateInstance::mcz(std::vector<ControlBit> controls) {
    return {GateKind::MCZ, {}, std::move(controls), 0.0};
}

namespace {

void check_arity(const GateInstance& g, std::size_t targets, std::size_t min_controls,
                 std::size_t max_controls) {
    if (g.targets.size() != targets || g.controls.size() < min_controls ||
        g.controls.size() > max_controls) {
        raise(ErrorCode::InvalidCounts,
              std::string("malformed ") + gate_kind_name(g.kind) + " instruction");
    }
}

} // namespace

void validate_gate(const GateInstance& gate, int n_qubits) {
    constexpr std::size_t kNoLimit = static_cast<std::size_t>(-1);
    switch (gate.kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Z:
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            check_arity(gate, 1, 0, 0);
            break;
        case GateKind::CNOT:
            check_arity(gate, 1, 1, 1);
            break;
        case GateKind::CZ:
            check_arity(gate, 2, 0, 0);
            break;
        case GateKind::SWAP:
            check_arity(gate, 2, 0, 0);
            break;
        case GateKind::CSWAP:
            check_arity(gate, 2, 1, kNoLimit);
            break;
        case GateKind::MCX:
            check_arity(gate, 1, 1, kNoLimit);
            break;
        case GateKind::MCZ:
            check_arity(gate, 0, 1, kNoLimit);
            break;
    }

    // Allocation-free operand checks; this runs for every appended gate.
    std::uint64_t seen_mask = 0;
    std::uint64_t high_seen = 0; // qubits 64..127, unused in practice
    auto check_operand = [&](int q, const char* what) {
        if (q < 0 || q >= n_qubits) {
            raise(ErrorCode::IndexOutOfRange, std::string(what) + " qubit " + std::to_string(q) +
                                                  " outside register of width " +
                                                  std::to_string(n_qubits));
        }
        std::uint64_t& mask = q < 64 ? seen_mask : high_seen;
        const std::uint64_t bit = std::uint64_t{1} << (q % 64);
        if (mask & bit) {
            raise(ErrorCode::OverlappingOperands,
                  std::string(what) + " qubit " + std::to_string(q) + " overlaps another operand");
        }
        mask |= bit;
    };
    for (int q : gate.targets) {
        check_operand(q, "target");
    }
    for (const auto& c : gate.controls) {
        check_operand(c.qubit, "control");
    }
}

Circuit& Circuit::append(GateInstance gate) {
    validate_gate(gate, n_qubits);
    gates.push_back(std::move(gate));
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_qubits > n_qubits) {
        raise(ErrorCode::IndexOutOfRange, "appended circuit is wider than the target circuit");
    }
    gates.reserve(gates.size() + other.gates.size());
    for (const auto& g : other.gates) {
        append(g);
    }
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit inv(n_qubits);
    inv.measured_qubits = measured_qubits;
    inv.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        inv.gates.push_back(it->inverse());
    }
    return inv;
}

std::string Circuit::dump() const {
    std::ostringstream out;
    for (const auto& g : gates) {
        out << gate_kind_name(g.kind);
        for (std::size_t i = 0; i < g.targets.size(); ++i) {
            out << (i == 0 ? " " : ",") << 'q' << g.targets[i];
        }
        for (const auto& c : g.controls) {
            out << " ctrl=q" << c.qubit << (c.positive ? '+' : '-');
        }
        if (gate_has_angle(g.kind)) {
            out << " theta=" << g.theta;
        }
        out << '\n';
    }
    return out.str();
}

Circuit embedded(const Circuit& inner, int offset, int total_qubits) {
    if (offset < 0 || offset + inner.n_qubits > total_qubits) {
        raise(ErrorCode::IndexOutOfRange, "embedded circuit does not fit the register file");
    }
    Circuit out(total_qubits);
    out.gates.reserve(inner.gates.size());
    for (GateInstance g : inner.gates) {
        for (int& t : g.targets) {
            t += offset;
        }
        for (auto& c : g.controls) {
            c.qubit += offset;
        }
        out.append(std::move(g));
    }
    for (int q : inner.measured_qubits) {
        out.measured_qubits.push_back(q + offset);
    }
    return out;
}

void append_cphase(Circuit& circuit, int control, int target, double theta) {
    // RZ(t/2) c ; RZ(t/2) t ; CNOT ; RZ(-t/2) t ; CNOT == diag(1,1,1,e^{it})
    // times a global phase e^{-it/4}, which the engine ignores.
    circuit.append(GateInstance::rz(control, theta / 2.0));
    circuit.append(GateInstance::rz(target, theta / 2.0));
    circuit.append(GateInstance::cnot(control, target));
    circuit.append(GateInstance::rz(target, -theta / 2.0));
    circuit.append(GateInstance::cnot(control, target));
}

} // namespace qdb
