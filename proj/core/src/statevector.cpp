#include "qdb/statevector.hpp"

#include "qdb/errors.hpp"

#include <bit>
#include <cmath>

namespace qdb {

namespace {

using u64 = std::uint64_t;

struct Mat2 {
    Amplitude u00, u01, u10, u11;
};

Mat2 single_qubit_matrix(GateKind kind, double theta) {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    switch (kind) {
        case GateKind::H:
            return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
        case GateKind::X:
        case GateKind::CNOT:
        case GateKind::MCX:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::RX: {
            const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
            return {c, Amplitude(0.0, -s), Amplitude(0.0, -s), c};
        }
        case GateKind::RY: {
            const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
            return {c, -s, s, c};
        }
        case GateKind::RZ: {
            return {std::polar(1.0, -theta / 2.0), 0.0, 0.0, std::polar(1.0, theta / 2.0)};
        }
        default:
            raise(ErrorCode::InvalidCounts, "gate kind has no 2x2 matrix");
    }
}

/// Calls f(i) for every index i in [0, 2^n) with (i & fixed_mask) == fixed_val.
/// Free bits are enumerated compactly and expanded by inserting zeros at
/// the fixed positions, so the cost is O(2^(n-k) * k) for k fixed bits.
template <class F>
void for_each_with_fixed(int n_qubits, u64 fixed_mask, u64 fixed_val, F&& f) {
    int positions[64];
    int k = 0;
    for (int q = 0; q < n_qubits; ++q) {
        if (fixed_mask & (u64{1} << q)) {
            positions[k++] = q;
        }
    }
    const u64 free_dim = u64{1} << (n_qubits - k);
    for (u64 j = 0; j < free_dim; ++j) {
        u64 i = j;
        for (int p = 0; p < k; ++p) {
            const u64 low = i & ((u64{1} << positions[p]) - 1);
            i = ((i >> positions[p]) << (positions[p] + 1)) | low;
        }
        f(i | fixed_val);
    }
}

void control_masks(const std::vector<ControlBit>& controls, u64& cmask, u64& cval) {
    cmask = 0;
    cval = 0;
    for (const auto& c : controls) {
        cmask |= u64{1} << c.qubit;
        if (c.positive) {
            cval |= u64{1} << c.qubit;
        }
    }
}

void apply_two_level(StateVector& state, int target, const std::vector<ControlBit>& controls,
                     const Mat2& m, GateKind kind) {
    const u64 tbit = u64{1} << target;
    Amplitude* a = state.amps.data();
    if (controls.empty()) {
        const u64 dim = state.dim();
        // Dedicated kernels for the sweep-heavy kinds.
        if (kind == GateKind::H) {
            constexpr double s = 0.70710678118654752440;
            for (u64 hi = 0; hi < dim; hi += tbit << 1) {
                for (u64 lo = hi; lo < hi + tbit; ++lo) {
                    const Amplitude a0 = a[lo];
                    const Amplitude a1 = a[lo | tbit];
                    a[lo] = s * (a0 + a1);
                    a[lo | tbit] = s * (a0 - a1);
                }
            }
            return;
        }
        if (kind == GateKind::X) {
            for (u64 hi = 0; hi < dim; hi += tbit << 1) {
                for (u64 lo = hi; lo < hi + tbit; ++lo) {
                    std::swap(a[lo], a[lo | tbit]);
                }
            }
            return;
        }
        if (kind == GateKind::Z) {
            for (u64 hi = 0; hi < dim; hi += tbit << 1) {
                for (u64 lo = hi; lo < hi + tbit; ++lo) {
                    a[lo | tbit] = -a[lo | tbit];
                }
            }
            return;
        }
        for (u64 hi = 0; hi < dim; hi += tbit << 1) {
            for (u64 lo = hi; lo < hi + tbit; ++lo) {
                const Amplitude a0 = a[lo];
                const Amplitude a1 = a[lo | tbit];
                a[lo] = m.u00 * a0 + m.u01 * a1;
                a[lo | tbit] = m.u10 * a0 + m.u11 * a1;
            }
        }
        return;
    }
    u64 cmask = 0, cval = 0;
    control_masks(controls, cmask, cval);
    for_each_with_fixed(state.n_qubits, cmask | tbit, cval, [&](u64 i0) {
        const u64 i1 = i0 | tbit;
        const Amplitude a0 = a[i0];
        const Amplitude a1 = a[i1];
        a[i0] = m.u00 * a0 + m.u01 * a1;
        a[i1] = m.u10 * a0 + m.u11 * a1;
    });
}

} // namespace

StateVector::StateVector(int n, int qubit_cap) : n_qubits(n) {
    if (n < 1) {
        raise(ErrorCode::InvalidCounts, "statevector needs at least one qubit");
    }
    if (n > qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "circuit needs " + std::to_string(n) +
                                               " qubits, cap is " + std::to_string(qubit_cap));
    }
    amps.assign(u64{1} << n, Amplitude{0.0, 0.0});
    amps[0] = 1.0;
}

double StateVector::norm_sqr() const {
    double s = 0.0;
    for (const auto& a : amps) {
        s += std::norm(a);
    }
    return s;
}

double StateVector::fidelity(const StateVector& other) const {
    Amplitude overlap{0.0, 0.0};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        overlap += std::conj(amps[i]) * other.amps[i];
    }
    return std::norm(overlap);
}

void apply_gate(StateVector& state, const GateInstance& gate) {
    validate_gate(gate, state.n_qubits);
    apply_gate_unchecked(state, gate);
}

void apply_gate_unchecked(StateVector& state, const GateInstance& gate) {
    Amplitude* a = state.amps.data();
    switch (gate.kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Z:
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::CNOT:
        case GateKind::MCX:
            apply_two_level(state, gate.targets[0], gate.controls,
                            single_qubit_matrix(gate.kind, gate.theta), gate.kind);
            return;
        case GateKind::CZ: {
            const u64 both = (u64{1} << gate.targets[0]) | (u64{1} << gate.targets[1]);
            for_each_with_fixed(state.n_qubits, both, both, [&](u64 i) { a[i] = -a[i]; });
            return;
        }
        case GateKind::MCZ: {
            u64 cmask = 0, cval = 0;
            control_masks(gate.controls, cmask, cval);
            for_each_with_fixed(state.n_qubits, cmask, cval, [&](u64 i) { a[i] = -a[i]; });
            return;
        }
        case GateKind::SWAP:
        case GateKind::CSWAP: {
            const u64 abit = u64{1} << gate.targets[0];
            const u64 bbit = u64{1} << gate.targets[1];
            u64 cmask = 0, cval = 0;
            control_masks(gate.controls, cmask, cval);
            // Visit indices with (a=1, b=0); partner has the bits exchanged.
            for_each_with_fixed(state.n_qubits, cmask | abit | bbit, cval | abit,
                                [&](u64 i) { std::swap(a[i], a[i ^ abit ^ bbit]); });
            return;
        }
    }
}

void apply_pauli(StateVector& state, int qubit, int pauli) {
    const u64 tbit = u64{1} << qubit;
    const u64 dim = state.dim();
    Amplitude* a = state.amps.data();
    switch (pauli) {
        case 1: // X
            for (u64 hi = 0; hi < dim; hi += tbit << 1) {
                for (u64 lo = hi; lo < hi + tbit; ++lo) {
                    std::swap(a[lo], a[lo | tbit]);
                }
            }
            return;
        case 2: // Y
            for (u64 hi = 0; hi < dim; hi += tbit << 1) {
                for (u64 lo = hi; lo < hi + tbit; ++lo) {
                    const Amplitude a0 = a[lo];
                    const Amplitude a1 = a[lo | tbit];
                    a[lo] = Amplitude(0.0, -1.0) * a1;
                    a[lo | tbit] = Amplitude(0.0, 1.0) * a0;
                }
            }
            return;
        case 3: // Z
            for (u64 hi = 0; hi < dim; hi += tbit << 1) {
                for (u64 lo = hi; lo < hi + tbit; ++lo) {
                    a[lo | tbit] = -a[lo | tbit];
                }
            }
            return;
        default:
            raise(ErrorCode::InvalidCounts, "pauli must be 1, 2 or 3");
    }
}

} // namespace qdb
