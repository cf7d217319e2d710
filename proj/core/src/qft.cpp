#include "qdb/qft.hpp"

#include "qdb/errors.hpp"

#include <numbers>

namespace qdb {

Circuit build_qft(int n) {
    if (n < 1 || n > 12) {
        raise(ErrorCode::CapacityExceeded,
              "Fourier block supports 1..12 qubits, got " + std::to_string(n));
    }
    Circuit circuit(n);
    // Process from the most significant qubit down; qubit j accumulates the
    // controlled phases contributed by the lower-order qubits.
    for (int j = n - 1; j >= 0; --j) {
        circuit.append(GateInstance::h(j));
        for (int m = j - 1; m >= 0; --m) {
            const double theta = std::numbers::pi / static_cast<double>(1u << (j - m));
            append_cphase(circuit, m, j, theta);
        }
    }
    for (int i = 0; i < n / 2; ++i) {
        circuit.append(GateInstance::swap(i, n - 1 - i));
    }
    return circuit;
}

Circuit build_inverse_qft(int n) {
    return build_qft(n).inverse();
}

} // namespace qdb
