#include "qdb/schedule.hpp"

#include <algorithm>

namespace qdb {

LayerSchedule schedule_layers(const Circuit& circuit, const DeviceModel& device) {
    LayerSchedule sched;
    sched.layer_of_gate.resize(circuit.gates.size(), -1);
    // next_free[q] = first layer in which qubit q is available again
    std::vector<std::size_t> next_free(static_cast<std::size_t>(circuit.n_qubits), 0);

    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        const auto& gate = circuit.gates[g];
        const double t_g = device.time_for(gate.kind);
        std::size_t layer = 0;
        const auto operands = gate.operand_qubits();
        for (int q : operands) {
            layer = std::max(layer, next_free[static_cast<std::size_t>(q)]);
        }
        if (layer == sched.layers.size()) {
            sched.layers.emplace_back();
            sched.layer_kinds.emplace_back();
            sched.layer_durations_ns.push_back(0.0);
        }
        sched.layers[layer].push_back(static_cast<int>(g));
        sched.layer_kinds[layer].push_back(gate.kind);
        sched.layer_durations_ns[layer] = std::max(sched.layer_durations_ns[layer], t_g);
        sched.layer_of_gate[g] = static_cast<int>(layer);
        for (int q : operands) {
            next_free[static_cast<std::size_t>(q)] = layer + 1;
        }
    }
    return sched;
}

} // namespace qdb
