#pragma once

#include "qdb/device.hpp"
#include "qdb/gates.hpp"

#include <vector>

namespace qdb {

/// ASAP layering of a circuit: gates within one layer touch pairwise
/// disjoint qubit sets, and concatenating the layers in order is a valid
/// topological order of the gate sequence.
struct LayerSchedule {
    std::vector<std::vector<int>> layers;        // gate indices per layer
    std::vector<std::vector<GateKind>> layer_kinds;
    std::vector<double> layer_durations_ns;      // t_k = max over gates of t_g
    std::vector<int> layer_of_gate;              // gate index -> layer index

    std::size_t layer_count() const { return layers.size(); }
};

/// Greedy ASAP: a gate joins the earliest layer after all of its
/// predecessors on shared qubits. Throws UnknownGateDuration if the device
/// lacks a duration for some gate kind in the circuit.
LayerSchedule schedule_layers(const Circuit& circuit, const DeviceModel& device);

} // namespace qdb
