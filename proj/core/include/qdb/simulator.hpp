#pragma once

#include "qdb/device.hpp"
#include "qdb/gates.hpp"
#include "qdb/statevector.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qdb {

inline constexpr std::uint64_t kDefaultShots = 2000;

/// Stochastic noise channel: per executed gate a depolarizing fault on the
/// gate's operand qubits with probability eps_g, and per scheduled layer a
/// phase-damping factor exp(-t_k / T2_eff) realized as a Z fault on a
/// random qubit. The no-fault probability of a layer then matches the
/// exp(-t_k/T2_eff) decay term of the cost model exactly.
struct NoiseModel {
    DeviceModel device;
    bool enabled = false;
    std::uint64_t seed = 0;

    static NoiseModel disabled(std::uint64_t seed = 0);
    static NoiseModel from_device(const DeviceModel& device, std::uint64_t seed);
};

struct ShotResult {
    std::map<std::string, std::uint64_t> counts; // bitstring over measured qubits
    std::uint64_t shots = 0;
};

/// Runs the circuit from |0...0>, noiselessly and deterministically.
StateVector run_statevector(const Circuit& circuit, int qubit_cap = kDefaultQubitCap);

/// Born distribution of the state restricted to the given measured qubits
/// (all qubits when the list is empty). Entry m of the result is the
/// probability of reading value m off the measured qubits, little-endian
/// in the order of `measured`.
std::vector<double> measured_distribution(const StateVector& state,
                                          const std::vector<int>& measured);

/// Value-keyed sampling; keys are readouts of circuit.measured_qubits.
std::map<std::uint64_t, std::uint64_t> sample_counts(const Circuit& circuit,
                                                     std::uint64_t shots,
                                                     const NoiseModel& noise,
                                                     int qubit_cap = kDefaultQubitCap);

/// Bitstring-keyed sampling (highest measured qubit leftmost).
ShotResult sample(const Circuit& circuit, std::uint64_t shots, const NoiseModel& noise,
                  int qubit_cap = kDefaultQubitCap);

std::string format_bitstring(std::uint64_t value, std::size_t width);

/// Deterministic seed derivation for independent substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace qdb
