#pragma once

#include "qdb/gates.hpp"
#include "qdb/simulator.hpp"

#include <cstdint>
#include <vector>

namespace qdb {

/// State preparation for a real vector: a binary tree of controlled Y
/// rotations writes |v|/||v||, then pattern phase flips fix the signs.
/// The register has ceil(log2 d) qubits (min 1); short vectors are
/// zero-padded. Throws ZeroVector on an all-zero input.
Circuit amplitude_encode(const std::vector<double>& v);

struct SwapTestResult {
    double estimate = 0.0; // clamped 2*Pr[0] - 1
    double pr_zero = 0.0;
    std::uint64_t shots = 0;
};

/// Ancilla-controlled register swap; Pr[ancilla=0] = (1 + |<x|y>|^2)/2.
SwapTestResult swap_test(const std::vector<double>& x, const std::vector<double>& y,
                         std::uint64_t shots, const NoiseModel& noise = NoiseModel::disabled(),
                         int qubit_cap = kDefaultQubitCap);

struct SumStatePrep {
    Circuit circuit;
    int good_qubit = 0;
    int rid_bits = 0;
    double v_max = 0.0;
};

/// Prepares (1/sqrt N) sum_x |x> (sqrt(1-v(x)/V) |0> + sqrt(v(x)/V) |1>) on
/// the flag qubit, so Pr[flag=1] = mean(v)/V. Values must lie in [0, V].
SumStatePrep build_sum_state_prep(const std::vector<double>& values, double v_max);

struct AmplitudeEstimate {
    double a_hat = 0.0;
    int phase_bits = 0;
    std::uint64_t shots = 0;
    std::uint64_t modal_outcome = 0;
};

/// Full estimation circuit: preparation, Hadamards on the q-bit phase
/// register, controlled powers of the amplification operator, inverse
/// Fourier transform, phase-register measurement.
Circuit assemble_estimation_circuit(const Circuit& preparation, int good_qubit,
                                    int phase_bits);

/// Canonical phase-estimation amplitude estimation: a q-bit register
/// controls powers of the amplification operator built from the
/// preparation circuit, its inverse, a phase flip on the flag qubit and a
/// reflection about |0...0>; the modal readout y gives
/// a_hat = sin^2(pi y / 2^q).
AmplitudeEstimate amplitude_estimate(const Circuit& preparation, int good_qubit, int phase_bits,
                                     std::uint64_t shots,
                                     const NoiseModel& noise = NoiseModel::disabled(),
                                     int qubit_cap = kDefaultQubitCap);

/// |a_hat - a| <= pi/2^q + pi^2/2^{2q} with probability >= 8/pi^2.
double ae_error_bound(int phase_bits);

struct AggregateEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    AmplitudeEstimate ae;
};

/// SUM(v) = N * V * Pr[flag=1], estimated through amplitude estimation;
/// the attached bound is N * V * ae_error_bound(q).
AggregateEstimate aggregate_sum(const std::vector<double>& values, double v_max, int phase_bits,
                                std::uint64_t shots,
                                const NoiseModel& noise = NoiseModel::disabled(),
                                int qubit_cap = kDefaultQubitCap);

} // namespace qdb
