#pragma once

#include "qdb/oracle.hpp"
#include "qdb/simulator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace qdb {

/// H on every qubit: all 2^n amplitudes equal 2^{-n/2}.
Circuit build_uniform_superposition(int n, int qubit_cap = kDefaultQubitCap);

/// H^n . MCZ-on-|0...0> . H^n (2n+1 gates); equal to +-(2|s><s| - I).
Circuit build_diffusion(int n);

/// max(1, floor((pi/4) sqrt(N/M))). N must be a power of two, 1 <= M <= N.
std::uint64_t grover_iterations(std::uint64_t n_domain, std::uint64_t m_marked);

/// Amplification circuit: uniform superposition on the rid register, then
/// k rounds of oracle + diffusion. Measures the rid register.
Circuit assemble_grover_circuit(const PredicateOracle& oracle, std::uint64_t k);

/// Phase-estimation circuit over the walk operator of the oracle's uniform
/// search space; measuring the phase register estimates M/N.
Circuit assemble_counting_circuit(const PredicateOracle& oracle, int phase_bits);

struct GroverOptions {
    std::uint64_t shots = kDefaultShots;
    std::optional<std::uint64_t> m_est;       // matched-count estimate, if known
    std::optional<std::uint64_t> k_override;  // robust variants pick their own k
    int count_phase_bits = 5;
    std::uint64_t count_shots = 128;
    NoiseModel noise = NoiseModel::disabled();
    int qubit_cap = kDefaultQubitCap;
};

struct GroverRun {
    std::uint64_t k = 1;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> raw_hits; // measured rid multiset
    double success_estimate = 0.0;                   // verified-marked fraction
    std::uint64_t m_used = 0;                        // M that chose k
    bool used_counting = false;
};

/// One amplified sampling batch. When no matched-count estimate is given,
/// quantum counting runs first; a zero count falls back to the exponential
/// probe schedule and, if that also finds nothing, throws ZeroMatches.
GroverRun grover_filter(const PredicateOracle& oracle, const GroverOptions& opts);

/// Amplitude-estimation count of the oracle's marked set:
/// round(N * sin^2(pi y / 2^q)) from the modal phase readout y.
std::uint64_t quantum_count(const PredicateOracle& oracle, int phase_bits, std::uint64_t shots,
                            const NoiseModel& noise = NoiseModel::disabled(),
                            int qubit_cap = kDefaultQubitCap);

/// Index probe for joins: collects the verified rid set of the inner oracle
/// by repeated amplified rounds until three consecutive rounds add nothing
/// (or the verified count reaches the estimate). An estimated-empty result
/// set returns {} instead of throwing.
std::vector<std::uint64_t> equijoin_probe(const PredicateOracle& inner_oracle,
                                          const GroverOptions& opts);

} // namespace qdb
