#pragma once

#include "qdb/simulator.hpp"

#include <cstdint>
#include <vector>

namespace qdb {

struct MinFindOptions {
    std::uint64_t seed = 0;
    std::uint64_t round_shots = 32;
    int repetitions = 3;          // independent amplified runs, best kept
    int certify_phase_bits = 4;   // zero-improver check precision
    NoiseModel noise = NoiseModel::disabled();
    int qubit_cap = kDefaultQubitCap;
};

struct MinFindResult {
    std::uint64_t min_rid = 0;
    std::uint64_t min_value = 0;
    std::vector<std::uint64_t> candidate_trail;              // all incumbents, all runs
    std::vector<std::vector<std::uint64_t>> run_trails;      // per-run adoption order
    std::uint64_t grover_iterations_used = 0;
    int threshold_updates = 0;
};

/// Iterative threshold search for the minimum: keep an incumbent, search
/// for strictly smaller values with a comparator oracle on a growing
/// iteration schedule, adopt improvements, and stop when a counting check
/// estimates zero improvers or the cumulative budget of ceil(22.5 sqrt(N))
/// iterations per run is spent. The best incumbent across the repetitions
/// is returned; the incumbent value never increases within a run.
MinFindResult durr_hoyer_min(const std::vector<std::uint64_t>& values, int bits,
                             const MinFindOptions& opts = {});

} // namespace qdb
