#include "qdb/grover.hpp"

#include "qdb/errors.hpp"
#include "qdb/qft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdb {

namespace {

using u64 = std::uint64_t;

bool is_power_of_two(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

u64 modal_outcome(const std::map<u64, u64>& counts) {
    u64 best = 0, best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

} // namespace

Circuit build_uniform_superposition(int n, int qubit_cap) {
    if (n < 1 || n > qubit_cap) {
        raise(ErrorCode::CapacityExceeded,
              "superposition width " + std::to_string(n) + " exceeds cap");
    }
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.append(GateInstance::h(q));
    }
    return c;
}

Circuit build_diffusion(int n) {
    if (n < 1) {
        raise(ErrorCode::InvalidCounts, "diffusion needs at least one qubit");
    }
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.append(GateInstance::h(q));
    }
    std::vector<ControlBit> zeros;
    zeros.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        zeros.push_back({q, false});
    }
    c.append(GateInstance::mcz(std::move(zeros)));
    for (int q = 0; q < n; ++q) {
        c.append(GateInstance::h(q));
    }
    return c;
}

std::uint64_t grover_iterations(std::uint64_t n_domain, std::uint64_t m_marked) {
    if (!is_power_of_two(n_domain) || m_marked < 1 || m_marked > n_domain) {
        raise(ErrorCode::InvalidCounts, "need a power-of-two domain and 1 <= M <= N");
    }
    const double ratio = static_cast<double>(n_domain) / static_cast<double>(m_marked);
    const double k = std::floor(std::numbers::pi / 4.0 * std::sqrt(ratio));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

Circuit assemble_grover_circuit(const PredicateOracle& oracle, std::uint64_t k) {
    Circuit c(oracle.total_qubits);
    for (int q = 0; q < oracle.rid_bits; ++q) {
        c.append(GateInstance::h(q));
    }
    const Circuit diffusion = build_diffusion(oracle.rid_bits);
    for (u64 i = 0; i < k; ++i) {
        c.append(oracle.circuit);
        c.append(diffusion);
    }
    for (int q = 0; q < oracle.rid_bits; ++q) {
        c.measured_qubits.push_back(q);
    }
    return c;
}

Circuit assemble_counting_circuit(const PredicateOracle& oracle, int phase_bits) {
    if (phase_bits < 1 || phase_bits > 10) {
        raise(ErrorCode::InvalidCounts, "phase register supports 1..10 bits");
    }
    const int base = oracle.total_qubits;
    const int total = base + phase_bits;
    Circuit c(total);

    // A = uniform superposition over the rid register.
    for (int q = 0; q < oracle.rid_bits; ++q) {
        c.append(GateInstance::h(q));
    }
    for (int j = 0; j < phase_bits; ++j) {
        c.append(GateInstance::h(base + j));
    }

    std::vector<ControlBit> s0_controls;
    for (int q = 0; q < oracle.rid_bits; ++q) {
        s0_controls.push_back({q, false});
    }

    for (int j = 0; j < phase_bits; ++j) {
        const int ctrl = base + j;
        const Circuit c_oracle = controlled_oracle(oracle, ctrl, total);
        std::vector<ControlBit> c_s0 = s0_controls;
        c_s0.push_back({ctrl, true});
        const u64 reps = u64{1} << j;
        for (u64 r = 0; r < reps; ++r) {
            // Q = -A S_0 A^dag S_chi, applied under control of the phase bit.
            c.append(c_oracle);
            for (int q = 0; q < oracle.rid_bits; ++q) {
                c.append(GateInstance::h(q));
            }
            c.append(GateInstance::mcz(c_s0));
            for (int q = 0; q < oracle.rid_bits; ++q) {
                c.append(GateInstance::h(q));
            }
        }
        if (reps % 2 == 1) {
            // The controlled -1 of Q collapses to Z^(2^j) on the phase bit.
            c.append(GateInstance::z(ctrl));
        }
    }
    c.append(embedded(build_inverse_qft(phase_bits), base, total));
    for (int j = 0; j < phase_bits; ++j) {
        c.measured_qubits.push_back(base + j);
    }
    return c;
}

std::uint64_t quantum_count(const PredicateOracle& oracle, int phase_bits, std::uint64_t shots,
                            const NoiseModel& noise, int qubit_cap) {
    const Circuit c = assemble_counting_circuit(oracle, phase_bits);
    if (c.n_qubits > qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "counting circuit exceeds the qubit cap");
    }
    const auto counts = sample_counts(c, shots, noise, qubit_cap);
    const u64 y = modal_outcome(counts);
    const double theta =
        std::numbers::pi * static_cast<double>(y) / static_cast<double>(u64{1} << phase_bits);
    const double a_hat = std::pow(std::sin(theta), 2);
    return static_cast<u64>(std::llround(a_hat * static_cast<double>(oracle.domain())));
}

GroverRun grover_filter(const PredicateOracle& oracle, const GroverOptions& opts) {
    const u64 n_domain = oracle.domain();
    GroverRun run;
    run.shots = opts.shots;

    u64 m = 0;
    if (opts.m_est && *opts.m_est > 0) {
        m = std::min(*opts.m_est, n_domain);
    } else {
        run.used_counting = true;
        m = quantum_count(oracle, opts.count_phase_bits, opts.count_shots, opts.noise,
                          opts.qubit_cap);
        if (m == 0) {
            // Counting was inconclusive; probe with a geometrically growing
            // iteration count before declaring the result set empty.
            const u64 k_cap = grover_iterations(n_domain, 1);
            u64 k = 1;
            u64 round_index = 0;
            NoiseModel noise = opts.noise;
            while (true) {
                noise.seed = mix_seed(opts.noise.seed, 7000 + round_index++);
                const Circuit c = assemble_grover_circuit(oracle, k);
                const auto counts = sample_counts(c, std::max<u64>(32, opts.shots / 16), noise,
                                                  opts.qubit_cap);
                u64 verified = 0, total = 0;
                for (const auto& [rid, count] : counts) {
                    total += count;
                    if (oracle.classical_predicate(rid)) {
                        verified += count;
                        run.raw_hits[rid] += count;
                    }
                }
                if (verified > 0) {
                    run.k = k;
                    run.m_used = 1;
                    run.success_estimate =
                        static_cast<double>(verified) / static_cast<double>(total);
                    return run;
                }
                if (k >= k_cap) {
                    break;
                }
                k = std::max(k + 1, (k * 6 + 4) / 5); // grow by ~6/5
            }
            raise(ErrorCode::ZeroMatches, "counting and probing found no matching rows");
        }
    }

    run.m_used = m;
    run.k = opts.k_override.value_or(grover_iterations(n_domain, m));
    const Circuit c = assemble_grover_circuit(oracle, run.k);
    const auto counts = sample_counts(c, opts.shots, opts.noise, opts.qubit_cap);
    u64 verified = 0;
    for (const auto& [rid, count] : counts) {
        run.raw_hits[rid] += count;
        if (oracle.classical_predicate(rid)) {
            verified += count;
        }
    }
    run.success_estimate = static_cast<double>(verified) / static_cast<double>(opts.shots);
    return run;
}

std::vector<std::uint64_t> equijoin_probe(const PredicateOracle& inner_oracle,
                                          const GroverOptions& opts) {
    std::vector<u64> verified;
    std::set<u64> seen;
    int stall = 0;
    NoiseModel noise = opts.noise;
    for (int round = 0; round < 64 && stall < 3; ++round) {
        noise.seed = mix_seed(opts.noise.seed, 9000 + static_cast<u64>(round));
        GroverOptions round_opts = opts;
        round_opts.noise = noise;
        GroverRun run;
        try {
            run = grover_filter(inner_oracle, round_opts);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ZeroMatches) {
                break;
            }
            throw;
        }
        bool grew = false;
        for (const auto& [rid, count] : run.raw_hits) {
            if (inner_oracle.classical_predicate(rid) && seen.insert(rid).second) {
                verified.push_back(rid);
                grew = true;
            }
        }
        stall = grew ? 0 : stall + 1;
        if (opts.m_est && seen.size() >= *opts.m_est) {
            break;
        }
    }
    std::sort(verified.begin(), verified.end());
    return verified;
}

} // namespace qdb
