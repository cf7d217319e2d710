#include "qdb/simulator.hpp"

#include "qdb/errors.hpp"
#include "qdb/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <unordered_map>

namespace qdb {

namespace {

using u64 = std::uint64_t;

std::vector<int> effective_measured(const Circuit& circuit) {
    if (!circuit.measured_qubits.empty()) {
        return circuit.measured_qubits;
    }
    std::vector<int> all(static_cast<std::size_t>(circuit.n_qubits));
    for (int q = 0; q < circuit.n_qubits; ++q) {
        all[static_cast<std::size_t>(q)] = q;
    }
    return all;
}

u64 draw_from(const std::vector<double>& cumulative, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, cumulative.back());
    const double r = uni(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) {
        --it;
    }
    return static_cast<u64>(it - cumulative.begin());
}

std::vector<double> cumulative_of(const std::vector<double>& dist) {
    std::vector<double> cum(dist.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc += dist[i];
        cum[i] = acc;
    }
    return cum;
}

// One fault to inject right after a given gate has been applied.
struct FaultEvent {
    int after_gate;
    int qubit;
    int pauli; // 1 = X, 2 = Y, 3 = Z
    friend bool operator==(const FaultEvent&, const FaultEvent&) = default;
};

struct TrajectoryKey {
    std::string bytes;
    bool operator==(const TrajectoryKey& o) const { return bytes == o.bytes; }
};

struct TrajectoryKeyHash {
    std::size_t operator()(const TrajectoryKey& k) const {
        return std::hash<std::string>{}(k.bytes);
    }
};

TrajectoryKey key_of(const std::vector<FaultEvent>& events) {
    std::string bytes;
    bytes.reserve(events.size() * 9);
    for (const auto& e : events) {
        for (int i = 0; i < 4; ++i) {
            bytes.push_back(static_cast<char>((e.after_gate >> (8 * i)) & 0xff));
        }
        for (int i = 0; i < 4; ++i) {
            bytes.push_back(static_cast<char>((e.qubit >> (8 * i)) & 0xff));
        }
        bytes.push_back(static_cast<char>(e.pauli));
    }
    return {std::move(bytes)};
}

// Finishes a trajectory from a shared prefix: `state` has gates
// [0, next_gate) applied and no faults yet; events are sorted by position.
std::vector<double> finish_trajectory(StateVector state, const Circuit& circuit,
                                      std::size_t next_gate,
                                      const std::vector<FaultEvent>& events,
                                      const std::vector<int>& measured) {
    std::size_t next = 0;
    while (next < events.size() && events[next].after_gate < static_cast<int>(next_gate)) {
        apply_pauli(state, events[next].qubit, events[next].pauli);
        ++next;
    }
    for (std::size_t g = next_gate; g < circuit.gates.size(); ++g) {
        apply_gate_unchecked(state, circuit.gates[g]);
        while (next < events.size() && events[next].after_gate == static_cast<int>(g)) {
            apply_pauli(state, events[next].qubit, events[next].pauli);
            ++next;
        }
    }
    return measured_distribution(state, measured);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    u64 x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

NoiseModel NoiseModel::disabled(std::uint64_t seed) {
    NoiseModel n;
    n.device = DeviceModel::ideal();
    n.enabled = false;
    n.seed = seed;
    return n;
}

NoiseModel NoiseModel::from_device(const DeviceModel& device, std::uint64_t seed) {
    NoiseModel n;
    n.device = device;
    n.seed = seed;
    n.enabled = false;
    for (const auto& [kind, eps] : device.gate_error) {
        if (eps > 0.0) {
            n.enabled = true;
        }
    }
    return n;
}

StateVector run_statevector(const Circuit& circuit, int qubit_cap) {
    StateVector state(circuit.n_qubits, qubit_cap);
    for (const auto& gate : circuit.gates) {
        // Gates were validated when appended to the circuit.
        apply_gate_unchecked(state, gate);
    }
    return state;
}

std::vector<double> measured_distribution(const StateVector& state,
                                          const std::vector<int>& measured) {
    std::vector<int> qubits = measured;
    if (qubits.empty()) {
        for (int q = 0; q < state.n_qubits; ++q) {
            qubits.push_back(q);
        }
    }
    std::vector<double> dist(u64{1} << qubits.size(), 0.0);
    const u64 dim = state.dim();
    for (u64 i = 0; i < dim; ++i) {
        const double p = std::norm(state.amps[i]);
        if (p == 0.0) {
            continue;
        }
        u64 key = 0;
        for (std::size_t b = 0; b < qubits.size(); ++b) {
            key |= ((i >> qubits[b]) & 1u) << b;
        }
        dist[key] += p;
    }
    return dist;
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const Circuit& circuit, std::uint64_t shots,
                                                     const NoiseModel& noise, int qubit_cap) {
    if (shots < 1) {
        raise(ErrorCode::InvalidCounts, "shots must be >= 1");
    }
    const std::vector<int> measured = effective_measured(circuit);
    std::map<u64, u64> counts;

    if (!noise.enabled) {
        const StateVector state = run_statevector(circuit, qubit_cap);
        const auto cum = cumulative_of(measured_distribution(state, measured));
        std::mt19937_64 rng(mix_seed(noise.seed, 0));
        for (u64 s = 0; s < shots; ++s) {
            ++counts[draw_from(cum, rng)];
        }
        return counts;
    }

    // Stochastic fault trajectories. Shots whose sampled fault pattern is
    // empty share the cached ideal distribution; faulted patterns are
    // re-simulated (and memoized, since single-fault patterns repeat).
    const LayerSchedule sched = schedule_layers(circuit, noise.device);
    std::vector<double> p_deph(sched.layer_count());
    std::vector<int> layer_last_gate(sched.layer_count(), -1);
    for (std::size_t k = 0; k < sched.layer_count(); ++k) {
        p_deph[k] = 1.0 - std::exp(-sched.layer_durations_ns[k] / noise.device.t2_eff_ns);
        for (int g : sched.layers[k]) {
            layer_last_gate[k] = std::max(layer_last_gate[k], g);
        }
    }
    std::vector<double> gate_eps(circuit.gates.size());
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        gate_eps[g] = noise.device.error_for(circuit.gates[g].kind);
    }

    std::shared_ptr<const std::vector<double>> ideal_cum;
    auto ideal = [&]() {
        if (!ideal_cum) {
            const StateVector state = run_statevector(circuit, qubit_cap);
            ideal_cum = std::make_shared<const std::vector<double>>(
                cumulative_of(measured_distribution(state, measured)));
        }
        return ideal_cum;
    };

    // Pass 1: sample every shot's fault pattern; fault-free shots draw from
    // the ideal distribution straight away, faulted shots are queued with
    // their rng state so trajectories can be re-simulated in an order that
    // shares the common no-fault prefix.
    struct PendingShot {
        std::vector<FaultEvent> events;
        TrajectoryKey key;
        std::mt19937_64 rng;
    };
    std::vector<PendingShot> pending;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (u64 s = 0; s < shots; ++s) {
        std::mt19937_64 rng(mix_seed(noise.seed, s + 1));
        std::vector<FaultEvent> events;
        for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
            if (gate_eps[g] <= 0.0 || uni(rng) >= gate_eps[g]) {
                continue;
            }
            const auto operands = circuit.gates[g].operand_qubits();
            // Uniform non-identity Pauli string over the operand qubits.
            const u64 strings = (u64{1} << (2 * operands.size())) - 1;
            u64 r = 1 + static_cast<u64>(uni(rng) * static_cast<double>(strings));
            r = std::min(r, strings);
            for (std::size_t q = 0; q < operands.size(); ++q) {
                const int pauli = static_cast<int>((r >> (2 * q)) & 3u);
                if (pauli != 0) {
                    events.push_back({static_cast<int>(g), operands[q], pauli});
                }
            }
        }
        for (std::size_t k = 0; k < sched.layer_count(); ++k) {
            if (p_deph[k] > 0.0 && uni(rng) < p_deph[k]) {
                const int q = static_cast<int>(uni(rng) * circuit.n_qubits) % circuit.n_qubits;
                events.push_back({layer_last_gate[k], q, 3});
            }
        }
        if (events.empty()) {
            ++counts[draw_from(*ideal(), rng)];
            continue;
        }
        std::sort(events.begin(), events.end(), [](const FaultEvent& a, const FaultEvent& b) {
            return a.after_gate < b.after_gate;
        });
        TrajectoryKey key = key_of(events);
        pending.push_back({std::move(events), std::move(key), rng});
    }

    // Pass 2: advance one rolling prefix state to each first-fault position
    // (ascending), fork it per distinct pattern and finish the suffix.
    std::sort(pending.begin(), pending.end(), [](const PendingShot& a, const PendingShot& b) {
        if (a.events.front().after_gate != b.events.front().after_gate) {
            return a.events.front().after_gate < b.events.front().after_gate;
        }
        return a.key.bytes < b.key.bytes;
    });
    std::unordered_map<TrajectoryKey, std::shared_ptr<const std::vector<double>>,
                       TrajectoryKeyHash>
        cache;
    constexpr std::size_t kCacheCap = 8192;
    StateVector prefix(circuit.n_qubits, qubit_cap);
    std::size_t prefix_pos = 0; // gates [0, prefix_pos) are applied
    for (auto& shot : pending) {
        auto it = cache.find(shot.key);
        std::shared_ptr<const std::vector<double>> cum;
        if (it != cache.end()) {
            cum = it->second;
        } else {
            const auto first_fault =
                static_cast<std::size_t>(shot.events.front().after_gate);
            while (prefix_pos <= first_fault) {
                apply_gate_unchecked(prefix, circuit.gates[prefix_pos]);
                ++prefix_pos;
            }
            cum = std::make_shared<const std::vector<double>>(cumulative_of(
                finish_trajectory(prefix, circuit, prefix_pos, shot.events, measured)));
            if (cache.size() < kCacheCap) {
                cache.emplace(shot.key, cum);
            }
        }
        ++counts[draw_from(*cum, shot.rng)];
    }
    return counts;
}

std::string format_bitstring(std::uint64_t value, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t b = 0; b < width; ++b) {
        if ((value >> b) & 1u) {
            s[width - 1 - b] = '1';
        }
    }
    return s;
}

ShotResult sample(const Circuit& circuit, std::uint64_t shots, const NoiseModel& noise,
                  int qubit_cap) {
    const auto measured = effective_measured(circuit);
    ShotResult result;
    result.shots = shots;
    for (const auto& [value, count] : sample_counts(circuit, shots, noise, qubit_cap)) {
        result.counts[format_bitstring(value, measured.size())] = count;
    }
    return result;
}

} // namespace qdb
