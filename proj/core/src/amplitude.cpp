#include "qdb/amplitude.hpp"

#include "qdb/errors.hpp"
#include "qdb/qft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdb {

namespace {

using u64 = std::uint64_t;

int register_width(std::size_t dim) {
    int q = 1;
    while ((std::size_t{1} << q) < dim) {
        ++q;
    }
    return q;
}

void append_mcry(Circuit& c, const std::vector<ControlBit>& controls, int target, double theta) {
    if (controls.empty()) {
        c.append(GateInstance::ry(target, theta));
        return;
    }
    // Controlled rotation by conjugation: RY(t/2) MCX RY(-t/2) MCX equals
    // RY(t) when the controls fire and the identity otherwise.
    c.append(GateInstance::ry(target, theta / 2.0));
    c.append(GateInstance::mcx(controls, target));
    c.append(GateInstance::ry(target, -theta / 2.0));
    c.append(GateInstance::mcx(controls, target));
}

// Rotation tree over subtree masses; prefix holds the already-fixed high
// bits (qubits q-1 .. q-level).
void encode_subtree(Circuit& c, const std::vector<double>& weights, int q, int level, u64 prefix,
                    double subtree_mass) {
    if (level == q || subtree_mass <= 0.0) {
        return;
    }
    const int target = q - 1 - level;
    const u64 block = u64{1} << (q - level);     // indices covered by this node
    const u64 base = prefix << (q - level);
    double left = 0.0;
    for (u64 i = 0; i < block / 2; ++i) {
        left += weights[base + i];
    }
    const double right = subtree_mass - left;
    const double theta = 2.0 * std::atan2(std::sqrt(std::max(right, 0.0)),
                                          std::sqrt(std::max(left, 0.0)));
    if (theta != 0.0) {
        std::vector<ControlBit> controls;
        for (int k = 0; k < level; ++k) {
            const int ctrl_qubit = q - 1 - k;
            controls.push_back({ctrl_qubit, ((prefix >> (level - 1 - k)) & 1u) != 0});
        }
        append_mcry(c, controls, target, theta);
    }
    encode_subtree(c, weights, q, level + 1, prefix << 1, left);
    encode_subtree(c, weights, q, level + 1, (prefix << 1) | 1u, right);
}

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

Circuit amplitude_encode(const std::vector<double>& v) {
    if (v.empty()) {
        raise(ErrorCode::ZeroVector, "cannot encode an empty vector");
    }
    double norm_sq = 0.0;
    for (double x : v) {
        norm_sq += x * x;
    }
    if (norm_sq == 0.0) {
        raise(ErrorCode::ZeroVector, "cannot encode the zero vector");
    }
    const int q = register_width(v.size());
    const u64 dim = u64{1} << q;
    std::vector<double> weights(dim, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        weights[i] = v[i] * v[i] / norm_sq;
    }

    Circuit c(q);
    encode_subtree(c, weights, q, 0, 0, 1.0);
    // Sign flips: one pattern phase per negative amplitude.
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0) {
            std::vector<ControlBit> pattern;
            for (int b = 0; b < q; ++b) {
                pattern.push_back({b, ((i >> b) & 1u) != 0});
            }
            c.append(GateInstance::mcz(std::move(pattern)));
        }
    }
    return c;
}

SwapTestResult swap_test(const std::vector<double>& x, const std::vector<double>& y,
                         std::uint64_t shots, const NoiseModel& noise, int qubit_cap) {
    if (x.size() != y.size()) {
        raise(ErrorCode::DimensionMismatch, "swap test needs equal dimensions");
    }
    const Circuit ax = amplitude_encode(x);
    const Circuit ay = amplitude_encode(y);
    const int q = ax.n_qubits;
    const int anc = 2 * q;
    const int total = 2 * q + 1;
    if (total > qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "swap test circuit exceeds the qubit cap");
    }
    Circuit c(total);
    c.append(embedded(ax, 0, total));
    c.append(embedded(ay, q, total));
    c.append(GateInstance::h(anc));
    for (int i = 0; i < q; ++i) {
        c.append(GateInstance::cswap(anc, i, q + i));
    }
    c.append(GateInstance::h(anc));
    c.measured_qubits = {anc};

    const auto counts = sample_counts(c, shots, noise, qubit_cap);
    const u64 zeros = counts.count(0) ? counts.at(0) : 0;
    SwapTestResult result;
    result.shots = shots;
    result.pr_zero = static_cast<double>(zeros) / static_cast<double>(shots);
    result.estimate = std::clamp(2.0 * result.pr_zero - 1.0, 0.0, 1.0);
    return result;
}

SumStatePrep build_sum_state_prep(const std::vector<double>& values, double v_max) {
    const std::size_t n_rows = values.size();
    if (n_rows == 0 || (n_rows & (n_rows - 1)) != 0) {
        raise(ErrorCode::InvalidCounts, "value count must be a power of two");
    }
    if (v_max <= 0.0) {
        raise(ErrorCode::ValueOutOfBounds, "V_max must be positive");
    }
    for (double v : values) {
        if (v < 0.0 || v > v_max) {
            raise(ErrorCode::ValueOutOfBounds, "values must lie in [0, V_max]");
        }
    }
    int n = 0;
    while ((std::size_t{1} << n) < n_rows) {
        ++n;
    }
    n = std::max(n, 1);

    SumStatePrep prep;
    prep.rid_bits = n;
    prep.good_qubit = n;
    prep.v_max = v_max;
    prep.circuit = Circuit(n + 1);
    for (int q = 0; q < n; ++q) {
        prep.circuit.append(GateInstance::h(q));
    }
    for (u64 x = 0; x < n_rows; ++x) {
        const double ratio = values[x] / v_max;
        if (ratio <= 0.0) {
            continue;
        }
        const double theta = 2.0 * std::asin(std::sqrt(std::min(ratio, 1.0)));
        std::vector<ControlBit> pattern;
        for (int b = 0; b < n; ++b) {
            pattern.push_back({b, ((x >> b) & 1u) != 0});
        }
        append_mcry(prep.circuit, pattern, prep.good_qubit, theta);
    }
    return prep;
}

Circuit assemble_estimation_circuit(const Circuit& preparation, int good_qubit,
                                    int phase_bits) {
    if (phase_bits < 1 || phase_bits > 10) {
        raise(ErrorCode::InvalidCounts, "phase register supports 1..10 bits");
    }
    const int base = preparation.n_qubits;
    const int total = base + phase_bits;
    const Circuit prep = embedded(preparation, 0, total);
    const Circuit unprep = prep.inverse();

    Circuit c(total);
    c.append(prep);
    for (int j = 0; j < phase_bits; ++j) {
        c.append(GateInstance::h(base + j));
    }
    std::vector<ControlBit> s0;
    for (int q = 0; q < base; ++q) {
        s0.push_back({q, false});
    }
    for (int j = 0; j < phase_bits; ++j) {
        const int ctrl = base + j;
        std::vector<ControlBit> c_s0 = s0;
        c_s0.push_back({ctrl, true});
        const u64 reps = u64{1} << j;
        for (u64 r = 0; r < reps; ++r) {
            // Q = -A S_0 A^dag S_chi with S_chi the flag-qubit phase flip.
            c.append(GateInstance::cz(ctrl, good_qubit));
            c.append(unprep);
            c.append(GateInstance::mcz(c_s0));
            c.append(prep);
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

AmplitudeEstimate amplitude_estimate(const Circuit& preparation, int good_qubit, int phase_bits,
                                     std::uint64_t shots, const NoiseModel& noise,
                                     int qubit_cap) {
    const Circuit c = assemble_estimation_circuit(preparation, good_qubit, phase_bits);
    if (c.n_qubits > qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "estimation circuit exceeds the qubit cap");
    }
    const auto counts = sample_counts(c, shots, noise, qubit_cap);
    AmplitudeEstimate est;
    est.phase_bits = phase_bits;
    est.shots = shots;
    est.modal_outcome = modal_outcome(counts);
    const double theta = std::numbers::pi * static_cast<double>(est.modal_outcome) /
                         static_cast<double>(u64{1} << phase_bits);
    est.a_hat = std::pow(std::sin(theta), 2);
    return est;
}

double ae_error_bound(int phase_bits) {
    const double scale = static_cast<double>(u64{1} << phase_bits);
    return std::numbers::pi / scale +
           std::numbers::pi * std::numbers::pi / (scale * scale);
}

AggregateEstimate aggregate_sum(const std::vector<double>& values, double v_max, int phase_bits,
                                std::uint64_t shots, const NoiseModel& noise, int qubit_cap) {
    const SumStatePrep prep = build_sum_state_prep(values, v_max);
    AggregateEstimate out;
    out.ae = amplitude_estimate(prep.circuit, prep.good_qubit, phase_bits, shots, noise,
                                qubit_cap);
    const double scale = static_cast<double>(values.size()) * v_max;
    out.value = scale * out.ae.a_hat;
    out.error_bound = scale * ae_error_bound(phase_bits);
    return out;
}

} // namespace qdb
