#pragma once

// Shared helpers for the test suites: an independent dense-matrix gate
// reference (textbook definitions, no shared code with the statevector
// kernels), random circuit/state generators and small statistics utilities.

#include "qdb/gates.hpp"
#include "qdb/statevector.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace qdbtest {

using qdb::Amplitude;
using CMat = std::vector<std::vector<Amplitude>>;
using u64 = std::uint64_t;

inline CMat dense_identity(u64 dim) {
    CMat m(dim, std::vector<Amplitude>(dim, 0.0));
    for (u64 i = 0; i < dim; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline CMat dense_mul(const CMat& a, const CMat& b) {
    const u64 dim = a.size();
    CMat out(dim, std::vector<Amplitude>(dim, 0.0));
    for (u64 i = 0; i < dim; ++i) {
        for (u64 k = 0; k < dim; ++k) {
            if (a[i][k] == Amplitude{0.0, 0.0}) {
                continue;
            }
            for (u64 j = 0; j < dim; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

// Column-by-column construction from the textbook gate definitions.
inline CMat dense_gate_matrix(const qdb::GateInstance& g, int n) {
    const u64 dim = u64{1} << n;
    CMat u(dim, std::vector<Amplitude>(dim, 0.0));

    auto controls_match = [&](u64 x) {
        for (const auto& c : g.controls) {
            const bool bit = (x >> c.qubit) & 1u;
            if (bit != c.positive) {
                return false;
            }
        }
        return true;
    };

    Amplitude m00{}, m01{}, m10{}, m11{};
    const double half = g.theta / 2.0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
        case qdb::GateKind::H:
            m00 = inv_sqrt2; m01 = inv_sqrt2; m10 = inv_sqrt2; m11 = -inv_sqrt2;
            break;
        case qdb::GateKind::X:
        case qdb::GateKind::CNOT:
        case qdb::GateKind::MCX:
            m00 = 0; m01 = 1; m10 = 1; m11 = 0;
            break;
        case qdb::GateKind::Z:
            m00 = 1; m01 = 0; m10 = 0; m11 = -1;
            break;
        case qdb::GateKind::RX:
            m00 = std::cos(half); m01 = Amplitude(0, -std::sin(half));
            m10 = Amplitude(0, -std::sin(half)); m11 = std::cos(half);
            break;
        case qdb::GateKind::RY:
            m00 = std::cos(half); m01 = -std::sin(half);
            m10 = std::sin(half); m11 = std::cos(half);
            break;
        case qdb::GateKind::RZ:
            m00 = std::exp(Amplitude(0, -half)); m11 = std::exp(Amplitude(0, half));
            break;
        default:
            break;
    }

    for (u64 x = 0; x < dim; ++x) {
        if (!controls_match(x)) {
            u[x][x] = 1.0;
            continue;
        }
        switch (g.kind) {
            case qdb::GateKind::H:
            case qdb::GateKind::X:
            case qdb::GateKind::Z:
            case qdb::GateKind::RX:
            case qdb::GateKind::RY:
            case qdb::GateKind::RZ:
            case qdb::GateKind::CNOT:
            case qdb::GateKind::MCX: {
                const u64 tbit = u64{1} << g.targets[0];
                const bool b = (x & tbit) != 0;
                u[x & ~tbit][x] += b ? m01 : m00;
                u[x | tbit][x] += b ? m11 : m10;
                break;
            }
            case qdb::GateKind::CZ: {
                const u64 ab = (u64{1} << g.targets[0]) | (u64{1} << g.targets[1]);
                u[x][x] = ((x & ab) == ab) ? -1.0 : 1.0;
                break;
            }
            case qdb::GateKind::MCZ:
                u[x][x] = -1.0;
                break;
            case qdb::GateKind::SWAP:
            case qdb::GateKind::CSWAP: {
                const int a = g.targets[0], b = g.targets[1];
                const u64 ba = (x >> a) & 1u, bb = (x >> b) & 1u;
                u64 y = x & ~((u64{1} << a) | (u64{1} << b));
                y |= ba << b;
                y |= bb << a;
                u[y][x] = 1.0;
                break;
            }
        }
    }
    return u;
}

inline CMat dense_circuit_matrix(const qdb::Circuit& c) {
    CMat u = dense_identity(u64{1} << c.n_qubits);
    for (const auto& g : c.gates) {
        u = dense_mul(dense_gate_matrix(g, c.n_qubits), u);
    }
    return u;
}

inline qdb::StateVector random_state(int n, std::mt19937_64& rng) {
    qdb::StateVector sv(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double norm = 0.0;
    for (auto& a : sv.amps) {
        a = Amplitude(gauss(rng), gauss(rng));
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : sv.amps) {
        a /= norm;
    }
    return sv;
}

inline qdb::GateInstance random_gate(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind_pick(0, 11);
    std::uniform_int_distribution<int> qubit_pick(0, n - 1);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    auto distinct = [&](int count) {
        std::vector<int> qs;
        while (static_cast<int>(qs.size()) < count) {
            int q = qubit_pick(rng);
            bool fresh = true;
            for (int other : qs) {
                fresh = fresh && other != q;
            }
            if (fresh) {
                qs.push_back(q);
            }
        }
        return qs;
    };
    switch (static_cast<qdb::GateKind>(kind_pick(rng))) {
        case qdb::GateKind::H: return qdb::GateInstance::h(qubit_pick(rng));
        case qdb::GateKind::X: return qdb::GateInstance::x(qubit_pick(rng));
        case qdb::GateKind::Z: return qdb::GateInstance::z(qubit_pick(rng));
        case qdb::GateKind::RX: return qdb::GateInstance::rx(qubit_pick(rng), angle(rng));
        case qdb::GateKind::RY: return qdb::GateInstance::ry(qubit_pick(rng), angle(rng));
        case qdb::GateKind::RZ: return qdb::GateInstance::rz(qubit_pick(rng), angle(rng));
        case qdb::GateKind::CNOT: {
            auto qs = distinct(2);
            return qdb::GateInstance::cnot(qs[0], qs[1]);
        }
        case qdb::GateKind::CZ: {
            auto qs = distinct(2);
            return qdb::GateInstance::cz(qs[0], qs[1]);
        }
        case qdb::GateKind::SWAP: {
            auto qs = distinct(2);
            return qdb::GateInstance::swap(qs[0], qs[1]);
        }
        case qdb::GateKind::CSWAP: {
            auto qs = distinct(3);
            return qdb::GateInstance::cswap(qs[0], qs[1], qs[2]);
        }
        case qdb::GateKind::MCX: {
            auto qs = distinct(std::min(n, 3));
            std::vector<qdb::ControlBit> ctrls;
            for (std::size_t i = 1; i < qs.size(); ++i) {
                ctrls.push_back({qs[i], rng() % 2 == 0});
            }
            if (ctrls.empty()) {
                return qdb::GateInstance::x(qs[0]);
            }
            return qdb::GateInstance::mcx(ctrls, qs[0]);
        }
        case qdb::GateKind::MCZ: {
            auto qs = distinct(std::min(n, 3));
            std::vector<qdb::ControlBit> ctrls;
            for (int q : qs) {
                ctrls.push_back({q, rng() % 2 == 0});
            }
            return qdb::GateInstance::mcz(ctrls);
        }
    }
    return qdb::GateInstance::h(0);
}

inline qdb::Circuit random_circuit(int n, int gate_count, std::mt19937_64& rng) {
    qdb::Circuit c(n);
    for (int i = 0; i < gate_count; ++i) {
        c.append(random_gate(n, rng));
    }
    return c;
}

} // namespace qdbtest

// ---------------------------------------------------------------------------
// Oracle-side helpers (pulled in lazily; only translation units that include
// qdb/oracle.hpp before this header see them).

#ifdef QDB_ORACLE_TEST_HELPERS

#include "qdb/oracle.hpp"
#include "qdb/simulator.hpp"

#include <set>

namespace qdbtest {

/// Applies the oracle to the uniform rid superposition and decodes the
/// phase-flipped basis states. Also asserts (by return flag) that no
/// amplitude leaked outside the ancilla=0 subspace.
struct MarkedSetProbe {
    std::set<u64> marked;
    double ancilla_leak = 0.0;
    double max_magnitude_error = 0.0;
};

inline MarkedSetProbe oracle_marked_set(const qdb::PredicateOracle& oracle) {
    qdb::Circuit c(oracle.total_qubits);
    for (int q = 0; q < oracle.rid_bits; ++q) {
        c.append(qdb::GateInstance::h(q));
    }
    c.append(oracle.circuit);
    const auto sv = qdb::run_statevector(c);

    MarkedSetProbe probe;
    const u64 n_domain = u64{1} << oracle.rid_bits;
    const double expected = 1.0 / std::sqrt(static_cast<double>(n_domain));
    for (u64 i = 0; i < sv.dim(); ++i) {
        if (i >= n_domain) {
            probe.ancilla_leak += std::norm(sv.amps[i]);
            continue;
        }
        const double re = sv.amps[i].real();
        probe.max_magnitude_error =
            std::max(probe.max_magnitude_error, std::abs(std::abs(re) - expected));
        probe.max_magnitude_error =
            std::max(probe.max_magnitude_error, std::abs(sv.amps[i].imag()));
        // (-1)^{f} with a possibly dropped global -1.
        const bool flipped = re < 0.0;
        if (flipped != oracle.global_phase_flip) {
            probe.marked.insert(i);
        }
    }
    return probe;
}

/// Random predicate tree over the given columns (uint widths in `bits`).
inline qdb::PredicateNode random_predicate(const std::vector<std::string>& columns,
                                           const std::vector<int>& bits, int depth,
                                           std::mt19937_64& rng) {
    const auto pick_col = [&] {
        const auto i = rng() % columns.size();
        return std::pair<std::string, int>(columns[i], bits[i]);
    };
    if (depth == 0 || rng() % 3 == 0) {
        const auto [col, w] = pick_col();
        const u64 max_value = (u64{1} << w) - 1;
        switch (rng() % 4) {
            case 0:
                return qdb::Predicate::eq(col, static_cast<double>(rng() % (max_value + 1)));
            case 1: {
                u64 lo = rng() % (max_value + 1);
                u64 hi = rng() % (max_value + 1);
                if (lo > hi) {
                    std::swap(lo, hi);
                }
                return qdb::Predicate::range(col, static_cast<double>(lo),
                                             static_cast<double>(hi));
            }
            case 2: {
                const bool or_equal = rng() % 2 == 0;
                return rng() % 2 == 0
                           ? qdb::Predicate::greater(
                                 col, static_cast<double>(rng() % (max_value + 1)), or_equal)
                           : qdb::Predicate::less(
                                 col, static_cast<double>(rng() % (max_value + 1)), or_equal);
            }
            default: {
                const int len = 1 + static_cast<int>(rng() % static_cast<u64>(w));
                std::string pattern;
                for (int i = 0; i < len; ++i) {
                    pattern.push_back(rng() % 2 ? '1' : '0');
                }
                return qdb::Predicate::prefix_like(col, pattern);
            }
        }
    }
    switch (rng() % 3) {
        case 0:
            return qdb::Predicate::negate(random_predicate(columns, bits, depth - 1, rng));
        case 1:
            return qdb::Predicate::conj({random_predicate(columns, bits, depth - 1, rng),
                                         random_predicate(columns, bits, depth - 1, rng)});
        default:
            return qdb::Predicate::disj({random_predicate(columns, bits, depth - 1, rng),
                                         random_predicate(columns, bits, depth - 1, rng)});
    }
}

} // namespace qdbtest

#endif // QDB_ORACLE_TEST_HELPERS
