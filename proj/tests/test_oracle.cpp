#include "qdb/oracle.hpp"

#define QDB_ORACLE_TEST_HELPERS
#include "test_util.hpp"

#include "qdb/errors.hpp"
#include "qdb/simulator.hpp"

#include <doctest.h>

#include <set>

using namespace qdb;
using qdbtest::oracle_marked_set;
using qdbtest::random_predicate;
using u64 = std::uint64_t;

namespace {

QromLoader identity_loader(int n, int bits) {
    QromLoader loader(n);
    std::vector<u64> values;
    for (u64 i = 0; i < (u64{1} << n); ++i) {
        values.push_back(i & ((u64{1} << bits) - 1));
    }
    loader.add_column("c", bits, values);
    return loader;
}

// Brute-force reference: the set of rids whose row satisfies the predicate.
std::set<u64> classical_filter(const PredicateNode& pred, const QromLoader& loader) {
    std::set<u64> out;
    std::set<std::string> cols;
    collect_columns(*pred, cols);
    for (u64 rid = 0; rid < loader.rows(); ++rid) {
        // Resolve prefix widths the same way the compiler does.
        std::function<PredicateNode(const PredicateNode&)> widen =
            [&](const PredicateNode& p) -> PredicateNode {
            auto copy = std::make_shared<Predicate>(*p);
            if (!p->column.empty()) {
                copy->column_bits = loader.width_of(p->column);
            }
            copy->children.clear();
            for (const auto& c : p->children) {
                copy->children.push_back(widen(c));
            }
            return copy;
        };
        const auto widened = widen(pred);
        if (eval_predicate(*widened, [&](const std::string& col) {
                return static_cast<double>(loader.value(col, rid));
            })) {
            out.insert(rid);
        }
    }
    return out;
}

} // namespace

TEST_CASE("equality oracle marks exactly the matching basis state") {
    const auto loader = identity_loader(3, 3);
    const auto oracle = compile_oracle(Predicate::eq("c", 5.0), loader, 3, 3);
    const auto probe = oracle_marked_set(oracle);
    CHECK(probe.ancilla_leak < 1e-18);
    CHECK(probe.max_magnitude_error < 1e-12);
    CHECK(probe.marked == std::set<u64>{5});
    CHECK(oracle.classical_predicate(5));
    CHECK_FALSE(oracle.classical_predicate(4));
}

TEST_CASE("full-domain range is a tautology marking everything") {
    const auto loader = identity_loader(3, 3);
    const auto oracle = compile_oracle(Predicate::range("c", 0.0, 7.0), loader, 3, 3);
    const auto probe = oracle_marked_set(oracle);
    std::set<u64> all;
    for (u64 i = 0; i < 8; ++i) {
        all.insert(i);
    }
    CHECK(probe.marked == all);
    CHECK(oracle.circuit.gates.empty()); // pure (dropped) global phase
    CHECK(oracle.global_phase_flip);
}

TEST_CASE("conjunction of range and equality marks the intersection") {
    // Two columns: age (6 bits) and city code (4 bits).
    QromLoader loader(4);
    std::vector<u64> age, city;
    std::mt19937_64 rng(1234);
    for (u64 i = 0; i < 16; ++i) {
        age.push_back(rng() % 64);
        city.push_back(rng() % 16);
    }
    loader.add_column("age", 6, age);
    loader.add_column("city", 4, city);

    const auto pred = Predicate::conj({Predicate::greater("age", 30.0, false),
                                       Predicate::eq("city", 7.0)});
    const auto oracle = compile_oracle(pred, loader, 4, 6);
    const auto probe = oracle_marked_set(oracle);
    CHECK(probe.ancilla_leak < 1e-18);
    CHECK(probe.marked == classical_filter(pred, loader));
}

TEST_CASE("oracle equivalence property: random predicates match brute force") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = trial % 2 == 0 ? 4 : 5;
        QromLoader loader(n);
        std::vector<std::string> columns = {"a", "b"};
        std::vector<int> bits = {4, 5};
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::vector<u64> values;
            for (u64 i = 0; i < (u64{1} << n); ++i) {
                values.push_back(rng() % (u64{1} << bits[c]));
            }
            loader.add_column(columns[c], bits[c], values);
        }
        const auto pred = random_predicate(columns, bits, 2, rng);
        PredicateOracle oracle;
        try {
            oracle = compile_oracle(pred, loader, n, 5);
        } catch (const Error& e) {
            // Random prefixes longer than a column are rejected by contract.
            REQUIRE(e.code() == ErrorCode::WidthOverflow);
            continue;
        }
        const auto probe = oracle_marked_set(oracle);
        REQUIRE(probe.ancilla_leak < 1e-18);
        REQUIRE(probe.max_magnitude_error < 1e-9);
        REQUIRE(probe.marked == classical_filter(pred, loader));
    }
}

TEST_CASE("ancillas are restored on every basis input") {
    const auto loader = identity_loader(3, 3);
    const auto oracle =
        compile_oracle(Predicate::range("c", 2.0, 5.0), loader, 3, 3);
    for (u64 rid = 0; rid < 8; ++rid) {
        StateVector sv(oracle.total_qubits);
        // Prepare |rid> on the rid register.
        sv.amps[0] = 0.0;
        sv.amps[rid] = 1.0;
        for (const auto& g : oracle.circuit.gates) {
            apply_gate(sv, g);
        }
        CHECK(sv.probability(rid) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("value loader writes v(x) conditioned on the rid register") {
    QromLoader loader(3);
    std::vector<u64> values = {1, 4, 2, 7, 0, 3, 6, 5};
    loader.add_column("c", 3, values);
    Circuit c(6);
    loader.emit_load(c, "c", 3);
    for (u64 rid = 0; rid < 8; ++rid) {
        StateVector sv(6);
        sv.amps[0] = 0.0;
        sv.amps[rid] = 1.0;
        for (const auto& g : c.gates) {
            apply_gate(sv, g);
        }
        const u64 expect = rid | (values[rid] << 3);
        REQUIRE(sv.probability(expect) == doctest::Approx(1.0).epsilon(1e-12));
        // Self-inverse: applying the fragment again restores |rid>|0>.
        for (const auto& g : c.gates) {
            apply_gate(sv, g);
        }
        REQUIRE(sv.probability(rid) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (const auto& g : c.gates) {
        CHECK(g.role == GateRole::Load);
    }
}

TEST_CASE("padded domains never mark sentinel rids") {
    // 5 real rows inside an 8-state rid space.
    QromLoader loader(3);
    loader.add_column("c", 3, {0, 1, 2, 3, 4});
    const auto oracle = compile_oracle(Predicate::range("c", 0.0, 7.0), loader, 3, 3);
    const auto probe = oracle_marked_set(oracle);
    CHECK(probe.marked == std::set<u64>{0, 1, 2, 3, 4});
    CHECK_FALSE(oracle.classical_predicate(6));
}

TEST_CASE("controlled oracle phases only when the control is set") {
    const auto loader = identity_loader(3, 3);
    const auto oracle = compile_oracle(Predicate::eq("c", 2.0), loader, 3, 3);
    const int total = oracle.total_qubits + 1;
    const int ctrl = oracle.total_qubits;
    const Circuit controlled = controlled_oracle(oracle, ctrl, total);

    // Control off: the circuit must act as the identity.
    {
        Circuit c(total);
        for (int q = 0; q < 3; ++q) {
            c.append(GateInstance::h(q));
        }
        c.append(controlled);
        const auto sv = run_statevector(c);
        for (u64 i = 0; i < 8; ++i) {
            REQUIRE(sv.amps[i].real() > 0.0);
        }
    }
    // Control on: |2> flips sign.
    {
        Circuit c(total);
        c.append(GateInstance::x(ctrl));
        for (int q = 0; q < 3; ++q) {
            c.append(GateInstance::h(q));
        }
        c.append(controlled);
        const auto sv = run_statevector(c);
        const u64 ctrl_bit = u64{1} << ctrl;
        for (u64 i = 0; i < 8; ++i) {
            REQUIRE((sv.amps[i | ctrl_bit].real() < 0.0) == (i == 2));
        }
    }
}

TEST_CASE("oracle compilation rejects out-of-width constants") {
    const auto loader = identity_loader(3, 3);
    try {
        compile_oracle(Predicate::eq("c", 9.0), loader, 3, 3);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WidthOverflow);
    }
    try {
        compile_oracle(Predicate::eq("c", 2.5), loader, 3, 3);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TypeMismatch);
    }
    try {
        compile_oracle(Predicate::exists(0), loader, 3, 3);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedPredicate);
    }
}

TEST_CASE("oracle compilation enforces the qubit cap") {
    const auto loader = identity_loader(3, 3);
    try {
        compile_oracle(Predicate::range("c", 1.0, 5.0), loader, 3, 3, /*qubit_cap=*/8);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CapacityExceeded);
    }
}
