#include "test_util.hpp"

#include "qdb/errors.hpp"
#include "qdb/schedule.hpp"

#include <doctest.h>

#include <set>

using namespace qdb;

TEST_CASE("independent gates share a layer, dependent ones do not") {
    Circuit c(2);
    c.append(GateInstance::h(0));
    c.append(GateInstance::h(1));
    c.append(GateInstance::cnot(0, 1));
    const auto sched = schedule_layers(c, DeviceModel::ideal());
    REQUIRE(sched.layer_count() == 2);
    CHECK(sched.layers[0] == std::vector<int>{0, 1});
    CHECK(sched.layers[1] == std::vector<int>{2});
}

TEST_CASE("a single gate schedules into one layer") {
    Circuit c(1);
    c.append(GateInstance::h(0));
    CHECK(schedule_layers(c, DeviceModel::ideal()).layer_count() == 1);
}

TEST_CASE("gates on the same qubit serialize") {
    Circuit c(1);
    c.append(GateInstance::x(0));
    c.append(GateInstance::x(0));
    CHECK(schedule_layers(c, DeviceModel::ideal()).layer_count() == 2);
}

TEST_CASE("layer duration is the max gate duration in the layer") {
    DeviceModel d = DeviceModel::ideal();
    d.gate_time_ns[GateKind::H] = 30.0;
    d.gate_time_ns[GateKind::CNOT] = 60.0;
    Circuit c(3);
    c.append(GateInstance::h(0));
    c.append(GateInstance::cnot(1, 2));
    const auto sched = schedule_layers(c, d);
    REQUIRE(sched.layer_count() == 1);
    CHECK(sched.layer_durations_ns[0] == doctest::Approx(60.0));
}

TEST_CASE("missing duration raises UnknownGateDuration") {
    DeviceModel d = DeviceModel::ideal();
    d.gate_time_ns.erase(GateKind::CSWAP);
    Circuit c(3);
    c.append(GateInstance::cswap(0, 1, 2));
    try {
        schedule_layers(c, d);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownGateDuration);
    }
}

TEST_CASE("random circuits schedule into valid ASAP layers") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = qdbtest::random_circuit(5, 60, rng);
        const auto sched = schedule_layers(c, DeviceModel::ideal());

        // Layers partition the gate list.
        std::size_t total = 0;
        for (const auto& layer : sched.layers) {
            total += layer.size();
        }
        REQUIRE(total == c.gates.size());

        // Within a layer, operand sets are pairwise disjoint.
        for (const auto& layer : sched.layers) {
            std::set<int> used;
            for (int g : layer) {
                for (int q : c.gates[static_cast<std::size_t>(g)].operand_qubits()) {
                    REQUIRE(used.insert(q).second);
                }
            }
        }

        // Flattened layer order preserves the per-qubit gate order, which
        // makes it a topological order of the dependency graph.
        std::vector<int> position(c.gates.size());
        int pos = 0;
        for (const auto& layer : sched.layers) {
            for (int g : layer) {
                position[static_cast<std::size_t>(g)] = pos++;
            }
        }
        std::vector<int> last_position(5, -1);
        for (std::size_t g = 0; g < c.gates.size(); ++g) {
            for (int q : c.gates[g].operand_qubits()) {
                REQUIRE(position[g] > last_position[static_cast<std::size_t>(q)]);
                last_position[static_cast<std::size_t>(q)] = position[g];
            }
        }
    }
}
