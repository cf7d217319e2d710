#include "test_util.hpp"

#include "qdb/errors.hpp"
#include "qdb/simulator.hpp"
#include "qdb/statevector.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qdb;
using qdbtest::dense_gate_matrix;
using qdbtest::random_circuit;
using qdbtest::random_gate;
using qdbtest::random_state;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

TEST_CASE("H on |0> gives the equal superposition") {
    StateVector sv(1);
    apply_gate(sv, GateInstance::h(0));
    CHECK(std::abs(sv.amps[0] - Amplitude(kInvSqrt2, 0)) < 1e-12);
    CHECK(std::abs(sv.amps[1] - Amplitude(kInvSqrt2, 0)) < 1e-12);
}

TEST_CASE("CNOT(control=1, target=0) maps |10> to |11>") {
    StateVector sv(2);
    apply_gate(sv, GateInstance::x(1)); // prepare |10> (index 2)
    apply_gate(sv, GateInstance::cnot(1, 0));
    CHECK(sv.probability(3) == doctest::Approx(1.0));
}

TEST_CASE("RY(pi) maps |0> to |1> up to global phase") {
    StateVector sv(1);
    apply_gate(sv, GateInstance::ry(0, std::numbers::pi));
    CHECK(sv.probability(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty circuit leaves |00>") {
    Circuit c(2);
    auto sv = run_statevector(c);
    CHECK(sv.probability(0) == doctest::Approx(1.0));
}

TEST_CASE("H on both qubits gives four amplitudes of 1/2") {
    Circuit c(2);
    c.append(GateInstance::h(0)).append(GateInstance::h(1));
    auto sv = run_statevector(c);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(sv.amps[i] - Amplitude(0.5, 0)) < 1e-12);
    }
}

TEST_CASE("H then CNOT prepares the Bell state") {
    // Frozen from the 4x4 matrix product CNOT(0->1) * (H x I) applied to e_0:
    // (1/sqrt2, 0, 0, 1/sqrt2).
    Circuit c(2);
    c.append(GateInstance::h(0)).append(GateInstance::cnot(0, 1));
    auto sv = run_statevector(c);
    CHECK(std::abs(sv.amps[0] - Amplitude(kInvSqrt2, 0)) < 1e-12);
    CHECK(std::abs(sv.amps[1]) < 1e-12);
    CHECK(std::abs(sv.amps[2]) < 1e-12);
    CHECK(std::abs(sv.amps[3] - Amplitude(kInvSqrt2, 0)) < 1e-12);
}

TEST_CASE("MCZ with zero-polarity controls flips only |0...0>") {
    StateVector sv = [] {
        StateVector s(3);
        for (int q = 0; q < 3; ++q) {
            apply_gate(s, GateInstance::h(q));
        }
        return s;
    }();
    apply_gate(sv, GateInstance::mcz({{0, false}, {1, false}, {2, false}}));
    CHECK(sv.amps[0].real() < 0.0);
    for (int i = 1; i < 8; ++i) {
        CHECK(sv.amps[i].real() > 0.0);
    }
}

TEST_CASE("every gate kind matches the dense textbook matrix") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4;
        const auto gate = random_gate(n, rng);
        auto sv = random_state(n, rng);
        const auto before = sv.amps;
        apply_gate(sv, gate);
        const auto u = dense_gate_matrix(gate, n);
        for (std::size_t i = 0; i < before.size(); ++i) {
            Amplitude expect{0.0, 0.0};
            for (std::size_t j = 0; j < before.size(); ++j) {
                expect += u[i][j] * before[j];
            }
            REQUIRE(std::abs(expect - sv.amps[i]) < 1e-12);
        }
    }
}

TEST_CASE("norm is preserved after every gate of random circuits") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto sv = random_state(5, rng);
        for (int g = 0; g < 40; ++g) {
            apply_gate(sv, random_gate(5, rng));
            REQUIRE(std::abs(sv.norm_sqr() - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("applying a gate then its inverse is the identity") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        auto sv = random_state(4, rng);
        const auto original = sv.amps;
        const auto gate = random_gate(4, rng);
        apply_gate(sv, gate);
        apply_gate(sv, gate.inverse());
        for (std::size_t i = 0; i < original.size(); ++i) {
            REQUIRE(std::abs(original[i] - sv.amps[i]) < 1e-9);
        }
    }
}

TEST_CASE("gate validation rejects bad operands") {
    CHECK_THROWS_AS(validate_gate(GateInstance::h(3), 3), Error);
    CHECK_THROWS_AS(validate_gate(GateInstance::cnot(1, 1), 3), Error);
    CHECK_THROWS_AS(validate_gate(GateInstance::mcx({{0, true}, {0, false}}, 1), 3), Error);
    try {
        validate_gate(GateInstance::h(5), 2);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IndexOutOfRange);
    }
    try {
        validate_gate(GateInstance::cnot(2, 2), 4);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OverlappingOperands);
    }
}

TEST_CASE("statevector respects the qubit cap") {
    CHECK_THROWS_AS(StateVector(25), Error);
    CHECK_THROWS_AS(StateVector(10, 8), Error);
    CHECK_NOTHROW(StateVector(10, 12));
}

TEST_CASE("circuit dump uses the documented line format") {
    Circuit c(4);
    c.append(GateInstance::h(0));
    c.append(GateInstance::ry(2, 1.5));
    c.append(GateInstance::mcx({{1, true}, {3, false}}, 0));
    c.append(GateInstance::mcz({{0, false}, {2, true}}));
    const auto text = c.dump();
    CHECK(text.find("H q0") != std::string::npos);
    CHECK(text.find("RY q2 theta=1.5") != std::string::npos);
    CHECK(text.find("MCX q0 ctrl=q1+ ctrl=q3-") != std::string::npos);
    CHECK(text.find("MCZ ctrl=q0- ctrl=q2+") != std::string::npos);
}

TEST_CASE("circuit inverse undoes the circuit") {
    std::mt19937_64 rng(17);
    auto c = random_circuit(4, 30, rng);
    auto sv = random_state(4, rng);
    const auto original = sv.amps;
    for (const auto& g : c.gates) {
        apply_gate(sv, g);
    }
    for (const auto& g : c.inverse().gates) {
        apply_gate(sv, g);
    }
    for (std::size_t i = 0; i < original.size(); ++i) {
        REQUIRE(std::abs(original[i] - sv.amps[i]) < 1e-9);
    }
}
